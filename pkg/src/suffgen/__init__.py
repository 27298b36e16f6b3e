"""Conclusion infilling and sufficiency classification for annotated argument corpora."""

__version__ = "0.1.0"
