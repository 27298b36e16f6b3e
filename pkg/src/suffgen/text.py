"""Shared text utilities: tokenization, sentence segmentation, match normalization.

The token and sentence definitions here are the single source of truth for
every corpus statistic reported by the pipeline, so all modules import them
from this module instead of rolling their own.
"""

from __future__ import annotations

import difflib
import re
import unicodedata

# Words stay whole; every punctuation mark becomes its own token.
_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)

# Sentence boundary: terminal punctuation, then whitespace, then an
# uppercase letter or an opening quote.
_SENTENCE_BREAK_RE = re.compile(r"(?<=[.!?])\s+(?=[\"'“‘A-Z])")

_WHITESPACE_RE = re.compile(r"\s+")

_QUOTE_GLYPHS = {
    "‘": "'",
    "’": "'",
    "‚": "'",
    "‛": "'",
    "“": '"',
    "”": '"',
    "„": '"',
    "′": "'",
    "″": '"',
}


def tokenize(text: str) -> list[str]:
    """Split text into word and punctuation tokens."""
    return _TOKEN_RE.findall(text)


def count_tokens(text: str) -> int:
    return len(tokenize(text))


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character ranges of the sentences in `text`, in order.

    Leading/trailing whitespace is excluded from each span; the spans cover
    every non-whitespace character exactly once.
    """
    spans: list[tuple[int, int]] = []
    cursor = 0
    for match in _SENTENCE_BREAK_RE.finditer(text):
        spans.append((cursor, match.start()))
        cursor = match.end()
    if cursor < len(text):
        spans.append((cursor, len(text)))
    trimmed = []
    for start, end in spans:
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            trimmed.append((start, end))
    return trimmed


def split_sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in sentence_spans(text)]


def count_sentences(text: str) -> int:
    return len(sentence_spans(text))


def normalize_for_matching(text: str) -> str:
    """Canonical form used when matching label-table rows against arguments.

    Unicode NFC, quote glyphs unified to ASCII, runs of whitespace collapsed
    to single spaces, surrounding whitespace stripped. Case is preserved.
    """
    text = unicodedata.normalize("NFC", text)
    for glyph, ascii_form in _QUOTE_GLYPHS.items():
        text = text.replace(glyph, ascii_form)
    return _WHITESPACE_RE.sub(" ", text).strip()


def normalized_similarity(a: str, b: str) -> float:
    """Edit similarity in [0, 1] between the normalized forms of two strings."""
    return difflib.SequenceMatcher(
        None, normalize_for_matching(a), normalize_for_matching(b)
    ).ratio()
