"""Recovering the generated conclusion from a decoded full argument.

The decoder reproduces the whole argument, so the conclusion must be cut back
out by aligning the decoded text against the mask's surrounding context. When
the decoder copied the context verbatim this is exact; when it paraphrased,
anchors shrink down to 10 characters per side before giving up. With no
usable anchors at all, the whole decoded text (minus any exact context
matches) is returned and the extraction is flagged as a fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

from suffgen.corpus.pairs import MASK_MARKER

MIN_ANCHOR = 10


@dataclass(frozen=True)
class InfillExtraction:
    text: str
    fallback: bool


def split_mask(masked_text: str) -> tuple[str, str]:
    """Prefix and suffix around the single mask marker."""
    if masked_text.count(MASK_MARKER) != 1:
        raise ValueError("masked text must contain exactly one mask marker")
    prefix, suffix = masked_text.split(MASK_MARKER)
    return prefix, suffix


def extract_infill(masked_text: str, infilled_text: str) -> InfillExtraction:
    prefix, suffix = split_mask(masked_text)

    if (
        infilled_text.startswith(prefix)
        and infilled_text.endswith(suffix)
        and len(infilled_text) >= len(prefix) + len(suffix)
    ):
        return InfillExtraction(infilled_text[len(prefix) : len(infilled_text) - len(suffix)], False)

    start = _match_prefix_tail(prefix, infilled_text)
    if start is not None:
        end = _match_suffix_head(suffix, infilled_text, start)
        if end is not None:
            return InfillExtraction(infilled_text[start:end], False)

    remainder = infilled_text
    if prefix and remainder.startswith(prefix):
        remainder = remainder[len(prefix) :]
    if suffix and remainder.endswith(suffix):
        remainder = remainder[: len(remainder) - len(suffix)]
    return InfillExtraction(remainder, True)


def _match_prefix_tail(prefix: str, infilled: str) -> int | None:
    if not prefix:
        return 0
    shortest = min(len(prefix), MIN_ANCHOR)
    for anchor in range(len(prefix), shortest - 1, -1):
        idx = infilled.find(prefix[-anchor:])
        if idx != -1:
            return idx + anchor
    return None


def _match_suffix_head(suffix: str, infilled: str, start: int) -> int | None:
    if not suffix:
        return len(infilled)
    shortest = min(len(suffix), MIN_ANCHOR)
    for anchor in range(len(suffix), shortest - 1, -1):
        idx = infilled.find(suffix[:anchor], start)
        if idx != -1:
            return idx
    return None
