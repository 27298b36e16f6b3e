"""ROUGE-N and ROUGE-L F1 scores over token lists, scaled to [0, 100].

Preprocessing for text inputs is pinned by `prepare_rouge_tokens`: lowercase,
punctuation split into separate tokens, no stemming. Scores are computed per
candidate/reference pair; corpus-level numbers are plain means over pairs.
"""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from suffgen.text import tokenize


def prepare_rouge_tokens(text: str) -> list[str]:
    return [t.lower() for t in tokenize(text)]


def _f1(overlap: float, n_candidate: float, n_reference: float) -> float:
    if overlap == 0 or n_candidate == 0 or n_reference == 0:
        return 0.0
    precision = overlap / n_candidate
    recall = overlap / n_reference
    return 100.0 * 2.0 * precision * recall / (precision + recall)


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> float:
    """F1 of clipped n-gram multiset overlap, in [0, 100]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = Counter(tuple(candidate[i : i + n]) for i in range(len(candidate) - n + 1))
    refe = Counter(tuple(reference[i : i + n]) for i in range(len(reference) - n + 1))
    overlap = sum(min(count, refe[gram]) for gram, count in cand.items())
    return _f1(overlap, sum(cand.values()), sum(refe.values()))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """F1 from the longest common subsequence, in [0, 100]."""
    return _f1(_lcs_length(candidate, reference), len(candidate), len(reference))
