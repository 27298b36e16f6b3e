"""Two-sided Wilcoxon signed-rank test.

Zero differences are dropped; absolute differences are midranked, and the
statistic is the positive-rank sum W+. For n <= 25 the p-value comes from the
exact null distribution of W+ conditional on the observed (mid)ranks, built
by dynamic programming over doubled ranks, which is identical to enumerating
all 2^n sign assignments. Larger n uses the normal approximation with the
tie-corrected variance (no continuity correction). Two-sided p is the null
probability of a statistic at least as far from the mean as observed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

EXACT_LIMIT = 25


class TooFewPairs(ValueError):
    """Fewer than six non-zero differences remain."""


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W+, the positive-rank sum
    n: int  # pairs remaining after dropping zero differences
    p_value: float
    method: str  # "exact" or "normal"


def _midranks(magnitudes: Sequence[float]) -> list[float]:
    order = sorted(range(len(magnitudes)), key=lambda i: magnitudes[i])
    ranks = [0.0] * len(magnitudes)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and magnitudes[order[j]] == magnitudes[order[i]]:
            j += 1
        rank = (i + 1 + j) / 2.0
        for k in range(i, j):
            ranks[order[k]] = rank
        i = j
    return ranks


def _exact_two_sided_p(doubled_ranks: list[int], doubled_statistic: int) -> float:
    total = sum(doubled_ranks)
    ways = [0] * (total + 1)
    ways[0] = 1
    for dr in doubled_ranks:
        for s in range(total, dr - 1, -1):
            ways[s] += ways[s - dr]
    center = total / 2.0
    deviation = abs(doubled_statistic - center)
    favor = sum(count for s, count in enumerate(ways) if abs(s - center) >= deviation - 1e-9)
    return favor / float(2 ** len(doubled_ranks))


def wilcoxon_signed_rank(paired_a: Sequence[float], paired_b: Sequence[float]) -> WilcoxonResult:
    if len(paired_a) != len(paired_b):
        raise ValueError("paired samples must have equal length")
    diffs = [a - b for a, b in zip(paired_a, paired_b) if a != b]
    n = len(diffs)
    if n < 6:
        raise TooFewPairs(f"only {n} non-zero differences; need at least 6")

    ranks = _midranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)

    if n <= EXACT_LIMIT:
        doubled = [round(2 * r) for r in ranks]
        p = _exact_two_sided_p(doubled, round(2 * w_plus))
        return WilcoxonResult(statistic=w_plus, n=n, p_value=min(1.0, p), method="exact")

    mean = n * (n + 1) / 4.0
    tie_counts: dict[float, int] = {}
    for r in ranks:
        tie_counts[r] = tie_counts.get(r, 0) + 1
    tie_term = sum(t**3 - t for t in tie_counts.values())
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    if variance <= 0:
        raise TooFewPairs("all differences tie away the variance")
    z = (w_plus - mean) / math.sqrt(variance)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return WilcoxonResult(statistic=w_plus, n=n, p_value=min(1.0, p), method="normal")
