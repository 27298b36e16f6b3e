from __future__ import annotations

import math
import random
from itertools import product

import pytest

from suffgen.metrics.wilcoxon import TooFewPairs, wilcoxon_signed_rank

# --- oracle: full enumeration of all 2^n sign assignments ---


def oracle_exact_p(diffs: list[float]) -> tuple[float, float]:
    """(W+, two-sided p) by enumerating every sign assignment of the ranks."""
    n = len(diffs)
    magnitudes = [abs(d) for d in diffs]
    order = sorted(range(n), key=lambda i: magnitudes[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j < n and magnitudes[order[j]] == magnitudes[order[i]]:
            j += 1
        for k in range(i, j):
            ranks[order[k]] = (i + 1 + j) / 2.0
        i = j
    w_observed = sum(r for r, d in zip(ranks, diffs) if d > 0)
    center = sum(ranks) / 2.0
    deviation = abs(w_observed - center)
    favorable = 0
    for signs in product((0, 1), repeat=n):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if abs(w - center) >= deviation - 1e-12:
            favorable += 1
    return w_observed, favorable / 2.0**n


def test_identical_vectors_signal_too_few_pairs():
    values = [0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3]
    with pytest.raises(TooFewPairs):
        wilcoxon_signed_rank(values, values)


def test_minimum_pair_count_enforced():
    with pytest.raises(TooFewPairs):
        wilcoxon_signed_rank([1, 2, 3, 4, 5], [0, 0, 0, 0, 0])
    wilcoxon_signed_rank([1, 2, 3, 4, 5, 6], [0, 0, 0, 0, 0, 0])  # 6 pairs pass


def test_textbook_eight_pair_example_matches_enumeration():
    a = [125, 115, 130, 140, 140, 115, 140, 125]
    b = [110, 122, 125, 120, 140, 124, 123, 137]
    diffs = [x - y for x, y in zip(a, b) if x != y]
    result = wilcoxon_signed_rank(a, b)
    w_oracle, p_oracle = oracle_exact_p(diffs)
    assert result.method == "exact"
    assert result.statistic == pytest.approx(w_oracle)
    assert result.p_value == pytest.approx(p_oracle, abs=1e-12)


def test_enumeration_equivalence_up_to_n_12():
    rng = random.Random(20210908)
    for trial in range(60):
        n = rng.randint(6, 12)
        with_ties = rng.random() < 0.5
        diffs = []
        for _ in range(n):
            magnitude = rng.randint(1, 6) if with_ties else rng.uniform(0.5, 9.5)
            diffs.append(magnitude * rng.choice((-1, 1)))
        a = list(diffs)
        b = [0.0] * n
        result = wilcoxon_signed_rank(a, b)
        w_oracle, p_oracle = oracle_exact_p(diffs)
        assert result.method == "exact"
        assert result.statistic == pytest.approx(w_oracle), (trial, diffs)
        assert abs(result.p_value - p_oracle) < 1e-9, (trial, diffs)


def test_all_positive_differences_saturate_significance():
    shifts = [0.05 + 0.001 * i for i in range(20)]
    base = [0.8 + 0.002 * i for i in range(20)]
    result = wilcoxon_signed_rank([b + s for b, s in zip(base, shifts)], base)
    assert result.method == "exact"
    assert result.p_value == pytest.approx(2.0 / 2**20)
    assert result.p_value < 0.05


def test_normal_approximation_for_large_n():
    rng = random.Random(5)
    a = [rng.gauss(0.2, 1.0) for _ in range(40)]
    b = [0.0] * 40
    result = wilcoxon_signed_rank(a, b)
    assert result.method == "normal"
    assert 0.0 <= result.p_value <= 1.0

    # Hand-computed z for a known statistic: with n=40 and no ties,
    # mean = 410, var = n(n+1)(2n+1)/24 = 5535.
    mean, var = 40 * 41 / 4, 40 * 41 * 81 / 24
    z = (result.statistic - mean) / math.sqrt(var)
    assert result.p_value == pytest.approx(math.erfc(abs(z) / math.sqrt(2.0)))


def test_tie_correction_reduces_variance():
    # 30 identical magnitudes but mixed signs: heavy tie correction applies.
    diffs = [1.0] * 18 + [-1.0] * 12
    a = diffs
    b = [0.0] * 30
    result = wilcoxon_signed_rank(a, b)
    assert result.method == "normal"
    n = 30
    tie_term = (n**3 - n)  # single tie group of all 30 ranks
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    mean = n * (n + 1) / 4.0
    z = (result.statistic - mean) / math.sqrt(variance)
    assert result.p_value == pytest.approx(math.erfc(abs(z) / math.sqrt(2.0)))


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        wilcoxon_signed_rank([1, 2], [1])
