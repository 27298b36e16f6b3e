from __future__ import annotations

import numpy as np
import pytest

from suffgen.metrics.bertscore import (
    HashedNgramEmbedder,
    bertscore,
    compute_rescale_baseline,
    raw_bertscore,
)


def test_self_similarity_is_one():
    embedder = HashedNgramEmbedder()
    assert raw_bertscore("museums deserve funding", "museums deserve funding", embedder) == pytest.approx(1.0)
    assert bertscore("museums deserve funding", "museums deserve funding", embedder, 0.25) == pytest.approx(1.0)


def test_three_token_toy_vectors_match_hand_computation():
    # Fixed unit vectors: candidate tokens map to e1, e2; reference tokens to
    # e1, (e1+e2)/sqrt(2), e3. Greedy max-cosine by hand:
    # precision = (1 + 1/sqrt(2)) / 2, recall = (1 + 1/sqrt(2) + 0) / 3.
    table = {
        "a": np.array([1.0, 0.0, 0.0]),
        "b": np.array([0.0, 1.0, 0.0]),
        "c": np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0),
        "d": np.array([0.0, 0.0, 1.0]),
    }

    def embedder(tokens):
        return np.stack([table[t] for t in tokens])

    precision = (1.0 + 1.0 / np.sqrt(2.0)) / 2.0
    recall = (1.0 + 1.0 / np.sqrt(2.0)) / 3.0
    expected = 2 * precision * recall / (precision + recall)
    assert raw_bertscore("a b", "a c d", embedder) == pytest.approx(expected)


def test_rescaling_formula():
    embedder = HashedNgramEmbedder()
    raw = raw_bertscore("parks are good", "parks are great", embedder)
    baseline = 0.2
    assert bertscore("parks are good", "parks are great", embedder, baseline) == pytest.approx(
        (raw - baseline) / (1 - baseline)
    )
    with pytest.raises(ValueError):
        bertscore("a", "b", embedder, 1.0)


def test_empty_inputs():
    embedder = HashedNgramEmbedder()
    assert raw_bertscore("", "", embedder) == 1.0
    assert raw_bertscore("something", "", embedder) == 0.0
    assert raw_bertscore("", "something", embedder) == 0.0


def test_embedder_failure_propagates():
    def broken(tokens):
        raise RuntimeError("embedder exploded")

    with pytest.raises(RuntimeError, match="embedder exploded"):
        raw_bertscore("a", "b", broken)


def test_hash_embedder_is_deterministic_and_contextual():
    embedder = HashedNgramEmbedder()
    first = embedder(["the", "cat", "sat"])
    second = embedder(["the", "cat", "sat"])
    np.testing.assert_array_equal(first, second)
    np.testing.assert_allclose(np.linalg.norm(first, axis=1), 1.0, atol=1e-12)
    # Same token, different neighbors: the vector must shift.
    other = embedder(["the", "cat", "ran"])
    assert not np.allclose(first[1], other[1])


def test_baseline_is_seeded_mean_of_random_pairs():
    embedder = HashedNgramEmbedder()
    texts = [f"sentence number {i} about topic {i % 5}" for i in range(30)]
    first = compute_rescale_baseline(texts, embedder, n_pairs=100, seed=4)
    second = compute_rescale_baseline(texts, embedder, n_pairs=100, seed=4)
    assert first == pytest.approx(second)
    assert 0.0 < first < 1.0
    assert compute_rescale_baseline(["only one"], embedder) == 0.0


def test_similar_strings_score_higher_than_unrelated():
    embedder = HashedNgramEmbedder()
    related = raw_bertscore("students study in the library", "students studied at the library", embedder)
    unrelated = raw_bertscore("students study in the library", "zebras gallop across plains", embedder)
    assert related > unrelated
