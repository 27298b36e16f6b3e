from __future__ import annotations

import pytest

from suffgen.corpus.build import build_corpus
from suffgen.synthesis import DESK_PROFILE, synthesize_corpus


def test_requested_counts_are_honored_exactly(tmp_path):
    corpus = synthesize_corpus(
        n_essays=10, n_arguments=24, n_sufficient=15, n_extra_conclusions=7,
        seed=42, profile=DESK_PROFILE,
    )
    corpus.write(tmp_path / "essays", tmp_path / "labels.tsv")
    build = build_corpus(tmp_path / "essays", tmp_path / "labels.tsv", runs=1, folds=5, seed=1)
    stats = build.statistics
    assert stats.n_essays == 10
    assert stats.n_arguments == 24
    assert stats.n_sufficient == 15
    assert stats.n_insufficient == 9
    assert stats.n_pairs == 24 + 7
    assert stats.skipped_claims == 7


def test_synthesis_is_deterministic(tmp_path):
    a = synthesize_corpus(n_essays=4, n_arguments=9, n_sufficient=5, n_extra_conclusions=3,
                          seed=7, profile=DESK_PROFILE)
    b = synthesize_corpus(n_essays=4, n_arguments=9, n_sufficient=5, n_extra_conclusions=3,
                          seed=7, profile=DESK_PROFILE)
    assert a == b
    c = synthesize_corpus(n_essays=4, n_arguments=9, n_sufficient=5, n_extra_conclusions=3,
                          seed=8, profile=DESK_PROFILE)
    assert a != c


def test_label_rows_match_extracted_passages(desk_corpus):
    corpus, build = desk_corpus
    by_text = {(row[0], row[1]) for row in corpus.label_rows}
    for arg in build.arguments:
        assert (arg.essay_id, arg.full_text) in by_text


def test_parameter_validation():
    with pytest.raises(ValueError):
        synthesize_corpus(n_essays=10, n_arguments=5, n_sufficient=3, n_extra_conclusions=0)
    with pytest.raises(ValueError):
        synthesize_corpus(n_essays=2, n_arguments=4, n_sufficient=2, n_extra_conclusions=5)
    with pytest.raises(ValueError):
        synthesize_corpus(n_essays=2, n_arguments=4, n_sufficient=9, n_extra_conclusions=1)


def test_every_essay_has_major_claim_and_annotations(desk_corpus):
    corpus, build = desk_corpus
    for doc in build.documents:
        kinds = {s.kind for s in doc.components}
        assert "MajorClaim" in kinds
        assert "Claim" in kinds
        assert "Premise" in kinds
