from __future__ import annotations

import pytest

from suffgen.corpus.build import CorpusBuild, build_corpus
from suffgen.synthesis import DESK_PROFILE, SynthesizedCorpus, synthesize_corpus

DESK_SEED = 3
FULL_SEED = 20210908


@pytest.fixture(scope="session")
def desk_corpus(tmp_path_factory) -> tuple[SynthesizedCorpus, CorpusBuild]:
    """Six-essay fixture corpus, built end to end (2 runs x 5 folds)."""
    root = tmp_path_factory.mktemp("desk-corpus")
    corpus = synthesize_corpus(
        n_essays=6, n_arguments=15, n_sufficient=8, n_extra_conclusions=5,
        seed=DESK_SEED, profile=DESK_PROFILE,
    )
    corpus.write(root / "essays", root / "labels.tsv")
    build = build_corpus(root / "essays", root / "labels.tsv", runs=2, folds=5, seed=DESK_SEED)
    return corpus, build


@pytest.fixture(scope="session")
def desk_build(desk_corpus) -> CorpusBuild:
    return desk_corpus[1]


@pytest.fixture(scope="session")
def full_scale_corpus(tmp_path_factory) -> tuple[SynthesizedCorpus, CorpusBuild]:
    """Reference-scale fixture corpus: 402 essays, 1029 arguments, 1506 pairs."""
    root = tmp_path_factory.mktemp("full-corpus")
    corpus = synthesize_corpus(seed=FULL_SEED)
    corpus.write(root / "essays", root / "labels.tsv")
    build = build_corpus(root / "essays", root / "labels.tsv", runs=2, folds=5, seed=FULL_SEED)
    return corpus, build
