"""Embedding-similarity F1 via greedy token matching, with empirical rescaling.

The score embeds both token sequences, matches every token greedily to its
max-cosine counterpart in the other sequence, averages the two directions
into precision and recall, and rescales the F1 by an empirical random-pair
baseline: (F1 - baseline) / (1 - baseline).

The embedder is pluggable: any callable mapping a token list to a matrix of
unit-normalized vectors works, so desk-scale runs bind the deterministic
hashed-ngram embedder below while full runs bind a pre-trained contextual
encoder. Embedder exceptions propagate untouched.
"""

from __future__ import annotations

import random
import zlib
from typing import Callable, Sequence

import numpy as np

from suffgen.seeding import derive_seed
from suffgen.text import tokenize

Embedder = Callable[[Sequence[str]], np.ndarray]


class HashedNgramEmbedder:
    """Deterministic stand-in embedder: hashed character n-grams plus neighbor mixing.

    Not a trained model; it only guarantees that identical tokens embed
    identically, similar surface forms land near each other, and a token's
    vector shifts with its neighbors (so the output is sequence-dependent).
    """

    def __init__(self, dim: int = 64, context_weight: float = 0.25):
        self.dim = dim
        self.context_weight = context_weight

    def _token_vector(self, token: str) -> np.ndarray:
        vec = np.zeros(self.dim)
        padded = f"^{token.lower()}$"
        for n in (2, 3):
            for i in range(max(1, len(padded) - n + 1)):
                gram = padded[i : i + n]
                h = zlib.crc32(gram.encode("utf-8"))
                vec[h % self.dim] += 1.0 if (h >> 16) & 1 else -1.0
        return vec

    def __call__(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dim))
        base = np.stack([self._token_vector(t) for t in tokens])
        mixed = base.copy()
        mixed[1:] += self.context_weight * base[:-1]
        mixed[:-1] += self.context_weight * base[1:]
        norms = np.linalg.norm(mixed, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        return mixed / norms


def _raw_f1(candidate_tokens: Sequence[str], reference_tokens: Sequence[str], embedder: Embedder) -> float:
    if not candidate_tokens and not reference_tokens:
        return 1.0
    if not candidate_tokens or not reference_tokens:
        return 0.0
    sim = np.asarray(embedder(candidate_tokens)) @ np.asarray(embedder(reference_tokens)).T
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def bertscore(candidate: str, reference: str, embedder: Embedder, rescale_baseline: float = 0.0) -> float:
    """Rescaled greedy-matching F1 between two strings."""
    if not 0.0 <= rescale_baseline < 1.0:
        raise ValueError(f"rescale baseline must be in [0, 1), got {rescale_baseline}")
    raw = _raw_f1(tokenize(candidate), tokenize(reference), embedder)
    return (raw - rescale_baseline) / (1.0 - rescale_baseline)


def raw_bertscore(candidate: str, reference: str, embedder: Embedder) -> float:
    return _raw_f1(tokenize(candidate), tokenize(reference), embedder)


def compute_rescale_baseline(
    texts: Sequence[str], embedder: Embedder, n_pairs: int = 1000, seed: int = 0
) -> float:
    """Mean raw F1 over seeded random text pairs; the floor for rescaling."""
    if len(texts) < 2:
        return 0.0
    rng = random.Random(derive_seed(seed, "bertscore-baseline"))
    total = 0.0
    for _ in range(n_pairs):
        a, b = rng.sample(range(len(texts)), 2)
        total += _raw_f1(tokenize(texts[a]), tokenize(texts[b]), embedder)
    return total / n_pairs
