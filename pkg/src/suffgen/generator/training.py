"""Fine-tuning, epoch selection, and hyperparameter trials for the denoiser.

Supervised training minimizes token-level cross-entropy on (masked argument,
full argument) pairs for exactly three epochs under a cosine learning-rate
schedule with 50 warm-up steps. After every epoch the model decodes the
validation sources, the conclusions are extracted, and their mean rescaled
embedding-similarity F1 against the gold conclusions decides which epoch's
checkpoint survives. The unsupervised variant skips all of this and decodes
with its pre-training weights only; it never sees labels or gold conclusions.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from suffgen.corpus.pairs import MaskedArgumentPair
from suffgen.generator.config import GenerationConfig, GenerationSearchSpace
from suffgen.generator.infill import extract_infill
from suffgen.generator.models import DecodeFailure, DenoiserModel
from suffgen.metrics.bertscore import (
    Embedder,
    HashedNgramEmbedder,
    compute_rescale_baseline,
    raw_bertscore,
)
from suffgen.seeding import derive_seed

logger = logging.getLogger(__name__)


class DivergenceDetected(RuntimeError):
    """Training loss became non-finite."""


@dataclass(frozen=True)
class CheckpointScore:
    epoch: int
    validation_bertscore: float  # rescaled; the selection key
    raw_bertscore: float


@dataclass(frozen=True)
class GeneratedConclusion:
    argument_id: str
    pair_id: str
    text: str
    run_index: int
    fold_index: int
    variant: str
    raw_infilled: str
    extraction_fallback: bool

    def __post_init__(self) -> None:
        if not self.text and not self.extraction_fallback:
            raise ValueError(f"{self.pair_id}: empty conclusion without extraction fallback")


def generate_infill(model: DenoiserModel, masked_text: str, config: GenerationConfig) -> str:
    """Beam-decode the full argument for one masked source."""
    if masked_text.count("<mask>") != 1:
        raise ValueError("masked text must contain exactly one mask marker")
    decoded = model.decode([masked_text], beam_size=config.beam_size)[0]
    if not decoded:
        raise DecodeFailure("model emitted an empty sequence")
    return decoded


def cosine_lr(base_lr: float, step: int, total_steps: int, warmup_steps: int) -> float:
    """Learning rate at a 0-based global step: linear warm-up, then cosine decay to 0."""
    if step < warmup_steps:
        return base_lr * (step + 1) / warmup_steps
    span = max(1, total_steps - warmup_steps)
    progress = min(1.0, (step - warmup_steps) / span)
    return base_lr * 0.5 * (1.0 + math.cos(math.pi * progress))


def _mean_validation_bertscore(
    model: DenoiserModel,
    pairs_val: Sequence[MaskedArgumentPair],
    config: GenerationConfig,
    embedder: Embedder,
    baseline: float,
) -> tuple[float, float]:
    """(rescaled, raw) mean similarity of extracted conclusions vs gold on validation."""
    if not pairs_val:
        return 0.0, 0.0
    decoded = model.decode([p.source for p in pairs_val], beam_size=config.beam_size)
    raw_total = 0.0
    for pair, full in zip(pairs_val, decoded):
        extraction = extract_infill(pair.source, full)
        raw_total += raw_bertscore(extraction.text, pair.conclusion, embedder)
    raw_mean = raw_total / len(pairs_val)
    return (raw_mean - baseline) / (1.0 - baseline), raw_mean


def finetune(
    model: DenoiserModel,
    pairs_train: Sequence[MaskedArgumentPair],
    pairs_val: Sequence[MaskedArgumentPair],
    config: GenerationConfig,
    embedder: Embedder | None = None,
) -> tuple[DenoiserModel, list[CheckpointScore]]:
    """Three epochs of cross-entropy over masked pairs; returns the best checkpoint.

    The rescaling baseline for the validation score is computed from the
    training conclusions only, keeping model selection inside the fold.
    """
    if not pairs_train:
        raise ValueError("training pairs must be non-empty")
    embedder = embedder or HashedNgramEmbedder()
    # Clamp guards the degenerate all-identical-conclusions corpus.
    baseline = min(
        0.99,
        compute_rescale_baseline(
            [p.conclusion for p in pairs_train], embedder, n_pairs=200, seed=config.seed
        ),
    )
    rng = random.Random(derive_seed(config.seed, "finetune-shuffle"))
    steps_per_epoch = math.ceil(len(pairs_train) / config.batch_size)
    total_steps = config.epochs * steps_per_epoch

    scores: list[CheckpointScore] = []
    best_state, best_score, best_epoch = None, -math.inf, 0
    step = 0
    for epoch in range(1, config.epochs + 1):
        order = list(pairs_train)
        rng.shuffle(order)
        epoch_loss = 0.0
        for i in range(0, len(order), config.batch_size):
            batch = order[i : i + config.batch_size]
            lr = cosine_lr(config.learning_rate, step, total_steps, config.warmup_steps)
            loss = model.train_batch([p.source for p in batch], [p.target for p in batch], lr)
            if not math.isfinite(loss):
                raise DivergenceDetected(f"non-finite loss {loss} at step {step}")
            epoch_loss += loss
            step += 1
        rescaled, raw = _mean_validation_bertscore(model, pairs_val, config, embedder, baseline)
        scores.append(CheckpointScore(epoch=epoch, validation_bertscore=rescaled, raw_bertscore=raw))
        logger.debug("epoch %d: mean train loss %.4f, val score %.4f", epoch, epoch_loss / steps_per_epoch, rescaled)
        if rescaled > best_score:
            best_state, best_score, best_epoch = model.state(), rescaled, epoch

    model.load_state(best_state)
    logger.info("selected epoch %d of %d (val score %.4f)", best_epoch, config.epochs, best_score)
    return model, scores


@dataclass(frozen=True)
class GenerationTrial:
    config: GenerationConfig
    checkpoint_scores: tuple[CheckpointScore, ...]
    best_score: float


def hyperparameter_trials_gen(
    space: GenerationSearchSpace,
    pairs_train: Sequence[MaskedArgumentPair],
    pairs_val: Sequence[MaskedArgumentPair],
    model_factory: Callable[[int], DenoiserModel],
    variant: str,
    n_trials: int = 10,
    seed: int = 0,
    embedder: Embedder | None = None,
) -> tuple[GenerationConfig, DenoiserModel, list[GenerationTrial]]:
    """Seeded random search; returns the best configuration and its trained model."""
    rng = random.Random(derive_seed(seed, "gen-trials"))
    trials: list[GenerationTrial] = []
    best: tuple[float, int] | None = None
    best_model: DenoiserModel | None = None
    for trial_index in range(n_trials):
        trial_seed = derive_seed(seed, "gen-trial", trial_index)
        config = space.sample(rng, variant=variant, seed=trial_seed)
        model = model_factory(trial_seed)
        model, scores = finetune(model, pairs_train, pairs_val, config, embedder=embedder)
        score = max(s.validation_bertscore for s in scores)
        trials.append(GenerationTrial(config=config, checkpoint_scores=tuple(scores), best_score=score))
        if best is None or score > best[0]:
            best = (score, trial_index)
            best_model = model
    assert best is not None and best_model is not None
    return trials[best[1]].config, best_model, trials
