"""Generator training configuration and hyperparameter search space."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

VARIANTS = ("unsupervised", "supervised")

BATCH_SIZE_RANGE = (4, 8)
LEARNING_RATE_RANGE = (5e-6, 5e-5)
EPOCHS = 3
WARMUP_STEPS = 50
BEAM_SIZE = 5

# Sequence-length policy: inputs are capped at 512 units, truncated at the
# argument tail but never inside the mask region; the infilled span may add
# between 3 and 60 units relative to the unmasked source.
MAX_SEQUENCE_UNITS = 512
MIN_INFILL_UNITS = 3
MAX_INFILL_UNITS = 60


@dataclass(frozen=True)
class GenerationConfig:
    variant: str
    batch_size: int
    learning_rate: float
    seed: int
    epochs: int = EPOCHS
    warmup_steps: int = WARMUP_STEPS
    scheduler: str = "cosine"
    beam_size: int = BEAM_SIZE

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        lo, hi = BATCH_SIZE_RANGE
        if not lo <= self.batch_size <= hi:
            raise ValueError(f"batch_size must be in [{lo}, {hi}], got {self.batch_size}")
        lo_lr, hi_lr = LEARNING_RATE_RANGE
        if not lo_lr <= self.learning_rate <= hi_lr:
            raise ValueError(f"learning_rate must be in [{lo_lr}, {hi_lr}], got {self.learning_rate}")
        if self.epochs != EPOCHS:
            raise ValueError(f"epochs is fixed at {EPOCHS}")
        if self.warmup_steps != WARMUP_STEPS:
            raise ValueError(f"warmup_steps is fixed at {WARMUP_STEPS}")
        if self.scheduler != "cosine":
            raise ValueError("scheduler is fixed to cosine decay")
        if self.beam_size != BEAM_SIZE:
            raise ValueError(f"beam_size is fixed at {BEAM_SIZE}")

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "epochs": self.epochs,
            "warmup_steps": self.warmup_steps,
            "scheduler": self.scheduler,
            "beam_size": self.beam_size,
        }


@dataclass(frozen=True)
class GenerationSearchSpace:
    """Random-search space: uniform batch size, log-uniform learning rate."""

    batch_size_range: tuple[int, int] = BATCH_SIZE_RANGE
    learning_rate_range: tuple[float, float] = LEARNING_RATE_RANGE

    def sample(self, rng: random.Random, variant: str, seed: int) -> GenerationConfig:
        batch = rng.randint(*self.batch_size_range)
        lo, hi = self.learning_rate_range
        lr = math.exp(rng.uniform(math.log(lo), math.log(hi)))
        return GenerationConfig(variant=variant, batch_size=batch, learning_rate=lr, seed=seed)
