"""Classifier training with direct macro-F1 optimization and epoch selection.

Three epochs minimizing the soft macro-F1 surrogate; after each epoch the
validation macro F1 (discrete, from the metrics module) picks the surviving
checkpoint. Prediction applies the fixed 0.5 threshold, ties going to the
sufficient class.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from suffgen.classifier.models import EncoderClassifier
from suffgen.classifier.variants import VariantInput, VariantKind
from suffgen.corpus.arguments import Label
from suffgen.metrics.classification import classification_report
from suffgen.seeding import derive_seed

logger = logging.getLogger(__name__)

BATCH_SIZE_RANGE = (16, 32)
LEARNING_RATE_RANGE = (1e-6, 5e-5)
EPOCHS = 3
DECISION_THRESHOLD = 0.5


class DivergenceDetected(RuntimeError):
    """Training loss became non-finite."""


class VariantMismatch(ValueError):
    """Inputs were serialized under a different variant than the model was trained on."""


@dataclass(frozen=True)
class ClassifierConfig:
    batch_size: int
    learning_rate: float
    seed: int
    epochs: int = EPOCHS

    def __post_init__(self) -> None:
        lo, hi = BATCH_SIZE_RANGE
        if not lo <= self.batch_size <= hi:
            raise ValueError(f"batch_size must be in [{lo}, {hi}], got {self.batch_size}")
        lo_lr, hi_lr = LEARNING_RATE_RANGE
        if not lo_lr <= self.learning_rate <= hi_lr:
            raise ValueError(f"learning_rate must be in [{lo_lr}, {hi_lr}], got {self.learning_rate}")
        if self.epochs != EPOCHS:
            raise ValueError(f"epochs is fixed at {EPOCHS}")

    def as_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "epochs": self.epochs,
        }


@dataclass(frozen=True)
class ClassifierSearchSpace:
    batch_size_range: tuple[int, int] = BATCH_SIZE_RANGE
    learning_rate_range: tuple[float, float] = LEARNING_RATE_RANGE

    def sample(self, rng: random.Random, seed: int) -> ClassifierConfig:
        batch = rng.randint(*self.batch_size_range)
        lo, hi = self.learning_rate_range
        lr = math.exp(rng.uniform(math.log(lo), math.log(hi)))
        return ClassifierConfig(batch_size=batch, learning_rate=lr, seed=seed)


@dataclass(frozen=True)
class Prediction:
    argument_id: str
    probability_sufficient: float
    predicted_label: Label

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability_sufficient <= 1.0:
            raise ValueError(f"probability {self.probability_sufficient} outside [0, 1]")


@dataclass
class TrainedClassifier:
    model: EncoderClassifier
    kind: VariantKind
    selected_epoch: int
    epoch_val_f1: tuple[float, ...]


def _labels01(inputs: Sequence[VariantInput]) -> list[int]:
    return [1 if vi.label is Label.SUFFICIENT else 0 for vi in inputs]


def _check_single_kind(inputs: Sequence[VariantInput]) -> VariantKind:
    kinds = {vi.kind for vi in inputs}
    if len(kinds) != 1:
        raise ValueError(f"inputs mix variants: {sorted(k.value for k in kinds)}")
    return next(iter(kinds))


def _validation_macro_f1(model: EncoderClassifier, inputs_val: Sequence[VariantInput]) -> float:
    probs = model.predict_proba([vi.serialized for vi in inputs_val])
    predicted = [1 if p >= DECISION_THRESHOLD else 0 for p in probs]
    return classification_report(predicted, _labels01(inputs_val)).macro_f1


def train_classifier(
    model: EncoderClassifier,
    inputs_train: Sequence[VariantInput],
    inputs_val: Sequence[VariantInput],
    config: ClassifierConfig,
) -> TrainedClassifier:
    """Three epochs on one fold's training inputs; keeps the best-validation checkpoint.

    With an empty validation set the final epoch survives (logged); ties in
    validation macro F1 go to the earlier epoch.
    """
    if not inputs_train:
        raise ValueError("training inputs must be non-empty")
    kind = _check_single_kind(list(inputs_train) + list(inputs_val))

    rng = random.Random(derive_seed(config.seed, "classifier-shuffle"))
    scores: list[float] = []
    best_state, best_f1, best_epoch = None, -math.inf, 0
    for epoch in range(1, config.epochs + 1):
        order = list(inputs_train)
        rng.shuffle(order)
        for i in range(0, len(order), config.batch_size):
            batch = order[i : i + config.batch_size]
            loss = model.train_batch(
                [vi.serialized for vi in batch], _labels01(batch), config.learning_rate
            )
            if not math.isfinite(loss):
                raise DivergenceDetected(f"non-finite loss {loss} in epoch {epoch}")
        if inputs_val:
            f1 = _validation_macro_f1(model, inputs_val)
            scores.append(f1)
            if f1 > best_f1:
                best_state, best_f1, best_epoch = model.state(), f1, epoch
        else:
            best_state, best_epoch = model.state(), epoch
    if not inputs_val:
        logger.info("no validation inputs; keeping the final epoch checkpoint")
    model.load_state(best_state)
    return TrainedClassifier(
        model=model, kind=kind, selected_epoch=best_epoch, epoch_val_f1=tuple(scores)
    )


def predict(trained: TrainedClassifier, inputs: Sequence[VariantInput]) -> list[Prediction]:
    if not inputs:
        return []
    kind = _check_single_kind(inputs)
    if kind is not trained.kind:
        raise VariantMismatch(f"model trained on {trained.kind.value}, inputs are {kind.value}")
    probs = trained.model.predict_proba([vi.serialized for vi in inputs])
    return [
        Prediction(
            argument_id=vi.argument_id,
            probability_sufficient=float(p),
            predicted_label=Label.SUFFICIENT if p >= DECISION_THRESHOLD else Label.INSUFFICIENT,
        )
        for vi, p in zip(inputs, probs)
    ]


def prediction_to_record(p: Prediction) -> dict:
    return {
        "argument_id": p.argument_id,
        "probability_sufficient": p.probability_sufficient,
        "predicted_label": p.predicted_label.value,
    }


def prediction_from_record(record: dict) -> Prediction:
    return Prediction(
        argument_id=record["argument_id"],
        probability_sufficient=record["probability_sufficient"],
        predicted_label=Label(record["predicted_label"]),
    )


@dataclass(frozen=True)
class ClassifierTrial:
    config: ClassifierConfig
    val_macro_f1: float
    selected_epoch: int


def hyperparameter_trials_clf(
    space: ClassifierSearchSpace,
    inputs_train: Sequence[VariantInput],
    inputs_val: Sequence[VariantInput],
    model_factory: Callable[[int], EncoderClassifier],
    n_trials: int = 10,
    seed: int = 0,
) -> tuple[ClassifierConfig, TrainedClassifier, list[ClassifierTrial]]:
    """Seeded random search over classifier configurations; best trial's model wins."""
    rng = random.Random(derive_seed(seed, "clf-trials"))
    trials: list[ClassifierTrial] = []
    best: tuple[float, int] | None = None
    best_trained: TrainedClassifier | None = None
    for trial_index in range(n_trials):
        trial_seed = derive_seed(seed, "clf-trial", trial_index)
        config = space.sample(rng, seed=trial_seed)
        model = model_factory(trial_seed)
        trained = train_classifier(model, inputs_train, inputs_val, config)
        score = (
            _validation_macro_f1(trained.model, inputs_val) if inputs_val else 0.0
        )
        trials.append(
            ClassifierTrial(config=config, val_macro_f1=score, selected_epoch=trained.selected_epoch)
        )
        if best is None or score > best[0]:
            best = (score, trial_index)
            best_trained = trained
    assert best is not None and best_trained is not None
    return trials[best[1]].config, best_trained, trials
