"""Accuracy and macro precision/recall/F1 for the binary sufficiency task.

Predictions and labels are sequences over {0, 1} with 1 = sufficient. A class
that never occurs in labels or predictions gets precision, recall, and F1 of
0, the conservative convention for degenerate confusion matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class LengthMismatch(ValueError):
    """Predictions and labels differ in length."""


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ClassificationReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    positive: ClassScores
    negative: ClassScores

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "positive": vars(self.positive).copy(),
            "negative": vars(self.negative).copy(),
        }


def _class_scores(tp: int, fp: int, fn: int) -> ClassScores:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScores(precision, recall, f1)


def classification_report(predictions: Sequence[int], labels: Sequence[int]) -> ClassificationReport:
    if len(predictions) != len(labels):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(labels)} labels")
    if not labels:
        raise ValueError("need at least one example")
    for value in list(predictions) + list(labels):
        if value not in (0, 1):
            raise ValueError(f"binary values expected, got {value!r}")

    tp = sum(1 for p, y in zip(predictions, labels) if p == 1 and y == 1)
    fp = sum(1 for p, y in zip(predictions, labels) if p == 1 and y == 0)
    fn = sum(1 for p, y in zip(predictions, labels) if p == 0 and y == 1)
    tn = len(labels) - tp - fp - fn

    positive = _class_scores(tp, fp, fn)
    negative = _class_scores(tn, fn, fp)  # swapped error roles for the complement class
    return ClassificationReport(
        accuracy=(tp + tn) / len(labels),
        macro_precision=(positive.precision + negative.precision) / 2,
        macro_recall=(positive.recall + negative.recall) / 2,
        macro_f1=(positive.f1 + negative.f1) / 2,
        positive=positive,
        negative=negative,
    )
