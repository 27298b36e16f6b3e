"""Differentiable macro-F1 surrogate used to train the classifier.

The loss is 1 - (softF1+ + softF1-) / 2 where each class's soft F1 replaces
the confusion-matrix counts with probability masses:

    softF1+ = (2 * sum(p * y) + eps) / (sum(p) + sum(y) + eps)
    softF1- = the same on complements (1 - p, 1 - y)

with eps = 1e-7. At probability vertices (p in {0,1}^n) this reproduces
1 - macro F1 up to eps whenever both classes occur among the labels; with a
single-class label vector the eps convention scores the absent class 1
where the discrete report scores it 0, so callers comparing the two must
feed batches containing both classes.
"""

from __future__ import annotations

import numpy as np

EPSILON = 1e-7


class DomainError(ValueError):
    """A probability lies outside [0, 1]."""


def _validate(probabilities, labels) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(probabilities, dtype=float)
    y = np.asarray(labels, dtype=float)
    if p.ndim != 1 or y.ndim != 1 or p.shape != y.shape or p.size == 0:
        raise ValueError("probabilities and labels must be equal-length non-empty vectors")
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise DomainError("probabilities must lie in [0, 1]")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValueError("labels must be 0 or 1")
    return p, y


def soft_macro_f1_loss(probabilities, labels) -> float:
    p, y = _validate(probabilities, labels)
    pos = (2.0 * float(p @ y) + EPSILON) / (float(p.sum() + y.sum()) + EPSILON)
    q, z = 1.0 - p, 1.0 - y
    neg = (2.0 * float(q @ z) + EPSILON) / (float(q.sum() + z.sum()) + EPSILON)
    return 1.0 - 0.5 * (pos + neg)


def soft_macro_f1_grad(probabilities, labels) -> np.ndarray:
    """Analytic gradient of the loss with respect to the probabilities."""
    p, y = _validate(probabilities, labels)
    a = 2.0 * float(p @ y) + EPSILON
    b = float(p.sum() + y.sum()) + EPSILON
    d_pos = (2.0 * y * b - a) / (b * b)
    q, z = 1.0 - p, 1.0 - y
    c = 2.0 * float(q @ z) + EPSILON
    d = float(q.sum() + z.sum()) + EPSILON
    d_neg = (-2.0 * z * d + c) / (d * d)
    return -0.5 * (d_pos + d_neg)
