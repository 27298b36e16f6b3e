"""Encoder plugin boundary and the desk-scale hashed-trigram classifier.

An encoder handle pools a serialized variant input into a vector, feeds a
single linear layer producing two logits, and exposes the softmax probability
of the sufficient class. Desk-scale runs use `TrigramHashClassifier`, which
pools hashed character trigrams through an embedding bag; full-scale runs
bind a pre-trained bidirectional encoder (first-position pooled output)
behind the identical interface. As with the denoiser, each handle carries an
`lr_scale` mapping the sampled pre-trained-scale learning rates into its own
regime.
"""

from __future__ import annotations

import copy
import zlib
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np
import torch
from torch import nn

from suffgen.classifier.loss import EPSILON


class EncoderClassifier(Protocol):
    lr_scale: float

    def train_batch(self, texts: Sequence[str], labels: Sequence[int], lr: float) -> float: ...

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray: ...

    def state(self) -> dict: ...

    def load_state(self, state: dict) -> None: ...


def soft_macro_f1_loss_t(probabilities: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Torch twin of `suffgen.classifier.loss.soft_macro_f1_loss` (same formula)."""
    p, y = probabilities, labels.to(probabilities.dtype)
    pos = (2.0 * (p * y).sum() + EPSILON) / (p.sum() + y.sum() + EPSILON)
    q, z = 1.0 - p, 1.0 - y
    neg = (2.0 * (q * z).sum() + EPSILON) / (q.sum() + z.sum() + EPSILON)
    return 1.0 - 0.5 * (pos + neg)


class TrigramHashClassifier(nn.Module):
    """Mean-pooled hashed character trigrams, one linear layer, two logits."""

    def __init__(self, buckets: int = 4096, dim: int = 64, seed: int = 0, lr_scale: float = 4e3):
        super().__init__()
        self.buckets = buckets
        self.dim = dim
        self.seed = seed
        self.lr_scale = lr_scale
        torch.manual_seed(seed)
        self.embedding = nn.EmbeddingBag(buckets, dim, mode="mean")
        self.head = nn.Linear(dim, 2)
        self._optimizer = torch.optim.Adam(self.parameters(), lr=1e-3)

    def _features(self, text: str) -> list[int]:
        padded = f"^^{text.lower()}$$"
        grams = [padded[i : i + 3] for i in range(len(padded) - 2)]
        return [zlib.crc32(g.encode("utf-8")) % self.buckets for g in grams] or [0]

    def _batch_tensor(self, texts: Sequence[str]) -> tuple[torch.Tensor, torch.Tensor]:
        flat: list[int] = []
        offsets: list[int] = []
        for text in texts:
            offsets.append(len(flat))
            flat.extend(self._features(text))
        return torch.tensor(flat, dtype=torch.long), torch.tensor(offsets, dtype=torch.long)

    def _probabilities(self, texts: Sequence[str]) -> torch.Tensor:
        flat, offsets = self._batch_tensor(texts)
        logits = self.head(self.embedding(flat, offsets))
        return torch.softmax(logits, dim=-1)[:, 1]

    def train_batch(self, texts: Sequence[str], labels: Sequence[int], lr: float) -> float:
        if len(texts) != len(labels) or not texts:
            raise ValueError("need equally many non-empty texts and labels")
        self.train()
        probs = self._probabilities(texts)
        loss = soft_macro_f1_loss_t(probs, torch.tensor(labels, dtype=torch.float))
        for group in self._optimizer.param_groups:
            group["lr"] = lr * self.lr_scale
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        return float(loss.detach())

    @torch.no_grad()
    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        self.eval()
        if not texts:
            return np.zeros(0)
        return self._probabilities(texts).numpy()

    def state(self) -> dict:
        return copy.deepcopy({k: v.detach().clone() for k, v in self.state_dict().items()})

    def load_state(self, state: dict) -> None:
        self.load_state_dict(state)

    def save(self, path: str | Path) -> None:
        torch.save(
            {
                "kind": "trigram-hash",
                "buckets": self.buckets,
                "dim": self.dim,
                "seed": self.seed,
                "lr_scale": self.lr_scale,
                "state_dict": self.state_dict(),
            },
            path,
        )

    @classmethod
    def load(cls, path: str | Path) -> "TrigramHashClassifier":
        payload = torch.load(path, weights_only=True)
        if payload.get("kind") != "trigram-hash":
            raise ValueError(f"{path}: not a trigram-hash checkpoint")
        model = cls(
            buckets=payload["buckets"],
            dim=payload["dim"],
            seed=payload["seed"],
            lr_scale=payload["lr_scale"],
        )
        model.load_state_dict(payload["state_dict"])
        return model


def make_encoder(spec: str, seed: int) -> EncoderClassifier:
    """Resolve a model spec string to an encoder handle.

    "trigram" builds the desk-scale hashed-trigram classifier;
    "pretrained:<path>" loads a pre-trained encoder checkpoint directory.
    """
    if spec == "trigram":
        return TrigramHashClassifier(seed=seed)
    if spec.startswith("pretrained:"):
        from suffgen.classifier.pretrained import PretrainedEncoderClassifier

        return PretrainedEncoderClassifier(spec.split(":", 1)[1])
    raise ValueError(f"unknown encoder spec {spec!r}")
