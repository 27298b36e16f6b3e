"""Adapter binding a pre-trained bidirectional encoder to the classifier plugin.

Full-scale runs load a local pre-trained encoder checkpoint (for example a
`roberta-base`/`roberta-large` directory); the first-position pooled output
feeds one linear layer with two logits, exactly like the desk-scale stand-in.
The serialized variant markers are remapped onto the tokenizer's own special
tokens. Requires checkpoint files and GPU-class hardware; untested at desk
scale by design.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from suffgen.classifier.variants import SEPARATOR, UNKNOWN_TOKEN


class PretrainedEncoderClassifier:
    lr_scale = 1.0

    def __init__(self, model_path: str | Path, device: str = "cpu", max_length: int = 512):
        import torch
        from torch import nn
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(str(model_path))
        self.encoder = AutoModel.from_pretrained(str(model_path)).to(device)
        self.head = nn.Linear(self.encoder.config.hidden_size, 2).to(device)
        self.device = device
        self.max_length = max_length
        params = list(self.encoder.parameters()) + list(self.head.parameters())
        self._optimizer = torch.optim.AdamW(params, lr=1e-5)

    def _prepare(self, text: str) -> str:
        sep = self.tokenizer.sep_token or SEPARATOR
        unk = self.tokenizer.unk_token or UNKNOWN_TOKEN
        return text.replace(SEPARATOR, sep).replace(UNKNOWN_TOKEN, unk)

    def _probabilities(self, texts: Sequence[str]):
        torch = self._torch
        encoded = self.tokenizer(
            [self._prepare(t) for t in texts],
            return_tensors="pt",
            truncation=True,
            max_length=self.max_length,
            padding=True,
        ).to(self.device)
        pooled = self.encoder(**encoded).last_hidden_state[:, 0, :]
        return torch.softmax(self.head(pooled), dim=-1)[:, 1]

    def train_batch(self, texts: Sequence[str], labels: Sequence[int], lr: float) -> float:
        from suffgen.classifier.models import soft_macro_f1_loss_t

        torch = self._torch
        self.encoder.train()
        probs = self._probabilities(texts)
        loss = soft_macro_f1_loss_t(probs, torch.tensor(labels, dtype=torch.float, device=self.device))
        for group in self._optimizer.param_groups:
            group["lr"] = lr * self.lr_scale
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        return float(loss.detach())

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        torch = self._torch
        self.encoder.eval()
        if not texts:
            return np.zeros(0)
        with torch.no_grad():
            return self._probabilities(texts).cpu().numpy()

    def state(self) -> dict:
        encoder = {f"encoder.{k}": v.detach().clone() for k, v in self.encoder.state_dict().items()}
        head = {f"head.{k}": v.detach().clone() for k, v in self.head.state_dict().items()}
        return {**encoder, **head}

    def load_state(self, state: dict) -> None:
        self.encoder.load_state_dict(
            {k[len("encoder.") :]: v for k, v in state.items() if k.startswith("encoder.")}
        )
        self.head.load_state_dict(
            {k[len("head.") :]: v for k, v in state.items() if k.startswith("head.")}
        )

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        self.encoder.save_pretrained(str(path))
        self.tokenizer.save_pretrained(str(path))
        self._torch.save(self.head.state_dict(), path / "head.pt")

    @classmethod
    def load(cls, path: str | Path, device: str = "cpu") -> "PretrainedEncoderClassifier":
        import torch

        model = cls(path, device=device)
        model.head.load_state_dict(torch.load(Path(path) / "head.pt", weights_only=True))
        return model
