"""Adapter binding a pre-trained sequence-to-sequence denoiser to the plugin boundary.

Full-scale runs load a large pre-trained denoising checkpoint (for example a
local `facebook/bart-large` directory) through this adapter; it satisfies the
same decode/train interface as the desk-scale character model. The
`transformers` dependency is imported lazily so desk-scale environments never
need it. This path requires checkpoint files and GPU-class hardware and is
deliberately untested at desk scale.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from suffgen.corpus.pairs import MASK_MARKER
from suffgen.generator.config import (
    MAX_INFILL_UNITS,
    MAX_SEQUENCE_UNITS,
    MIN_INFILL_UNITS,
)


class PretrainedDenoiser:
    """Wraps a seq2seq language model checkpoint with mask-infilling decoding."""

    lr_scale = 1.0

    def __init__(self, model_path: str | Path, device: str = "cpu"):
        import torch
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(str(model_path))
        self.model = AutoModelForSeq2SeqLM.from_pretrained(str(model_path)).to(device)
        self.device = device
        self._optimizer = torch.optim.AdamW(self.model.parameters(), lr=1e-5)

    def _prepare(self, text: str) -> str:
        mask_token = self.tokenizer.mask_token or MASK_MARKER
        return text.replace(MASK_MARKER, mask_token)

    def decode(self, sources: Sequence[str], beam_size: int) -> list[str]:
        torch = self._torch
        outputs = []
        self.model.eval()
        with torch.no_grad():
            for source in sources:
                encoded = self.tokenizer(
                    self._prepare(source),
                    return_tensors="pt",
                    truncation=True,
                    max_length=MAX_SEQUENCE_UNITS,
                ).to(self.device)
                n_source = int(encoded["input_ids"].shape[1])
                generated = self.model.generate(
                    **encoded,
                    num_beams=beam_size,
                    min_length=min(n_source + MIN_INFILL_UNITS, MAX_SEQUENCE_UNITS - 1),
                    max_length=min(n_source + MAX_INFILL_UNITS, MAX_SEQUENCE_UNITS),
                    do_sample=False,
                )
                outputs.append(self.tokenizer.decode(generated[0], skip_special_tokens=True))
        return outputs

    def train_batch(self, sources: Sequence[str], targets: Sequence[str], lr: float) -> float:
        self.model.train()
        encoded = self.tokenizer(
            [self._prepare(s) for s in sources],
            return_tensors="pt",
            truncation=True,
            max_length=MAX_SEQUENCE_UNITS,
            padding=True,
        ).to(self.device)
        labels = self.tokenizer(
            list(targets),
            return_tensors="pt",
            truncation=True,
            max_length=MAX_SEQUENCE_UNITS,
            padding=True,
        ).input_ids.to(self.device)
        labels[labels == self.tokenizer.pad_token_id] = -100
        loss = self.model(**encoded, labels=labels).loss
        for group in self._optimizer.param_groups:
            group["lr"] = lr * self.lr_scale
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        return float(loss.detach())

    def state(self) -> dict:
        return {k: v.detach().clone() for k, v in self.model.state_dict().items()}

    def load_state(self, state: dict) -> None:
        self.model.load_state_dict(state)

    def save(self, path: str | Path) -> None:
        self.model.save_pretrained(str(path))
        self.tokenizer.save_pretrained(str(path))
