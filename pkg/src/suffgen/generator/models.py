"""Denoiser plugin boundary and the desk-scale character-level model.

A denoiser handle needs exactly two capabilities: beam-search decoding of
masked sources and a gradient step on (source, target) batches. Desk-scale
runs bind `CharSeq2Seq`, a small character-level GRU encoder-decoder with dot
attention that trains in seconds on CPU; full-scale runs bind a pre-trained
sequence-to-sequence denoiser through the same interface (see
`suffgen.generator.pretrained`).

Because the sampled learning rates target large pre-trained models, every
handle carries an `lr_scale` that maps them into its own stable regime; the
pre-trained adapter uses 1.0.
"""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Protocol, Sequence

import torch
from torch import nn

from suffgen.corpus.pairs import MASK_MARKER
from suffgen.generator.config import (
    MAX_INFILL_UNITS,
    MAX_SEQUENCE_UNITS,
    MIN_INFILL_UNITS,
)

PAD, BOS, EOS, UNK, MASK = 0, 1, 2, 3, 4
_SPECIALS = 5
_MASK_SENTINEL = "\x00"


class DecodeFailure(RuntimeError):
    """The model produced an empty output sequence."""


class DenoiserModel(Protocol):
    lr_scale: float

    def decode(self, sources: Sequence[str], beam_size: int) -> list[str]: ...

    def train_batch(self, sources: Sequence[str], targets: Sequence[str], lr: float) -> float: ...

    def state(self) -> dict: ...

    def load_state(self, state: dict) -> None: ...


class CharSeq2Seq(nn.Module):
    """Character-level GRU encoder-decoder with dot-product attention."""

    def __init__(self, alphabet: str, embed_dim: int = 32, hidden_dim: int = 64,
                 seed: int = 0, lr_scale: float = 500.0):
        super().__init__()
        self.alphabet = "".join(sorted(set(alphabet)))
        self.lr_scale = lr_scale
        self.embed_dim = embed_dim
        self.hidden_dim = hidden_dim
        self.seed = seed
        self._char_to_id = {c: i + _SPECIALS for i, c in enumerate(self.alphabet)}
        self._id_to_char = {i + _SPECIALS: c for i, c in enumerate(self.alphabet)}
        vocab = _SPECIALS + len(self.alphabet)

        torch.manual_seed(seed)
        self.embedding = nn.Embedding(vocab, embed_dim, padding_idx=PAD)
        self.encoder = nn.GRU(embed_dim, hidden_dim, batch_first=True)
        self.decoder = nn.GRU(embed_dim, hidden_dim, batch_first=True)
        self.output = nn.Linear(hidden_dim * 2, vocab)
        self._optimizer = torch.optim.Adam(self.parameters(), lr=1e-3)

    @classmethod
    def from_texts(cls, texts: Sequence[str], **kwargs) -> "CharSeq2Seq":
        chars = set()
        for text in texts:
            chars.update(text.replace(MASK_MARKER, ""))
        return cls(alphabet="".join(chars), **kwargs)

    # --- encoding helpers ---

    def _source_ids(self, source: str) -> list[int]:
        text = source.replace(MASK_MARKER, _MASK_SENTINEL)
        ids = [MASK if c == _MASK_SENTINEL else self._char_to_id.get(c, UNK) for c in text]
        if len(ids) > MAX_SEQUENCE_UNITS:
            # Truncate the tail unless that would cut the mask region off.
            if MASK in ids:
                mask_end = ids.index(MASK) + 1
                if mask_end > MAX_SEQUENCE_UNITS:
                    return ids[mask_end - MAX_SEQUENCE_UNITS : mask_end]
            ids = ids[:MAX_SEQUENCE_UNITS]
        return ids

    def _target_ids(self, target: str) -> list[int]:
        ids = [self._char_to_id.get(c, UNK) for c in target]
        return ids[:MAX_SEQUENCE_UNITS]

    def _detokenize(self, ids: Sequence[int]) -> str:
        return "".join(self._id_to_char.get(i, "") for i in ids if i >= _SPECIALS)

    def _attend(self, dec_out: torch.Tensor, enc_out: torch.Tensor, src_mask: torch.Tensor) -> torch.Tensor:
        scores = dec_out @ enc_out.transpose(1, 2)
        scores = scores.masked_fill(~src_mask.unsqueeze(1), float("-inf"))
        context = torch.softmax(scores, dim=-1) @ enc_out
        return self.output(torch.cat([dec_out, context], dim=-1))

    # --- training ---

    def train_batch(self, sources: Sequence[str], targets: Sequence[str], lr: float) -> float:
        if len(sources) != len(targets) or not sources:
            raise ValueError("need equally many non-empty sources and targets")
        self.train()
        src = [self._source_ids(s) for s in sources]
        dec_in = [[BOS] + self._target_ids(t) for t in targets]
        labels = [self._target_ids(t) + [EOS] for t in targets]

        src_pad = _pad(src)
        dec_pad = _pad(dec_in)
        lab_pad = _pad(labels)
        src_mask = src_pad != PAD

        enc_out, enc_h = self.encoder(self.embedding(src_pad))
        dec_out, _ = self.decoder(self.embedding(dec_pad), enc_h)
        logits = self._attend(dec_out, enc_out, src_mask)
        loss = nn.functional.cross_entropy(
            logits.reshape(-1, logits.size(-1)), lab_pad.reshape(-1), ignore_index=PAD
        )
        for group in self._optimizer.param_groups:
            group["lr"] = lr * self.lr_scale
        self._optimizer.zero_grad()
        loss.backward()
        self._optimizer.step()
        return float(loss.detach())

    # --- decoding ---

    @torch.no_grad()
    def decode(self, sources: Sequence[str], beam_size: int) -> list[str]:
        self.eval()
        return [self._beam_decode(s, beam_size) for s in sources]

    def _beam_decode(self, source: str, beam_size: int) -> str:
        ids = self._source_ids(source)
        src = torch.tensor([ids], dtype=torch.long)
        enc_out, enc_h = self.encoder(self.embedding(src))

        sans_mask = len([i for i in ids if i != MASK])
        min_len = min(sans_mask + MIN_INFILL_UNITS, MAX_SEQUENCE_UNITS - 1)
        max_len = min(sans_mask + MAX_INFILL_UNITS, MAX_SEQUENCE_UNITS)

        # Live beams are advanced as one batch; `hidden` is (1, n_beams, H).
        scores = [0.0]
        tokens: list[tuple[int, ...]] = [(BOS,)]
        hidden = enc_h
        finished: list[tuple[float, tuple[int, ...]]] = []
        src_mask = torch.ones(1, len(ids), dtype=torch.bool)
        for step in range(max_len):
            n_beams = len(tokens)
            step_in = self.embedding(torch.tensor([[t[-1]] for t in tokens], dtype=torch.long))
            dec_out, new_hidden = self.decoder(step_in, hidden)
            logits = self._attend(dec_out, enc_out.expand(n_beams, -1, -1), src_mask.expand(n_beams, -1))
            logits = logits[:, -1, :]
            logits[:, [PAD, BOS, UNK, MASK]] = float("-inf")
            if step < min_len:
                logits[:, EOS] = float("-inf")
            log_probs = torch.log_softmax(logits, dim=-1)
            top = torch.topk(log_probs, min(beam_size, log_probs.size(-1)), dim=-1)

            candidates = []
            for b in range(n_beams):
                for logp, token in zip(top.values[b].tolist(), top.indices[b].tolist()):
                    candidates.append((scores[b] + logp, tokens[b] + (token,), b))
            candidates.sort(key=lambda c: (-c[0], c[1]))

            scores, tokens, keep = [], [], []
            for score, seq, b in candidates:
                if seq[-1] == EOS:
                    finished.append((score, seq))
                else:
                    scores.append(score)
                    tokens.append(seq)
                    keep.append(b)
                if len(tokens) >= beam_size:
                    break
            if len(finished) >= beam_size or not tokens:
                break
            hidden = new_hidden[:, keep, :]
        if finished:
            finished.sort(key=lambda c: (-c[0], c[1]))
            best = finished[0][1]
        elif tokens:
            best = tokens[0]
        else:  # pragma: no cover - beams can only drain into `finished`
            best = (BOS,)
        return self._detokenize(best)

    # --- checkpointing ---

    def state(self) -> dict:
        return copy.deepcopy({k: v.detach().clone() for k, v in self.state_dict().items()})

    def load_state(self, state: dict) -> None:
        self.load_state_dict(state)

    def save(self, path: str | Path) -> None:
        torch.save(
            {
                "kind": "char-seq2seq",
                "alphabet": self.alphabet,
                "embed_dim": self.embed_dim,
                "hidden_dim": self.hidden_dim,
                "seed": self.seed,
                "lr_scale": self.lr_scale,
                "state_dict": self.state_dict(),
            },
            path,
        )

    @classmethod
    def load(cls, path: str | Path) -> "CharSeq2Seq":
        payload = torch.load(path, weights_only=True)
        if payload.get("kind") != "char-seq2seq":
            raise ValueError(f"{path}: not a char-seq2seq checkpoint")
        model = cls(
            alphabet=payload["alphabet"],
            embed_dim=payload["embed_dim"],
            hidden_dim=payload["hidden_dim"],
            seed=payload["seed"],
            lr_scale=payload["lr_scale"],
        )
        model.load_state_dict(payload["state_dict"])
        return model


def _pad(sequences: list[list[int]]) -> torch.Tensor:
    width = max(len(s) for s in sequences)
    return torch.tensor([s + [PAD] * (width - len(s)) for s in sequences], dtype=torch.long)


def make_denoiser(spec: str, texts: Sequence[str], seed: int) -> DenoiserModel:
    """Resolve a model spec string to a denoiser handle.

    "tiny-char" builds the desk-scale character model (alphabet from `texts`);
    "pretrained:<path>" loads a pre-trained checkpoint directory.
    """
    if spec == "tiny-char":
        return CharSeq2Seq.from_texts(texts, seed=seed)
    if spec.startswith("pretrained:"):
        from suffgen.generator.pretrained import PretrainedDenoiser

        return PretrainedDenoiser(spec.split(":", 1)[1])
    raise ValueError(f"unknown denoiser spec {spec!r}")
