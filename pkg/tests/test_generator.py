from __future__ import annotations

import math

import pytest

from suffgen.corpus.pairs import MASK_MARKER, substitute_mask
from suffgen.generator.config import (
    MAX_SEQUENCE_UNITS,
    GenerationConfig,
    GenerationSearchSpace,
)
from suffgen.generator.models import MASK, CharSeq2Seq, DecodeFailure
from suffgen.generator.training import (
    DivergenceDetected,
    cosine_lr,
    finetune,
    generate_infill,
    hyperparameter_trials_gen,
)
import random


def _config(**overrides) -> GenerationConfig:
    base = dict(variant="supervised", batch_size=4, learning_rate=3e-5, seed=9)
    base.update(overrides)
    return GenerationConfig(**base)


def test_config_ranges_enforced():
    with pytest.raises(ValueError):
        _config(batch_size=3)
    with pytest.raises(ValueError):
        _config(batch_size=9)
    with pytest.raises(ValueError):
        _config(learning_rate=1e-3)
    with pytest.raises(ValueError):
        _config(epochs=2)
    with pytest.raises(ValueError):
        _config(beam_size=4)
    with pytest.raises(ValueError):
        _config(warmup_steps=10)
    with pytest.raises(ValueError):
        _config(variant="zero-shot")


def test_cosine_schedule_shape():
    base = 1.0
    ramp = [cosine_lr(base, s, 200, 50) for s in range(50)]
    assert ramp[0] == pytest.approx(1 / 50)
    assert ramp[-1] == pytest.approx(1.0)
    assert all(b > a for a, b in zip(ramp, ramp[1:]))
    decay = [cosine_lr(base, s, 200, 50) for s in range(50, 200)]
    assert all(b <= a for a, b in zip(decay, decay[1:]))
    assert cosine_lr(base, 199, 200, 50) == pytest.approx(
        0.5 * (1 + math.cos(math.pi * 149 / 150))
    )


def test_decode_is_deterministic(desk_build):
    pairs = list(desk_build.pairs)[:4]
    texts = [p.source for p in pairs] + [p.target for p in pairs]
    model = CharSeq2Seq.from_texts(texts, seed=5)
    first = model.decode([p.source for p in pairs], beam_size=5)
    second = model.decode([p.source for p in pairs], beam_size=5)
    assert first == second
    assert all(isinstance(text, str) for text in first)


def test_identical_seeds_build_identical_models(desk_build):
    pairs = list(desk_build.pairs)[:2]
    texts = [p.source for p in pairs]
    a = CharSeq2Seq.from_texts(texts, seed=5)
    b = CharSeq2Seq.from_texts(texts, seed=5)
    assert a.decode([pairs[0].source], beam_size=5) == b.decode([pairs[0].source], beam_size=5)


def test_generate_infill_contracts(desk_build):
    pair = desk_build.pairs[0]
    model = CharSeq2Seq.from_texts([pair.source, pair.target], seed=1)
    output = generate_infill(model, pair.source, _config())
    assert isinstance(output, str) and output

    with pytest.raises(ValueError):
        generate_infill(model, "no mask marker here", _config())
    with pytest.raises(ValueError):
        generate_infill(model, f"{MASK_MARKER} and {MASK_MARKER}", _config())

    class EmptyDecoder:
        lr_scale = 1.0

        def decode(self, sources, beam_size):
            return ["" for _ in sources]

    with pytest.raises(DecodeFailure):
        generate_infill(EmptyDecoder(), f"Thus, {MASK_MARKER}.", _config())


def test_source_encoding_keeps_mask_under_truncation():
    model = CharSeq2Seq(alphabet="ab ", seed=0)
    long_prefix = "a" * (MAX_SEQUENCE_UNITS + 50)
    ids = model._source_ids(long_prefix + MASK_MARKER + "bb")
    assert len(ids) <= MAX_SEQUENCE_UNITS
    assert MASK in ids
    tail_ids = model._source_ids("a" * 10 + MASK_MARKER + "b" * (MAX_SEQUENCE_UNITS + 50))
    assert len(tail_ids) == MAX_SEQUENCE_UNITS
    assert MASK in tail_ids


def test_save_load_roundtrip(tmp_path, desk_build):
    pair = desk_build.pairs[0]
    model = CharSeq2Seq.from_texts([pair.source, pair.target], seed=3)
    model.train_batch([pair.source], [pair.target], lr=1e-5)
    model.save(tmp_path / "model.pt")
    loaded = CharSeq2Seq.load(tmp_path / "model.pt")
    assert loaded.decode([pair.source], beam_size=5) == model.decode([pair.source], beam_size=5)


# --- fine-tuning ---


def _thirty_two_pairs(desk_build):
    pairs = list(desk_build.pairs)
    repeated = (pairs * 3)[:32]
    return repeated


def test_finetune_loss_decreases_on_overfit_set(desk_build):
    pairs = _thirty_two_pairs(desk_build)
    texts = [p.source for p in pairs] + [p.target for p in pairs]
    model = CharSeq2Seq.from_texts(texts, seed=5)
    config = _config()

    losses: list[float] = []
    original = model.train_batch

    def tracking_train_batch(sources, targets, lr):
        loss = original(sources, targets, lr)
        losses.append(loss)
        return loss

    model.train_batch = tracking_train_batch
    _, scores = finetune(model, pairs, pairs[:4], config)

    steps_per_epoch = math.ceil(len(pairs) / config.batch_size)
    assert len(losses) == 3 * steps_per_epoch
    means = [
        sum(losses[i * steps_per_epoch : (i + 1) * steps_per_epoch]) / steps_per_epoch
        for i in range(3)
    ]
    assert means[0] > means[1] > means[2], means
    assert [s.epoch for s in scores] == [1, 2, 3]


def test_finetune_requires_training_pairs(desk_build):
    model = CharSeq2Seq.from_texts(["a"], seed=0)
    with pytest.raises(ValueError):
        finetune(model, [], list(desk_build.pairs)[:2], _config())


class _ScriptedDenoiser:
    """Protocol stub whose validation quality is scripted per epoch."""

    lr_scale = 1.0

    def __init__(self, fills_by_epoch: dict[int, str], loss: float = 1.0):
        self.fills_by_epoch = fills_by_epoch
        self.loss = loss
        self.decode_rounds = 0
        self.loaded_marker = None

    def train_batch(self, sources, targets, lr):
        return self.loss

    def decode(self, sources, beam_size):
        self.decode_rounds += 1
        fill = self.fills_by_epoch.get(self.decode_rounds, "")
        return [substitute_mask(s, fill) for s in sources]

    def state(self):
        return {"marker": self.decode_rounds}

    def load_state(self, state):
        self.loaded_marker = state["marker"]


def test_epoch_selection_returns_argmax_checkpoint(desk_build):
    pairs = list(desk_build.pairs)[:6]
    val = pairs[:2]
    gold = val[0].conclusion
    model = _ScriptedDenoiser({1: "zzz qqq", 2: gold, 3: "zzz qqq"})
    returned, scores = finetune(model, pairs, val, _config())
    assert len(scores) == 3
    best = max(scores, key=lambda s: s.validation_bertscore)
    assert best.epoch == 2
    assert returned.loaded_marker == 2
    assert scores[1].raw_bertscore >= scores[0].raw_bertscore


def test_divergence_detected_on_nonfinite_loss(desk_build):
    model = _ScriptedDenoiser({}, loss=float("nan"))
    with pytest.raises(DivergenceDetected):
        finetune(model, list(desk_build.pairs)[:4], [], _config())


# --- hyperparameter trials ---


def test_trials_run_exactly_n_and_are_seeded(desk_build):
    pairs = list(desk_build.pairs)[:6]
    seen_configs: list[tuple[int, float]] = []

    def factory(seed):
        return _ScriptedDenoiser({1: "aa", 2: "bb", 3: "cc"})

    config, model, trials = hyperparameter_trials_gen(
        GenerationSearchSpace(),
        pairs,
        pairs[:2],
        model_factory=factory,
        variant="supervised",
        n_trials=10,
        seed=21,
    )
    assert len(trials) == 10
    config2, _, trials2 = hyperparameter_trials_gen(
        GenerationSearchSpace(),
        pairs,
        pairs[:2],
        model_factory=factory,
        variant="supervised",
        n_trials=10,
        seed=21,
    )
    assert [t.config for t in trials] == [t.config for t in trials2]
    assert config == config2
    for t in trials:
        assert 4 <= t.config.batch_size <= 8
        assert 5e-6 <= t.config.learning_rate <= 5e-5


def test_degenerate_search_space_returns_single_point(desk_build):
    pairs = list(desk_build.pairs)[:4]
    space = GenerationSearchSpace(batch_size_range=(6, 6), learning_rate_range=(2e-5, 2e-5))
    config, _, trials = hyperparameter_trials_gen(
        space,
        pairs,
        pairs[:1],
        model_factory=lambda seed: _ScriptedDenoiser({1: "x", 2: "y", 3: "z"}),
        variant="supervised",
        n_trials=3,
        seed=4,
    )
    assert config.batch_size == 6
    assert config.learning_rate == pytest.approx(2e-5)
    assert all(t.config.batch_size == 6 for t in trials)


def test_search_space_sampling_is_log_uniform_and_in_bounds():
    space = GenerationSearchSpace()
    rng = random.Random(0)
    samples = [space.sample(rng, "supervised", seed=1) for _ in range(200)]
    lrs = [s.learning_rate for s in samples]
    assert all(5e-6 <= lr <= 5e-5 for lr in lrs)
    assert {s.batch_size for s in samples} == {4, 5, 6, 7, 8}
    below_geo_mean = sum(1 for lr in lrs if lr < math.sqrt(5e-6 * 5e-5)) / len(lrs)
    assert 0.35 < below_geo_mean < 0.65  # log-uniform median at the geometric mean
