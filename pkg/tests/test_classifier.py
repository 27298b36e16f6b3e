from __future__ import annotations

import numpy as np
import pytest

from suffgen.classifier.models import TrigramHashClassifier, make_encoder
from suffgen.classifier.training import (
    ClassifierConfig,
    ClassifierSearchSpace,
    DivergenceDetected,
    TrainedClassifier,
    VariantMismatch,
    hyperparameter_trials_clf,
    predict,
    prediction_from_record,
    prediction_to_record,
    train_classifier,
)
from suffgen.classifier.variants import VariantKind, build_variant_input
from suffgen.corpus.arguments import Label
from suffgen.metrics.classification import classification_report
import random


def _inputs(desk_build, kind=VariantKind.PLAIN, n=32):
    inputs = [build_variant_input(a, a.conclusion, kind) for a in desk_build.arguments]
    return (inputs * 3)[:n]


def _labels01(inputs):
    return [1 if vi.label is Label.SUFFICIENT else 0 for vi in inputs]


def test_config_ranges_enforced():
    with pytest.raises(ValueError):
        ClassifierConfig(batch_size=8, learning_rate=1e-5, seed=0)
    with pytest.raises(ValueError):
        ClassifierConfig(batch_size=64, learning_rate=1e-5, seed=0)
    with pytest.raises(ValueError):
        ClassifierConfig(batch_size=16, learning_rate=1e-3, seed=0)
    with pytest.raises(ValueError):
        ClassifierConfig(batch_size=16, learning_rate=1e-5, seed=0, epochs=5)


def test_overfit_32_examples_reaches_095_macro_f1(desk_build):
    inputs = _inputs(desk_build)
    model = TrigramHashClassifier(seed=1)
    config = ClassifierConfig(batch_size=16, learning_rate=2e-5, seed=2)
    trained = train_classifier(model, inputs, inputs[:8], config)
    predictions = predict(trained, inputs)
    report = classification_report(
        [1 if p.predicted_label is Label.SUFFICIENT else 0 for p in predictions],
        _labels01(inputs),
    )
    assert report.macro_f1 >= 0.95


def test_selected_epoch_in_range_and_scores_recorded(desk_build):
    inputs = _inputs(desk_build)
    trained = train_classifier(
        TrigramHashClassifier(seed=3),
        inputs,
        inputs[:8],
        ClassifierConfig(batch_size=16, learning_rate=1e-5, seed=4),
    )
    assert trained.selected_epoch in (1, 2, 3)
    assert len(trained.epoch_val_f1) == 3
    assert trained.kind is VariantKind.PLAIN


def test_empty_training_set_rejected(desk_build):
    with pytest.raises(ValueError):
        train_classifier(
            TrigramHashClassifier(seed=0),
            [],
            _inputs(desk_build)[:2],
            ClassifierConfig(batch_size=16, learning_rate=1e-5, seed=0),
        )


def test_mixed_variants_rejected(desk_build):
    mixed = _inputs(desk_build, VariantKind.PLAIN, 4) + _inputs(desk_build, VariantKind.CONCLUSION_ONLY, 4)
    with pytest.raises(ValueError, match="mix"):
        train_classifier(
            TrigramHashClassifier(seed=0),
            mixed,
            [],
            ClassifierConfig(batch_size=16, learning_rate=1e-5, seed=0),
        )


class _ScriptedEncoder:
    """Protocol stub with a fixed probability table."""

    lr_scale = 1.0

    def __init__(self, probability=0.5, loss=0.5):
        self.probability = probability
        self.loss = loss

    def train_batch(self, texts, labels, lr):
        return self.loss

    def predict_proba(self, texts):
        return np.full(len(texts), self.probability)

    def state(self):
        return {}

    def load_state(self, state):
        pass


def test_probability_half_predicts_sufficient(desk_build):
    # The 0.5 decision boundary goes to the positive class.
    inputs = _inputs(desk_build)[:4]
    trained = TrainedClassifier(
        model=_ScriptedEncoder(probability=0.5), kind=VariantKind.PLAIN, selected_epoch=1, epoch_val_f1=()
    )
    predictions = predict(trained, inputs)
    assert len(predictions) == len(inputs)
    assert all(p.predicted_label is Label.SUFFICIENT for p in predictions)
    assert all(p.probability_sufficient == 0.5 for p in predictions)


def test_probabilities_stay_in_unit_interval(desk_build):
    inputs = _inputs(desk_build)
    model = TrigramHashClassifier(seed=5)
    trained = train_classifier(
        model, inputs, inputs[:4], ClassifierConfig(batch_size=16, learning_rate=5e-5, seed=6)
    )
    for p in predict(trained, inputs):
        assert 0.0 <= p.probability_sufficient <= 1.0


def test_variant_mismatch_rejected(desk_build):
    trained = TrainedClassifier(
        model=_ScriptedEncoder(), kind=VariantKind.PLAIN, selected_epoch=1, epoch_val_f1=()
    )
    with pytest.raises(VariantMismatch):
        predict(trained, _inputs(desk_build, VariantKind.CONCLUSION_ONLY, 4))


def test_divergence_detected(desk_build):
    with pytest.raises(DivergenceDetected):
        train_classifier(
            _ScriptedEncoder(loss=float("inf")),
            _inputs(desk_build),
            [],
            ClassifierConfig(batch_size=16, learning_rate=1e-5, seed=0),
        )


def test_training_is_deterministic_given_seed(desk_build):
    inputs = _inputs(desk_build)
    probas = []
    for _ in range(2):
        model = TrigramHashClassifier(seed=11)
        trained = train_classifier(
            model, inputs, inputs[:8], ClassifierConfig(batch_size=16, learning_rate=2e-5, seed=12)
        )
        probas.append([p.probability_sufficient for p in predict(trained, inputs)])
    assert probas[0] == probas[1]


def test_trials_seeded_and_counted(desk_build):
    inputs = _inputs(desk_build)
    runs = []
    for _ in range(2):
        config, trained, trials = hyperparameter_trials_clf(
            ClassifierSearchSpace(),
            inputs,
            inputs[:8],
            model_factory=lambda s: TrigramHashClassifier(seed=s),
            n_trials=4,
            seed=13,
        )
        runs.append((config, [t.config for t in trials], [t.val_macro_f1 for t in trials]))
    assert runs[0] == runs[1]
    assert len(runs[0][1]) == 4
    for cfg in runs[0][1]:
        assert 16 <= cfg.batch_size <= 32
        assert 1e-6 <= cfg.learning_rate <= 5e-5


def test_degenerate_classifier_space():
    space = ClassifierSearchSpace(batch_size_range=(20, 20), learning_rate_range=(1e-5, 1e-5))
    config = space.sample(random.Random(0), seed=1)
    assert config.batch_size == 20
    assert config.learning_rate == pytest.approx(1e-5)


def test_save_load_roundtrip(tmp_path, desk_build):
    inputs = _inputs(desk_build)
    model = TrigramHashClassifier(seed=7)
    train_classifier(
        model, inputs, inputs[:4], ClassifierConfig(batch_size=16, learning_rate=2e-5, seed=8)
    )
    model.save(tmp_path / "clf.pt")
    loaded = TrigramHashClassifier.load(tmp_path / "clf.pt")
    np.testing.assert_allclose(
        loaded.predict_proba([vi.serialized for vi in inputs[:5]]),
        model.predict_proba([vi.serialized for vi in inputs[:5]]),
    )


def test_prediction_record_roundtrip():
    from suffgen.classifier.training import Prediction

    pred = Prediction("essay001#T1", 0.75, Label.SUFFICIENT)
    assert prediction_from_record(prediction_to_record(pred)) == pred
    with pytest.raises(ValueError):
        Prediction("essay001#T1", 1.5, Label.SUFFICIENT)


def test_make_encoder_registry():
    encoder = make_encoder("trigram", seed=3)
    assert isinstance(encoder, TrigramHashClassifier)
    with pytest.raises(ValueError):
        make_encoder("unknown-model", seed=0)
