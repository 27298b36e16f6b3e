"""Input-variant construction and sufficiency classification."""

from suffgen.classifier.loss import DomainError, soft_macro_f1_grad, soft_macro_f1_loss
from suffgen.classifier.training import (
    ClassifierConfig,
    Prediction,
    TrainedClassifier,
    VariantMismatch,
    predict,
    train_classifier,
)
from suffgen.classifier.variants import (
    GENERATED_KINDS,
    MissingGenerated,
    VariantInput,
    VariantKind,
    build_variant_input,
)

__all__ = [
    "ClassifierConfig",
    "DomainError",
    "GENERATED_KINDS",
    "MissingGenerated",
    "Prediction",
    "TrainedClassifier",
    "VariantInput",
    "VariantKind",
    "VariantMismatch",
    "build_variant_input",
    "predict",
    "soft_macro_f1_grad",
    "soft_macro_f1_loss",
    "train_classifier",
]
