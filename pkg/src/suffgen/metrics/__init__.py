"""Reference implementations of every measurement used in the evaluation stack."""

from suffgen.metrics.agreement import (
    AnnotationRecord,
    ApproachSummary,
    IncompleteItem,
    UndefinedAlpha,
    krippendorff_alpha,
    majority_and_rank,
)
from suffgen.metrics.bertscore import HashedNgramEmbedder, bertscore, compute_rescale_baseline
from suffgen.metrics.classification import ClassificationReport, LengthMismatch, classification_report
from suffgen.metrics.rouge import prepare_rouge_tokens, rouge_l, rouge_n
from suffgen.metrics.wilcoxon import TooFewPairs, WilcoxonResult, wilcoxon_signed_rank

__all__ = [
    "AnnotationRecord",
    "ApproachSummary",
    "ClassificationReport",
    "HashedNgramEmbedder",
    "IncompleteItem",
    "LengthMismatch",
    "TooFewPairs",
    "UndefinedAlpha",
    "WilcoxonResult",
    "bertscore",
    "classification_report",
    "compute_rescale_baseline",
    "krippendorff_alpha",
    "majority_and_rank",
    "prepare_rouge_tokens",
    "rouge_l",
    "rouge_n",
]
