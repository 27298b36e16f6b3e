"""Corpus construction: standoff parsing, argument extraction, labels, masked pairs, folds."""

from suffgen.corpus.arguments import (
    Argument,
    Label,
    LabelTable,
    UnlabeledArgument,
    UnmatchedLabel,
    attach_labels,
    corpus_statistics,
    extract_arguments,
)
from suffgen.corpus.folds import FoldPlan, audit_fold_plans, make_fold_plan
from suffgen.corpus.pairs import (
    MASK_MARKER,
    MaskCollision,
    MaskedArgumentPair,
    build_masked_pairs,
    substitute_mask,
)
from suffgen.corpus.standoff import (
    AnnotationSpan,
    EssayDocument,
    MalformedRecord,
    OffsetMismatch,
    load_essay_dir,
    parse_standoff,
)

__all__ = [
    "AnnotationSpan",
    "Argument",
    "EssayDocument",
    "FoldPlan",
    "Label",
    "LabelTable",
    "MASK_MARKER",
    "MalformedRecord",
    "MaskCollision",
    "MaskedArgumentPair",
    "OffsetMismatch",
    "UnlabeledArgument",
    "UnmatchedLabel",
    "attach_labels",
    "audit_fold_plans",
    "build_masked_pairs",
    "corpus_statistics",
    "extract_arguments",
    "load_essay_dir",
    "make_fold_plan",
    "parse_standoff",
    "substitute_mask",
]
