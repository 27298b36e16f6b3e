"""Conclusion infilling: masked-span generation, extraction, and fine-tuning."""

from suffgen.generator.config import (
    MAX_INFILL_UNITS,
    MAX_SEQUENCE_UNITS,
    MIN_INFILL_UNITS,
    GenerationConfig,
    GenerationSearchSpace,
)
from suffgen.generator.infill import InfillExtraction, extract_infill, split_mask
from suffgen.generator.models import CharSeq2Seq, DecodeFailure
from suffgen.generator.training import (
    CheckpointScore,
    DivergenceDetected,
    GeneratedConclusion,
    finetune,
    generate_infill,
    hyperparameter_trials_gen,
)

__all__ = [
    "CharSeq2Seq",
    "CheckpointScore",
    "DecodeFailure",
    "DivergenceDetected",
    "GeneratedConclusion",
    "GenerationConfig",
    "GenerationSearchSpace",
    "InfillExtraction",
    "MAX_INFILL_UNITS",
    "MAX_SEQUENCE_UNITS",
    "MIN_INFILL_UNITS",
    "extract_infill",
    "finetune",
    "generate_infill",
    "hyperparameter_trials_gen",
    "split_mask",
]
