"""Experiment orchestration: generation stage, classifier matrix, aggregation, reports."""

from suffgen.harness.generation import (
    GENERATED_SCHEMA,
    generated_from_record,
    generated_to_record,
    run_generation,
    run_generator_training,
)
from suffgen.harness.matrix import (
    AggregateResult,
    CellResult,
    ExperimentMatrix,
    MissingCell,
    aggregate_cells,
    plan_cells,
    run_matrix,
)
from suffgen.harness.reporting import (
    render_assessment_table,
    render_generation_table,
    render_stats_block,
    score_generated,
    significance_table,
)

__all__ = [
    "AggregateResult",
    "CellResult",
    "ExperimentMatrix",
    "GENERATED_SCHEMA",
    "MissingCell",
    "aggregate_cells",
    "generated_from_record",
    "generated_to_record",
    "plan_cells",
    "render_assessment_table",
    "render_generation_table",
    "render_stats_block",
    "run_generation",
    "run_generator_training",
    "run_matrix",
    "score_generated",
    "significance_table",
]
