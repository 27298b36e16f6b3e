"""The (variant x run x fold) experiment matrix with resumable cell records.

Every cell runs its own hyperparameter trials, evaluates the winning model on
the fold's untouched test essays, and persists one JSON record; re-running a
matrix skips completed cells, so interrupted experiments resume to identical
aggregates. Aggregation first averages the folds within a run, then reports
mean and standard deviation over the run-level means (ddof=1).
"""

from __future__ import annotations

import json
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import mean, stdev
from typing import Sequence

from suffgen.classifier.models import make_encoder
from suffgen.classifier.training import (
    ClassifierSearchSpace,
    hyperparameter_trials_clf,
    predict,
)
from suffgen.classifier.variants import (
    GENERATED_KINDS,
    MissingGenerated,
    VariantKind,
    build_variant_input,
)
from suffgen.corpus.arguments import Argument, Label
from suffgen.corpus.build import argument_from_record, argument_to_record, fold_from_record, fold_to_record
from suffgen.corpus.folds import FoldPlan, audit_fold_plans
from suffgen.metrics.classification import classification_report
from suffgen.seeding import derive_seed


class MissingCell(RuntimeError):
    """Aggregation was asked to run over an incomplete matrix."""


@dataclass(frozen=True)
class ExperimentMatrix:
    variants: tuple[VariantKind, ...]
    runs: int = 20
    folds: int = 5
    trials_per_fold: int = 10
    seed: int = 0
    generator_variant: str = "supervised"
    generator_run: int = 1  # which generation run supplies conclusions to every cell
    model_spec: str = "trigram"

    def as_dict(self) -> dict:
        return {
            "variants": [v.value for v in self.variants],
            "runs": self.runs,
            "folds": self.folds,
            "trials_per_fold": self.trials_per_fold,
            "seed": self.seed,
            "generator_variant": self.generator_variant,
            "generator_run": self.generator_run,
            "model_spec": self.model_spec,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentMatrix":
        return cls(
            variants=tuple(VariantKind(v) for v in data["variants"]),
            runs=data.get("runs", 20),
            folds=data.get("folds", 5),
            trials_per_fold=data.get("trials_per_fold", 10),
            seed=data.get("seed", 0),
            generator_variant=data.get("generator_variant", "supervised"),
            generator_run=data.get("generator_run", 1),
            model_spec=data.get("model_spec", "trigram"),
        )


@dataclass(frozen=True)
class CellResult:
    variant: VariantKind
    run_index: int
    fold_index: int
    seed: int
    best_config: dict
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    n_test: int
    trial_count: int

    def as_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "run_index": self.run_index,
            "fold_index": self.fold_index,
            "seed": self.seed,
            "best_config": self.best_config,
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "n_test": self.n_test,
            "trial_count": self.trial_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CellResult":
        return cls(
            variant=VariantKind(data["variant"]),
            run_index=data["run_index"],
            fold_index=data["fold_index"],
            seed=data["seed"],
            best_config=data["best_config"],
            accuracy=data["accuracy"],
            macro_precision=data["macro_precision"],
            macro_recall=data["macro_recall"],
            macro_f1=data["macro_f1"],
            n_test=data["n_test"],
            trial_count=data["trial_count"],
        )


@dataclass(frozen=True)
class AggregateResult:
    variant: VariantKind
    n_runs: int
    n_folds: int
    accuracy_mean: float
    accuracy_std: float
    macro_precision_mean: float
    macro_precision_std: float
    macro_recall_mean: float
    macro_recall_std: float
    macro_f1_mean: float
    macro_f1_std: float
    per_run_macro_f1: tuple[float, ...]  # retained for paired significance tests

    def as_dict(self) -> dict:
        data = {
            "variant": self.variant.value,
            "n_runs": self.n_runs,
            "n_folds": self.n_folds,
            "per_run_macro_f1": list(self.per_run_macro_f1),
        }
        for metric in ("accuracy", "macro_precision", "macro_recall", "macro_f1"):
            data[f"{metric}_mean"] = getattr(self, f"{metric}_mean")
            data[f"{metric}_std"] = getattr(self, f"{metric}_std")
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "AggregateResult":
        return cls(
            variant=VariantKind(data["variant"]),
            n_runs=data["n_runs"],
            n_folds=data["n_folds"],
            accuracy_mean=data["accuracy_mean"],
            accuracy_std=data["accuracy_std"],
            macro_precision_mean=data["macro_precision_mean"],
            macro_precision_std=data["macro_precision_std"],
            macro_recall_mean=data["macro_recall_mean"],
            macro_recall_std=data["macro_recall_std"],
            macro_f1_mean=data["macro_f1_mean"],
            macro_f1_std=data["macro_f1_std"],
            per_run_macro_f1=tuple(data["per_run_macro_f1"]),
        )


def plan_cells(matrix: ExperimentMatrix) -> list[tuple[VariantKind, int, int]]:
    return [
        (variant, run, fold)
        for variant in matrix.variants
        for run in range(1, matrix.runs + 1)
        for fold in range(1, matrix.folds + 1)
    ]


def cell_name(variant: VariantKind, run: int, fold: int) -> str:
    return f"{variant.value}-r{run:02d}-f{fold}"


def build_cell_inputs(
    arguments: Sequence[Argument],
    plan: FoldPlan,
    generated_by_argument: dict[str, str],
    variant: VariantKind,
):
    """(train, val, test) variant inputs for one cell."""
    splits: dict[str, list] = {"train": [], "val": [], "test": []}
    for arg in arguments:
        generated = generated_by_argument.get(arg.argument_id)
        if variant in GENERATED_KINDS and generated is None:
            raise MissingGenerated(
                f"{arg.argument_id}: no generated conclusion available for variant {variant.value}"
            )
        splits[plan.split_of(arg.essay_id)].append(build_variant_input(arg, generated, variant))
    return splits["train"], splits["val"], splits["test"]


def evaluate_cell(
    arguments: Sequence[Argument],
    plan: FoldPlan,
    generated_by_argument: dict[str, str],
    variant: VariantKind,
    n_trials: int,
    seed: int,
    model_spec: str,
) -> CellResult:
    train, val, test = build_cell_inputs(arguments, plan, generated_by_argument, variant)
    config, trained, trials = hyperparameter_trials_clf(
        ClassifierSearchSpace(),
        train,
        val,
        model_factory=lambda s: make_encoder(model_spec, s),
        n_trials=n_trials,
        seed=seed,
    )
    predictions = predict(trained, test)
    report = classification_report(
        [1 if p.predicted_label is Label.SUFFICIENT else 0 for p in predictions],
        [1 if vi.label is Label.SUFFICIENT else 0 for vi in test],
    )
    return CellResult(
        variant=variant,
        run_index=plan.run_index,
        fold_index=plan.fold_index,
        seed=seed,
        best_config=config.as_dict(),
        accuracy=report.accuracy,
        macro_precision=report.macro_precision,
        macro_recall=report.macro_recall,
        macro_f1=report.macro_f1,
        n_test=len(test),
        trial_count=len(trials),
    )


def _cell_worker(payload: dict) -> dict:
    """Self-contained cell job; used directly and through the process pool."""
    arguments = [argument_from_record(r) for r in payload["arguments"]]
    plan = fold_from_record(payload["plan"])
    result = evaluate_cell(
        arguments,
        plan,
        payload["generated"],
        VariantKind(payload["variant"]),
        payload["n_trials"],
        payload["seed"],
        payload["model_spec"],
    )
    record = result.as_dict()
    out_path = Path(payload["out_path"])
    tmp = out_path.with_name(out_path.name + ".tmp")
    tmp.write_text(json.dumps(record, sort_keys=True, indent=1), encoding="utf-8")
    os.replace(tmp, out_path)
    return record


def run_matrix(
    matrix: ExperimentMatrix,
    arguments: Sequence[Argument],
    fold_plans: Sequence[FoldPlan],
    generated_by_argument: dict[str, str],
    out_dir: str | Path,
    n_jobs: int = 1,
) -> list[AggregateResult]:
    """Complete every missing cell, then aggregate; resumable and order-invariant."""
    out_dir = Path(out_dir)
    cells_dir = out_dir / "cells"
    cells_dir.mkdir(parents=True, exist_ok=True)
    # Leakage audit up front: training never proceeds over overlapping splits.
    relevant = [p for p in fold_plans if p.run_index <= matrix.runs]
    if relevant:
        essay_ids = relevant[0].train_essays | relevant[0].val_essays | relevant[0].test_essays
        audit_fold_plans(relevant, set(essay_ids), size_tolerance=float("inf"))
        stray = {a.essay_id for a in arguments} - essay_ids
        if stray:
            raise MissingCell(f"arguments reference essays outside the fold plan: {sorted(stray)[:3]}")
    plans = {(p.run_index, p.fold_index): p for p in fold_plans}

    payloads = []
    results: list[CellResult] = []
    argument_records = [argument_to_record(a) for a in arguments]
    for variant, run, fold in plan_cells(matrix):
        if (run, fold) not in plans:
            raise MissingCell(f"fold plan missing run {run} fold {fold}")
        cell_path = cells_dir / f"{cell_name(variant, run, fold)}.json"
        if cell_path.exists():
            results.append(CellResult.from_dict(json.loads(cell_path.read_text())))
            continue
        payloads.append(
            {
                "arguments": argument_records,
                "plan": fold_to_record(plans[(run, fold)]),
                "generated": {} if variant not in GENERATED_KINDS else generated_by_argument,
                "variant": variant.value,
                "n_trials": matrix.trials_per_fold,
                "seed": derive_seed(matrix.seed, "cell", variant.value, run, fold),
                "model_spec": matrix.model_spec,
                "out_path": str(cell_path),
            }
        )

    if n_jobs > 1 and payloads:
        # Spawned (not forked) workers: the torch runtime in this process is
        # not fork-safe once its thread pools exist.
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=n_jobs, mp_context=context) as pool:
            for record in pool.map(_cell_worker, payloads):
                results.append(CellResult.from_dict(record))
    else:
        for payload in payloads:
            results.append(CellResult.from_dict(_cell_worker(payload)))

    return aggregate_cells(results, matrix)


def aggregate_cells(results: Sequence[CellResult], matrix: ExperimentMatrix) -> list[AggregateResult]:
    by_cell = {(r.variant, r.run_index, r.fold_index): r for r in results}
    missing = [key for key in plan_cells(matrix) if key not in by_cell]
    if missing:
        raise MissingCell(f"{len(missing)} cells missing, first: {missing[:3]}")

    aggregates = []
    for variant in matrix.variants:
        run_means: dict[str, list[float]] = {m: [] for m in ("accuracy", "macro_precision", "macro_recall", "macro_f1")}
        for run in range(1, matrix.runs + 1):
            fold_cells = [by_cell[(variant, run, f)] for f in range(1, matrix.folds + 1)]
            for metric in run_means:
                run_means[metric].append(mean(getattr(c, metric) for c in fold_cells))

        def _stats(values: list[float]) -> tuple[float, float]:
            return mean(values), (stdev(values) if len(values) > 1 else 0.0)

        acc = _stats(run_means["accuracy"])
        pre = _stats(run_means["macro_precision"])
        rec = _stats(run_means["macro_recall"])
        f1 = _stats(run_means["macro_f1"])
        aggregates.append(
            AggregateResult(
                variant=variant,
                n_runs=matrix.runs,
                n_folds=matrix.folds,
                accuracy_mean=acc[0],
                accuracy_std=acc[1],
                macro_precision_mean=pre[0],
                macro_precision_std=pre[1],
                macro_recall_mean=rec[0],
                macro_recall_std=rec[1],
                macro_f1_mean=f1[0],
                macro_f1_std=f1[1],
                per_run_macro_f1=tuple(run_means["macro_f1"]),
            )
        )
    return aggregates
