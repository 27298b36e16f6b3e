"""End-to-end corpus construction: parse, extract, label, pair, plan folds.

Also owns the record-file schemas for arguments, pairs, and fold plans, plus
the discrepancy checks against the reported reference statistics.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from suffgen import reference_values as ref
from suffgen.corpus.arguments import (
    Argument,
    CorpusStatistics,
    Label,
    LabelTable,
    attach_labels,
    corpus_statistics,
    extract_arguments,
)
from suffgen.corpus.folds import FoldPlan, make_fold_plan
from suffgen.corpus.pairs import MaskedArgumentPair, build_masked_pairs
from suffgen.corpus.standoff import EssayDocument, load_essay_dir
from suffgen.records import read_records, write_records

ARGUMENTS_SCHEMA = "arguments/v1"
PAIRS_SCHEMA = "pairs/v1"
FOLDS_SCHEMA = "folds/v1"


@dataclass(frozen=True)
class CorpusBuild:
    documents: tuple[EssayDocument, ...]
    arguments: tuple[Argument, ...]
    pairs: tuple[MaskedArgumentPair, ...]
    fold_plans: tuple[FoldPlan, ...]
    statistics: CorpusStatistics
    discrepancies: tuple[str, ...]


def check_reference_statistics(stats: CorpusStatistics) -> list[str]:
    """Differences between computed statistics and the reported reference values.

    An empty list means the corpus reproduces every reported count; a
    non-empty list must be surfaced in the stats report rather than silently
    ignored (the pair duplication rule in particular is not pinned down by
    the reported numbers alone).
    """
    problems = []
    exact = [
        ("essays", stats.n_essays, ref.REPORTED_ESSAYS),
        ("arguments", stats.n_arguments, ref.REPORTED_ARGUMENTS),
        ("sufficient labels", stats.n_sufficient, ref.REPORTED_SUFFICIENT),
        ("insufficient labels", stats.n_insufficient, ref.REPORTED_INSUFFICIENT),
        ("masked pairs", stats.n_pairs, ref.REPORTED_PAIRS),
    ]
    for name, got, want in exact:
        if got != want:
            problems.append(f"{name}: computed {got}, reported {want}")
    if abs(stats.mean_sentences - ref.REPORTED_MEAN_SENTENCES) > 0.2:
        problems.append(
            f"mean sentences per argument: computed {stats.mean_sentences:.2f}, "
            f"reported {ref.REPORTED_MEAN_SENTENCES} (tolerance 0.2)"
        )
    if abs(stats.mean_tokens - ref.REPORTED_MEAN_TOKENS) > 2.0:
        problems.append(
            f"mean tokens per argument: computed {stats.mean_tokens:.2f}, "
            f"reported {ref.REPORTED_MEAN_TOKENS} (tolerance 2.0)"
        )
    return problems


def build_corpus(
    essays_dir: str | Path,
    labels_path: str | Path,
    runs: int,
    folds: int,
    seed: int,
    essay_column: str = "essay_id",
    text_column: str = "argument_text",
    label_column: str = "label",
) -> CorpusBuild:
    docs = load_essay_dir(essays_dir)
    if not docs:
        raise FileNotFoundError(f"no essay .txt/.ann pairs under {essays_dir}")
    counters: Counter = Counter()
    args: list[Argument] = []
    for doc in docs:
        args.extend(extract_arguments(doc, counters))
    table = LabelTable.from_tsv(
        labels_path, essay_column=essay_column, text_column=text_column, label_column=label_column
    )
    args = attach_labels(args, table)
    pairs = build_masked_pairs(args)
    plans = make_fold_plan({d.essay_id for d in docs}, runs=runs, folds=folds, seed=seed)
    stats = corpus_statistics(docs, args, len(pairs), counters["skipped_claims"])
    return CorpusBuild(
        documents=tuple(docs),
        arguments=tuple(args),
        pairs=tuple(pairs),
        fold_plans=tuple(plans),
        statistics=stats,
        discrepancies=tuple(check_reference_statistics(stats)),
    )


# --- record conversions ---

def argument_to_record(arg: Argument) -> dict:
    return {
        "argument_id": arg.argument_id,
        "essay_id": arg.essay_id,
        "full_text": arg.full_text,
        "premises": list(arg.premises),
        "conclusion": arg.conclusion,
        "conclusion_char_range": list(arg.conclusion_char_range),
        "label": arg.label.value if arg.label is not None else None,
        "extra_conclusion_ranges": [list(r) for r in arg.extra_conclusion_ranges],
    }


def argument_from_record(record: dict) -> Argument:
    return Argument(
        argument_id=record["argument_id"],
        essay_id=record["essay_id"],
        full_text=record["full_text"],
        premises=tuple(record["premises"]),
        conclusion=record["conclusion"],
        conclusion_char_range=tuple(record["conclusion_char_range"]),
        label=Label(record["label"]) if record["label"] is not None else None,
        extra_conclusion_ranges=tuple(tuple(r) for r in record["extra_conclusion_ranges"]),
    )


def pair_to_record(pair: MaskedArgumentPair) -> dict:
    return {
        "pair_id": pair.pair_id,
        "argument_id": pair.argument_id,
        "essay_id": pair.essay_id,
        "source": pair.source,
        "target": pair.target,
        "conclusion": pair.conclusion,
        "is_primary": pair.is_primary,
    }


def pair_from_record(record: dict) -> MaskedArgumentPair:
    return MaskedArgumentPair(
        pair_id=record["pair_id"],
        argument_id=record["argument_id"],
        essay_id=record["essay_id"],
        source=record["source"],
        target=record["target"],
        conclusion=record["conclusion"],
        is_primary=record["is_primary"],
    )


def fold_to_record(plan: FoldPlan) -> dict:
    return {
        "run_index": plan.run_index,
        "fold_index": plan.fold_index,
        "train_essays": sorted(plan.train_essays),
        "val_essays": sorted(plan.val_essays),
        "test_essays": sorted(plan.test_essays),
    }


def fold_from_record(record: dict) -> FoldPlan:
    return FoldPlan(
        run_index=record["run_index"],
        fold_index=record["fold_index"],
        train_essays=frozenset(record["train_essays"]),
        val_essays=frozenset(record["val_essays"]),
        test_essays=frozenset(record["test_essays"]),
    )


def write_arguments(path: str | Path, args: list[Argument] | tuple[Argument, ...]) -> int:
    return write_records(path, ARGUMENTS_SCHEMA, (argument_to_record(a) for a in args))


def read_arguments(path: str | Path) -> list[Argument]:
    return [argument_from_record(r) for r in read_records(path, ARGUMENTS_SCHEMA)]


def write_pairs(path: str | Path, pairs) -> int:
    return write_records(path, PAIRS_SCHEMA, (pair_to_record(p) for p in pairs))


def read_pairs(path: str | Path) -> list[MaskedArgumentPair]:
    return [pair_from_record(r) for r in read_records(path, PAIRS_SCHEMA)]


def write_folds(path: str | Path, plans) -> int:
    return write_records(path, FOLDS_SCHEMA, (fold_to_record(p) for p in plans))


def read_folds(path: str | Path) -> list[FoldPlan]:
    return [fold_from_record(r) for r in read_records(path, FOLDS_SCHEMA)]
