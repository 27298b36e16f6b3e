"""Leakage-free cross-validation planning over whole essays.

Essays are the atomic unit: all arguments and pairs from one essay land in
exactly one of train/val/test, never split. Each run shuffles the essays with
its own derived seed and partitions them into `folds` test blocks; per fold,
the remaining essays are split 7:1 into train and validation, which realizes
a 70/10/20 split when folds = 5.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from suffgen.seeding import derive_seed


@dataclass(frozen=True)
class FoldPlan:
    run_index: int  # 1-based
    fold_index: int  # 1-based
    train_essays: frozenset[str]
    val_essays: frozenset[str]
    test_essays: frozenset[str]

    def split_of(self, essay_id: str) -> str:
        if essay_id in self.train_essays:
            return "train"
        if essay_id in self.val_essays:
            return "val"
        if essay_id in self.test_essays:
            return "test"
        raise KeyError(essay_id)


def make_fold_plan(essay_ids: set[str], runs: int, folds: int, seed: int) -> list[FoldPlan]:
    """Deterministic plans for `runs` repetitions of `folds`-fold cross-validation."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if folds < 2:
        raise ValueError("folds must be >= 2")
    ids = sorted(essay_ids)
    if len(ids) < folds:
        raise ValueError(f"need at least {folds} essays, got {len(ids)}")

    plans = []
    for run in range(1, runs + 1):
        order = list(ids)
        random.Random(derive_seed(seed, "fold-shuffle", run)).shuffle(order)
        base, extra = divmod(len(order), folds)
        blocks = []
        cursor = 0
        for k in range(folds):
            size = base + (1 if k < extra else 0)
            blocks.append(order[cursor : cursor + size])
            cursor += size
        for k in range(folds):
            test = blocks[k]
            rest = [e for e in order if e not in set(test)]
            val_size = _val_size(len(ids), folds, len(rest))
            plans.append(
                FoldPlan(
                    run_index=run,
                    fold_index=k + 1,
                    train_essays=frozenset(rest[val_size:]),
                    val_essays=frozenset(rest[:val_size]),
                    test_essays=frozenset(test),
                )
            )
    return plans


def _val_size(n_essays: int, folds: int, n_rest: int) -> int:
    """Validation size: the eighth of the remainder that keeps both train and
    val within one essay of their ideal shares (minimax over floor/ceil)."""
    if n_rest < 2:
        return 0
    val_target = n_essays * (folds - 1) / folds / 8.0
    train_target = 7.0 * val_target
    candidates = sorted({max(1, math.floor(n_rest / 8)), max(1, math.ceil(n_rest / 8))})
    return min(
        candidates,
        key=lambda v: (max(abs(v - val_target), abs(n_rest - v - train_target)), v),
    )


def audit_fold_plans(plans: list[FoldPlan], essay_ids: set[str], size_tolerance: float = 1.0) -> None:
    """Brute-force integrity audit; raises AssertionError on any violation.

    Checks, per plan: pairwise-disjoint splits covering all essays, and split
    sizes within `size_tolerance` essays of their targets (70/10/20 at five
    folds). Checks, per run: the test blocks partition the essay set.

    The size check presumes enough essays for the percentages to be
    realizable (roughly 10 per fold); pass size_tolerance=float("inf") for
    tiny desk-scale corpora.
    """
    n = len(essay_ids)
    folds = max(plan.fold_index for plan in plans) if plans else 0
    test_share = 1.0 / folds if folds else 0.0
    val_share = (1.0 - test_share) / 8.0
    train_share = 1.0 - test_share - val_share
    by_run: dict[int, list[FoldPlan]] = {}
    for plan in plans:
        train, val, test = plan.train_essays, plan.val_essays, plan.test_essays
        assert not (train & val or train & test or val & test), (
            f"run {plan.run_index} fold {plan.fold_index}: overlapping splits"
        )
        assert train | val | test == essay_ids, (
            f"run {plan.run_index} fold {plan.fold_index}: splits do not cover the corpus"
        )
        for size, share, name in (
            (len(train), train_share, "train"),
            (len(val), val_share, "val"),
            (len(test), test_share, "test"),
        ):
            assert abs(size - share * n) <= size_tolerance, (
                f"run {plan.run_index} fold {plan.fold_index}: {name} size {size} "
                f"outside {share * n:.1f} +/- {size_tolerance}"
            )
        by_run.setdefault(plan.run_index, []).append(plan)
    for run, run_plans in by_run.items():
        seen: set[str] = set()
        for plan in run_plans:
            assert not (seen & plan.test_essays), f"run {run}: essay tested twice"
            seen |= plan.test_essays
        assert seen == essay_ids, f"run {run}: test blocks do not cover the corpus"
