"""Inter-annotator agreement and majority-score analysis for Likert ratings.

Krippendorff's alpha is computed from the coincidence matrix with the
nominal, ordinal, or interval distance; ordinal is the default elsewhere in
the pipeline since the ratings are Likert scales.

The majority analysis gives, per question and approach: the per-item majority
score, its distribution, the rate of items with an unambiguous majority, the
mean score, and the mean rank of the approaches when compared item by item.
A strict majority needs a unique mode among the annotators' scores; when two
scores tie for the mode, the item has no majority (it still participates in
distribution, mean, and ranking through the highest tied mode, which keeps
every item comparable across approaches).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

APPROACHES = ("ground-truth", "unsupervised", "supervised")
QUESTIONS = ("Q1", "Q2", "Q3")
ALPHA_LEVELS = ("nominal", "ordinal", "interval")


class UndefinedAlpha(ValueError):
    """Expected disagreement is zero, so alpha has no defined value."""


class IncompleteItem(ValueError):
    """An item lacks ratings for one of the compared approaches."""


@dataclass(frozen=True)
class AnnotationRecord:
    item_id: str
    approach: str
    question: str
    annotator_id: int
    score: int

    def __post_init__(self) -> None:
        if self.approach not in APPROACHES:
            raise ValueError(f"unknown approach {self.approach!r}")
        if self.question not in QUESTIONS:
            raise ValueError(f"unknown question {self.question!r}")
        if not 1 <= self.score <= 5:
            raise ValueError(f"score {self.score} outside the 1..5 scale")


def annotation_to_record(r: AnnotationRecord) -> dict:
    return {
        "item_id": r.item_id,
        "approach": r.approach,
        "question": r.question,
        "annotator_id": r.annotator_id,
        "score": r.score,
    }


def annotation_from_record(record: dict) -> AnnotationRecord:
    return AnnotationRecord(
        item_id=record["item_id"],
        approach=record["approach"],
        question=record["question"],
        annotator_id=record["annotator_id"],
        score=record["score"],
    )


def _check_unique(records: Sequence[AnnotationRecord]) -> None:
    seen = set()
    for r in records:
        key = (r.item_id, r.approach, r.question, r.annotator_id)
        if key in seen:
            raise ValueError(f"duplicate annotation for {key}")
        seen.add(key)


def krippendorff_alpha(records: Sequence[AnnotationRecord], level: str = "ordinal") -> float:
    """Alpha over the given records; units are (item, approach, question) triples.

    Raises UndefinedAlpha when every pairable value is identical (expected
    disagreement zero) and ValueError when fewer than two values are pairable.
    """
    if level not in ALPHA_LEVELS:
        raise ValueError(f"level must be one of {ALPHA_LEVELS}")
    _check_unique(records)

    units: dict[tuple, list[int]] = defaultdict(list)
    for r in records:
        units[(r.item_id, r.approach, r.question)].append(r.score)
    pairable = {key: values for key, values in units.items() if len(values) > 1}
    if not pairable:
        raise ValueError("need at least one unit rated by two or more annotators")

    values = sorted({v for vals in pairable.values() for v in vals})
    index = {v: i for i, v in enumerate(values)}
    size = len(values)
    coincidence = [[0.0] * size for _ in range(size)]
    for vals in pairable.values():
        weight = 1.0 / (len(vals) - 1)
        for i, a in enumerate(vals):
            for j, b in enumerate(vals):
                if i != j:
                    coincidence[index[a]][index[b]] += weight

    marginals = [sum(row) for row in coincidence]
    n = sum(marginals)

    def distance_sq(ci: int, ki: int) -> float:
        if ci == ki:
            return 0.0
        if level == "nominal":
            return 1.0
        if level == "interval":
            return float(values[ci] - values[ki]) ** 2
        lo, hi = min(ci, ki), max(ci, ki)
        cumulative = sum(marginals[g] for g in range(lo, hi + 1))
        return (cumulative - (marginals[ci] + marginals[ki]) / 2.0) ** 2

    observed = sum(
        coincidence[c][k] * distance_sq(c, k) for c in range(size) for k in range(size)
    ) / n
    expected = sum(
        marginals[c] * marginals[k] * distance_sq(c, k) for c in range(size) for k in range(size)
    ) / (n * (n - 1))
    if expected == 0:
        raise UndefinedAlpha("all pairable values identical; expected disagreement is zero")
    return 1.0 - observed / expected


@dataclass(frozen=True)
class ApproachSummary:
    question: str
    approach: str
    n_items: int
    score_distribution: dict[int, int]  # per-item majority score (highest mode) -> item count
    majority_rate: float  # share of items with a unique modal score
    mean_score: float
    mean_rank: float

    def as_dict(self) -> dict:
        return {
            "question": self.question,
            "approach": self.approach,
            "n_items": self.n_items,
            "score_distribution": {str(k): v for k, v in sorted(self.score_distribution.items())},
            "majority_rate": self.majority_rate,
            "mean_score": self.mean_score,
            "mean_rank": self.mean_rank,
        }


def _modal_score(scores: Sequence[int]) -> tuple[int, bool]:
    """(highest mode, had unique mode) of one item's scores."""
    counts = Counter(scores)
    top = max(counts.values())
    modes = [score for score, count in counts.items() if count == top]
    return max(modes), len(modes) == 1


def _average_ranks(scores_by_approach: dict[str, int]) -> dict[str, float]:
    ordered = sorted(scores_by_approach.items(), key=lambda kv: -kv[1])
    ranks: dict[str, float] = {}
    position = 1
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j][1] == ordered[i][1]:
            j += 1
        tied = ordered[i:j]
        mean_rank = (position + position + len(tied) - 1) / 2.0
        for approach, _ in tied:
            ranks[approach] = mean_rank
        position += len(tied)
        i = j
    return ranks


def majority_and_rank(records: Iterable[AnnotationRecord]) -> dict[tuple[str, str], ApproachSummary]:
    """Per-(question, approach) majority and ranking summary over shared items."""
    records = list(records)
    _check_unique(records)
    scores: dict[tuple[str, str], dict[str, list[int]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        scores[(r.question, r.item_id)][r.approach].append(r.score)

    per_cell_scores: dict[tuple[str, str], list[int]] = defaultdict(list)
    per_cell_majorities: dict[tuple[str, str], int] = defaultdict(int)
    per_cell_ranks: dict[tuple[str, str], list[float]] = defaultdict(list)
    per_cell_distribution: dict[tuple[str, str], Counter] = defaultdict(Counter)

    for (question, item_id), by_approach in sorted(scores.items()):
        missing = [a for a in APPROACHES if a not in by_approach]
        if missing:
            raise IncompleteItem(f"item {item_id} / {question} lacks approaches {missing}")
        modal: dict[str, int] = {}
        for approach, item_scores in by_approach.items():
            score, unique = _modal_score(item_scores)
            modal[approach] = score
            per_cell_scores[(question, approach)].append(score)
            per_cell_distribution[(question, approach)][score] += 1
            if unique:
                per_cell_majorities[(question, approach)] += 1
        for approach, rank in _average_ranks(modal).items():
            per_cell_ranks[(question, approach)].append(rank)

    summaries = {}
    for key, cell_scores in per_cell_scores.items():
        question, approach = key
        n_items = len(cell_scores)
        summaries[key] = ApproachSummary(
            question=question,
            approach=approach,
            n_items=n_items,
            score_distribution=dict(per_cell_distribution[key]),
            majority_rate=per_cell_majorities[key] / n_items,
            mean_score=sum(cell_scores) / n_items,
            mean_rank=sum(per_cell_ranks[key]) / n_items,
        )
    return summaries
