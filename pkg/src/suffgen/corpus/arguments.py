"""Argument extraction from parsed essays and sufficiency label attachment.

An argument is one claim plus every premise directly related to it. Its text
is the contiguous run of sentences that covers the claim and those premises
within the claim's paragraph, so discourse markers around the claim stay part
of the passage (they matter for masking later). Claims without premises are
not arguments, but any claim whose span falls inside another argument's
passage is recorded as an additional conclusion occurrence of that passage.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from suffgen.corpus.standoff import EssayDocument
from suffgen.text import (
    count_sentences,
    count_tokens,
    normalize_for_matching,
    normalized_similarity,
    sentence_spans,
)

logger = logging.getLogger(__name__)

FUZZY_MATCH_THRESHOLD = 0.95


class Label(str, Enum):
    SUFFICIENT = "sufficient"
    INSUFFICIENT = "insufficient"


class UnmatchedLabel(ValueError):
    """Label-table rows that match no extracted argument."""


class UnlabeledArgument(ValueError):
    """Arguments left without a sufficiency label after matching."""


@dataclass(frozen=True)
class Argument:
    """One claim with its premises, carried as a contiguous text passage."""

    argument_id: str
    essay_id: str
    full_text: str
    premises: tuple[str, ...]
    conclusion: str
    conclusion_char_range: tuple[int, int]
    label: Label | None = None
    # Other claims whose spans fall inside full_text; each is one more
    # maskable conclusion occurrence of this passage.
    extra_conclusion_ranges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        start, end = self.conclusion_char_range
        if not self.conclusion:
            raise ValueError(f"{self.argument_id}: empty conclusion")
        if not self.premises or any(not p for p in self.premises):
            raise ValueError(f"{self.argument_id}: premises must be non-empty")
        if self.full_text[start:end] != self.conclusion:
            raise ValueError(
                f"{self.argument_id}: conclusion range [{start}, {end}) does not slice to the conclusion"
            )
        for a, b in self.extra_conclusion_ranges:
            if not (0 <= a < b <= len(self.full_text)):
                raise ValueError(f"{self.argument_id}: extra conclusion range [{a}, {b}) out of bounds")


def _paragraph_ranges(text: str) -> list[tuple[int, int]]:
    ranges = []
    start = 0
    for i, ch in enumerate(text):
        if ch == "\n":
            ranges.append((start, i))
            start = i + 1
    ranges.append((start, len(text)))
    return [(a, b) for a, b in ranges if text[a:b].strip()]


def extract_arguments(doc: EssayDocument, counters: Counter | None = None) -> list[Argument]:
    """One Argument per claim with at least one related premise.

    Claims with no premises are skipped and counted under
    ``counters["skipped_claims"]``; premises related from a different
    paragraph are counted under ``counters["cross_paragraph_premises"]`` and
    left out of the passage.
    """
    counters = counters if counters is not None else Counter()
    paragraphs = _paragraph_ranges(doc.text)

    def paragraph_of(start: int, end: int) -> tuple[int, int] | None:
        for a, b in paragraphs:
            if a <= start and end <= b:
                return (a, b)
        return None

    claims = doc.spans_of_kind("Claim")
    premises_by_claim: dict[str, list] = {c.span_id: [] for c in claims}
    for premise in doc.spans_of_kind("Premise"):
        for target_id, _kind in premise.relations:
            if target_id in premises_by_claim:
                premises_by_claim[target_id].append(premise)

    arguments = []
    for claim in claims:
        related = premises_by_claim[claim.span_id]
        if not related:
            counters["skipped_claims"] += 1
            continue
        para = paragraph_of(claim.start, claim.end)
        if para is None:
            counters["cross_paragraph_claims"] += 1
            continue
        in_para = [p for p in related if paragraph_of(p.start, p.end) == para]
        counters["cross_paragraph_premises"] += len(related) - len(in_para)
        if not in_para:
            counters["skipped_claims"] += 1
            continue

        para_start, para_end = para
        para_text = doc.text[para_start:para_end]
        cover_start = min([claim.start] + [p.start for p in in_para]) - para_start
        cover_end = max([claim.end] + [p.end for p in in_para]) - para_start
        window_start, window_end = cover_start, cover_end
        for sent_start, sent_end in sentence_spans(para_text):
            if sent_start <= cover_start < sent_end:
                window_start = sent_start
            if sent_start < cover_end <= sent_end:
                window_end = sent_end
        full_text = para_text[window_start:window_end]
        offset = para_start + window_start

        extras = tuple(
            (other.start - offset, other.end - offset)
            for other in claims
            if other.span_id != claim.span_id
            and offset <= other.start
            and other.end <= offset + len(full_text)
        )
        arguments.append(
            Argument(
                argument_id=f"{doc.essay_id}#{claim.span_id}",
                essay_id=doc.essay_id,
                full_text=full_text,
                premises=tuple(p.surface for p in sorted(in_para, key=lambda p: p.start)),
                conclusion=claim.surface,
                conclusion_char_range=(claim.start - offset, claim.end - offset),
                extra_conclusion_ranges=extras,
            )
        )
    return arguments


@dataclass(frozen=True)
class LabelRow:
    essay_id: str
    argument_text: str
    label: Label


@dataclass(frozen=True)
class LabelTable:
    """Sufficiency labels keyed by essay id and argument text."""

    rows: tuple[LabelRow, ...]

    @classmethod
    def from_tsv(
        cls,
        path: str | Path,
        essay_column: str = "essay_id",
        text_column: str = "argument_text",
        label_column: str = "label",
    ) -> "LabelTable":
        """Read a tab-separated label file with a header row.

        Label values are matched case-insensitively against the Label enum
        ("sufficient" / "insufficient").
        """
        import csv

        rows = []
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, delimiter="\t")
            missing = {essay_column, text_column, label_column} - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{path}: label table missing columns {sorted(missing)}")
            for row in reader:
                value = row[label_column].strip().lower()
                try:
                    label = Label(value)
                except ValueError as exc:
                    raise ValueError(f"{path}: unknown label value {row[label_column]!r}") from exc
                rows.append(LabelRow(row[essay_column].strip(), row[text_column], label))
        return cls(rows=tuple(rows))


def attach_labels(args: list[Argument], label_table: LabelTable) -> list[Argument]:
    """Attach a label to every argument by matching table rows on argument text.

    Matching is exact on the normalized text; rows that fail exact matching
    fall back to the best same-essay candidate at normalized edit similarity
    >= 0.95, which is logged. Raises UnmatchedLabel if any row matches no
    argument, UnlabeledArgument if any argument ends up without a label.
    """
    by_essay: dict[str, dict[str, list[int]]] = {}
    for idx, arg in enumerate(args):
        key = normalize_for_matching(arg.full_text)
        by_essay.setdefault(arg.essay_id, {}).setdefault(key, []).append(idx)

    labels: dict[int, Label] = {}
    unmatched_rows: list[LabelRow] = []
    for row in label_table.rows:
        essay_index = by_essay.get(row.essay_id, {})
        key = normalize_for_matching(row.argument_text)
        candidates = [i for i in essay_index.get(key, []) if i not in labels]
        if not candidates:
            best_idx, best_score = None, 0.0
            for arg_key, indexes in essay_index.items():
                free = [i for i in indexes if i not in labels]
                if not free:
                    continue
                score = normalized_similarity(key, arg_key)
                if score > best_score:
                    best_idx, best_score = free[0], score
            if best_idx is not None and best_score >= FUZZY_MATCH_THRESHOLD:
                logger.info(
                    "label row for %s matched argument %s via fuzzy similarity %.4f",
                    row.essay_id,
                    args[best_idx].argument_id,
                    best_score,
                )
                candidates = [best_idx]
        if candidates:
            labels[candidates[0]] = row.label
        else:
            unmatched_rows.append(row)

    if unmatched_rows:
        sample = ", ".join(f"{r.essay_id}:{r.argument_text[:40]!r}" for r in unmatched_rows[:5])
        raise UnmatchedLabel(f"{len(unmatched_rows)} label rows matched no argument ({sample} ...)")
    unlabeled = [arg.argument_id for i, arg in enumerate(args) if i not in labels]
    if unlabeled:
        raise UnlabeledArgument(f"{len(unlabeled)} arguments received no label: {unlabeled[:5]} ...")
    return [replace(arg, label=labels[i]) for i, arg in enumerate(args)]


@dataclass(frozen=True)
class CorpusStatistics:
    n_essays: int
    n_arguments: int
    n_sufficient: int
    n_insufficient: int
    n_pairs: int
    mean_sentences: float
    mean_tokens: float
    skipped_claims: int

    def as_dict(self) -> dict:
        return {
            "n_essays": self.n_essays,
            "n_arguments": self.n_arguments,
            "n_sufficient": self.n_sufficient,
            "n_insufficient": self.n_insufficient,
            "n_pairs": self.n_pairs,
            "mean_sentences": self.mean_sentences,
            "mean_tokens": self.mean_tokens,
            "skipped_claims": self.skipped_claims,
        }


def corpus_statistics(
    docs: list[EssayDocument],
    args: list[Argument],
    n_pairs: int,
    skipped_claims: int,
) -> CorpusStatistics:
    sentences = [count_sentences(a.full_text) for a in args]
    tokens = [count_tokens(a.full_text) for a in args]
    return CorpusStatistics(
        n_essays=len(docs),
        n_arguments=len(args),
        n_sufficient=sum(1 for a in args if a.label is Label.SUFFICIENT),
        n_insufficient=sum(1 for a in args if a.label is Label.INSUFFICIENT),
        n_pairs=n_pairs,
        mean_sentences=sum(sentences) / len(sentences) if sentences else 0.0,
        mean_tokens=sum(tokens) / len(tokens) if tokens else 0.0,
        skipped_claims=skipped_claims,
    )
