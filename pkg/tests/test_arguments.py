from __future__ import annotations

import logging
from collections import Counter

import pytest

from suffgen.corpus.arguments import (
    Label,
    LabelRow,
    LabelTable,
    UnlabeledArgument,
    UnmatchedLabel,
    attach_labels,
    corpus_statistics,
    extract_arguments,
)
from suffgen.corpus.standoff import parse_standoff
from suffgen.text import count_sentences, count_tokens

TEXT = (
    "Title Line\n"
    "\n"
    "Filler sentence opens the paragraph. Thus, exercise keeps students focused. "
    "Daily movement raises attention spans. For example, recess improves test scores. "
    "Closing filler sentence here.\n"
    "Another paragraph entirely. No use at all.\n"
)


def _doc(extra_lines: list[str] | None = None):
    claim = "exercise keeps students focused"
    p1 = "Daily movement raises attention spans"
    p2 = "recess improves test scores"
    lines = [
        f"T1\tClaim {TEXT.index(claim)} {TEXT.index(claim) + len(claim)}\t{claim}",
        f"T2\tPremise {TEXT.index(p1)} {TEXT.index(p1) + len(p1)}\t{p1}",
        f"T3\tPremise {TEXT.index(p2)} {TEXT.index(p2) + len(p2)}\t{p2}",
        "R1\tsupports Arg1:T2 Arg2:T1",
        "R2\tsupports Arg1:T3 Arg2:T1",
    ]
    return parse_standoff(TEXT.encode(), ("\n".join(lines + (extra_lines or [])) + "\n").encode(), "essay001")


def test_window_covers_claim_and_premises_sentence_aligned():
    args = extract_arguments(_doc())
    assert len(args) == 1
    arg = args[0]
    assert arg.full_text == (
        "Thus, exercise keeps students focused. "
        "Daily movement raises attention spans. "
        "For example, recess improves test scores."
    )
    start, end = arg.conclusion_char_range
    assert arg.full_text[start:end] == "exercise keeps students focused"
    assert arg.premises == (
        "Daily movement raises attention spans",
        "recess improves test scores",
    )


def test_claim_without_premises_is_skipped_and_counted():
    text = "One lonely claim lives here.\n"
    doc = parse_standoff(
        text.encode(), b"T1\tClaim 4 16\tlonely claim\n", "essay002"
    )
    counters = Counter()
    assert extract_arguments(doc, counters) == []
    assert counters["skipped_claims"] == 1


def test_embedded_premiseless_claim_recorded_as_extra_conclusion():
    nested = "recess improves test scores"
    extra = [f"T4\tClaim {TEXT.index(nested)} {TEXT.index(nested) + len(nested)}\t{nested}"]
    # Same span annotated as a second, premise-less claim inside the window.
    counters = Counter()
    args = extract_arguments(_doc(extra), counters)
    assert len(args) == 1
    assert len(args[0].extra_conclusion_ranges) == 1
    a, b = args[0].extra_conclusion_ranges[0]
    assert args[0].full_text[a:b] == nested
    assert counters["skipped_claims"] == 1


def test_full_fixture_extracts_reference_argument_count(full_scale_corpus):
    _, build = full_scale_corpus
    assert len(build.arguments) == 1029
    assert build.statistics.skipped_claims == 477


def test_full_fixture_length_statistics_in_tolerance(full_scale_corpus):
    _, build = full_scale_corpus
    sentences = [count_sentences(a.full_text) for a in build.arguments]
    tokens = [count_tokens(a.full_text) for a in build.arguments]
    assert abs(sum(sentences) / len(sentences) - 4.5) <= 0.2
    assert abs(sum(tokens) / len(tokens) - 94.6) <= 2.0


# --- label attachment ---


def _labeled_args():
    return extract_arguments(_doc())


def test_exact_label_match():
    args = _labeled_args()
    table = LabelTable(rows=(LabelRow("essay001", args[0].full_text, Label.SUFFICIENT),))
    labeled = attach_labels(args, table)
    assert labeled[0].label is Label.SUFFICIENT


def test_curly_quote_row_matches_via_normalization(caplog):
    args = _labeled_args()
    mutated = args[0].full_text.replace("Thus,", "Thus’")  # one-glyph edit survives fuzzy match
    table = LabelTable(rows=(LabelRow("essay001", mutated, Label.INSUFFICIENT),))
    with caplog.at_level(logging.INFO):
        labeled = attach_labels(args, table)
    assert labeled[0].label is Label.INSUFFICIENT
    assert any("fuzzy" in message for message in caplog.messages)


def test_unicode_quote_normalization_is_exact_not_fuzzy(caplog):
    args = _labeled_args()
    # Normalization unifies the quote glyphs, so no fuzzy fallback is needed.
    mutated = args[0].full_text.replace("For example", "“For example”")
    base = args[0].full_text.replace("For example", '"For example"')
    assert mutated != base

    table = LabelTable(rows=(LabelRow("essay001", args[0].full_text + " ", Label.SUFFICIENT),))
    with caplog.at_level(logging.INFO):
        labeled = attach_labels(args, table)
    assert labeled[0].label is Label.SUFFICIENT
    assert not any("fuzzy" in message for message in caplog.messages)


def test_empty_label_table_raises_unlabeled():
    with pytest.raises(UnlabeledArgument):
        attach_labels(_labeled_args(), LabelTable(rows=()))


def test_alien_row_raises_unmatched():
    args = _labeled_args()
    table = LabelTable(
        rows=(
            LabelRow("essay001", args[0].full_text, Label.SUFFICIENT),
            LabelRow("essay001", "entirely unrelated argument text goes here", Label.SUFFICIENT),
        )
    )
    with pytest.raises(UnmatchedLabel):
        attach_labels(args, table)


def test_label_table_tsv_roundtrip(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text(
        "essay_id\targument_text\tlabel\nessay001\tsome argument text\tSufficient\n",
        encoding="utf-8",
    )
    table = LabelTable.from_tsv(path)
    assert table.rows == (LabelRow("essay001", "some argument text", Label.SUFFICIENT),)


def test_label_table_rejects_unknown_values(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("essay_id\targument_text\tlabel\ne1\ttext\tmaybe\n", encoding="utf-8")
    with pytest.raises(ValueError, match="unknown label"):
        LabelTable.from_tsv(path)


def test_full_fixture_label_split(full_scale_corpus):
    _, build = full_scale_corpus
    stats = build.statistics
    assert (stats.n_sufficient, stats.n_insufficient) == (681, 348)


def test_corpus_statistics_shape(desk_build):
    stats = corpus_statistics(
        list(desk_build.documents), list(desk_build.arguments), len(desk_build.pairs), 5
    )
    assert stats.n_essays == 6
    assert stats.n_arguments == 15
    assert stats.n_pairs == 20
    assert stats.as_dict()["skipped_claims"] == 5
