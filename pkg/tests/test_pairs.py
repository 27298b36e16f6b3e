from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suffgen.corpus.arguments import Argument, Label
from suffgen.corpus.pairs import (
    MASK_MARKER,
    MaskCollision,
    build_masked_pairs,
    substitute_mask,
)


def _argument(full_text: str, conclusion: str, extras=()) -> Argument:
    start = full_text.index(conclusion)
    return Argument(
        argument_id="essay001#T1",
        essay_id="essay001",
        full_text=full_text,
        premises=("Because Y",),
        conclusion=conclusion,
        conclusion_char_range=(start, start + len(conclusion)),
        label=Label.SUFFICIENT,
        extra_conclusion_ranges=tuple(extras),
    )


def test_mask_replaces_conclusion_in_context():
    pairs = build_masked_pairs([_argument("Thus, X. Because Y.", "X")])
    assert len(pairs) == 1
    assert pairs[0].source == f"Thus, {MASK_MARKER}. Because Y."
    assert pairs[0].target == "Thus, X. Because Y."
    assert pairs[0].is_primary


def test_embedded_conclusion_yields_second_pair():
    text = "Thus, X. Clearly, Z holds. Because Y."
    z = (text.index("Z holds"), text.index("Z holds") + len("Z holds"))
    pairs = build_masked_pairs([_argument(text, "X", extras=[z])])
    assert len(pairs) == 2
    assert [p.is_primary for p in pairs] == [True, False]
    assert pairs[1].source == f"Thus, X. Clearly, {MASK_MARKER}. Because Y."
    assert pairs[1].conclusion == "Z holds"


def test_mask_collision_detected():
    with pytest.raises(MaskCollision):
        build_masked_pairs([_argument(f"Thus, X. Because {MASK_MARKER} Y.", "X")])


def test_substitute_requires_exactly_one_marker():
    with pytest.raises(ValueError):
        substitute_mask("no marker here", "X")
    with pytest.raises(ValueError):
        substitute_mask(f"{MASK_MARKER} and {MASK_MARKER}", "X")


def test_roundtrip_on_every_fixture_pair(full_scale_corpus):
    _, build = full_scale_corpus
    assert len(build.pairs) == 1506
    for pair in build.pairs:
        assert pair.source.count(MASK_MARKER) == 1
        assert substitute_mask(pair.source, pair.conclusion) == pair.target


def test_primary_pair_count_matches_arguments(full_scale_corpus):
    _, build = full_scale_corpus
    primaries = [p for p in build.pairs if p.is_primary]
    assert len(primaries) == 1029
    assert len({p.argument_id for p in primaries}) == 1029


@settings(max_examples=200, deadline=None)
@given(
    prefix=st.text(alphabet="abcdef ,.", max_size=40),
    conclusion=st.text(alphabet="ghijkl ", min_size=1, max_size=30),
    suffix=st.text(alphabet="mnopqr ,.", max_size=40),
)
def test_roundtrip_property(prefix, conclusion, suffix):
    full = prefix + conclusion + suffix
    arg = Argument(
        argument_id="e#T1",
        essay_id="e",
        full_text=full,
        premises=("p",),
        conclusion=conclusion,
        conclusion_char_range=(len(prefix), len(prefix) + len(conclusion)),
    )
    (pair,) = build_masked_pairs([arg])
    assert substitute_mask(pair.source, pair.conclusion) == pair.target == full
