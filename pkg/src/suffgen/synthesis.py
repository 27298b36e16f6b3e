"""Deterministic synthetic corpora in the standoff format.

The real essay corpus is distributed under its own license and is not bundled
here. This module fabricates corpora with the same shape: titled essays,
paragraph-local arguments (one claim plus premises), premise-less claims
embedded inside argument passages, major claims, stance attributes, and a
tab-separated sufficiency label table. All counts and the sentence/token
length profile are controlled, so the full pipeline can be validated at
reference scale (402 essays, 1029 arguments, 681/348 labels, 1506 pairs)
without the original data. Everything derives from one seed.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

from suffgen.seeding import derive_seed

_VOCAB = """
people students school education health children society knowledge teachers parents
community future success effort money work time experience life skills
government country city family culture freedom technology science nature environment
food energy travel sport music art language history learning reading
writing practice habit behavior attitude respect support progress growth change
benefit problem reason result effect cause purpose value interest chance
opportunity challenge decision choice opinion belief idea thought question answer
way manner method system plan goal target level degree amount
number part group team member leader friend neighbor stranger person
world nation region area place home house road street market
garden park library hospital office factory farm forest river mountain
morning evening night week month year season moment period age
often always never sometimes usually rarely quickly slowly carefully easily
simply clearly really truly highly deeply widely openly fairly strongly
good bad new old young large small long short high
low early late important necessary useful helpful harmful common rare
simple complex easy difficult cheap expensive healthy strong weak happy
sad free busy quiet loud safe dangerous clean dirty bright
learn teach study read write play watch listen speak talk
think believe know understand remember forget choose decide plan try
help support protect improve develop build create make take give
get find keep hold bring carry move stay leave arrive
become grow change start finish continue stop increase reduce provide
offer receive share spend save waste enjoy prefer avoid accept
""".split()

_CLAIM_MARKERS = [
    "Thus, ",
    "Therefore, ",
    "Hence, ",
    "Consequently, ",
    "In short, ",
    "For this reason, ",
]
_EXTRA_CLAIM_MARKERS = [
    "Clearly, ",
    "In other words, ",
    "Put simply, ",
]
_PREMISE_MARKERS = [
    "For example, ",
    "Moreover, ",
    "Furthermore, ",
    "In fact, ",
    "Besides, ",
]
_MAJOR_MARKERS = [
    "I am convinced that ",
    "I strongly believe that ",
]

# Tokens contributed by a marker under the shared tokenizer (words + "," or none).
def _marker_tokens(marker: str) -> int:
    return len(marker.replace(",", " , ").split())


@dataclass(frozen=True)
class SynthesizedEssay:
    essay_id: str
    text: str
    annotations: str


@dataclass(frozen=True)
class SynthesizedCorpus:
    essays: tuple[SynthesizedEssay, ...]
    label_rows: tuple[tuple[str, str, str], ...]  # (essay_id, argument text, label)
    expected_arguments: int
    expected_pairs: int
    expected_sufficient: int
    expected_insufficient: int
    expected_skipped_claims: int

    def write(self, essays_dir: str | Path, labels_path: str | Path) -> None:
        essays_dir = Path(essays_dir)
        essays_dir.mkdir(parents=True, exist_ok=True)
        for essay in self.essays:
            (essays_dir / f"{essay.essay_id}.txt").write_text(essay.text, encoding="utf-8")
            (essays_dir / f"{essay.essay_id}.ann").write_text(essay.annotations, encoding="utf-8")
        labels_path = Path(labels_path)
        labels_path.parent.mkdir(parents=True, exist_ok=True)
        with open(labels_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, delimiter="\t")
            writer.writerow(["essay_id", "argument_text", "label"])
            writer.writerows(self.label_rows)


class _Profile:
    """Length profile: per-sentence token range and premise-count weights."""

    def __init__(self, token_range: tuple[int, int], premise_weights: tuple[float, float, float]):
        self.token_range = token_range
        self.premise_weights = premise_weights


# Tuned so the full-scale corpus means land on ~4.5 sentences / ~94.6 tokens
# per argument under the shared tokenizer and sentence splitter.
REFERENCE_PROFILE = _Profile(token_range=(17, 25), premise_weights=(0.25, 0.4635, 0.2865))
# Shorter passages keep character-level decoding fast in desk-scale runs.
DESK_PROFILE = _Profile(token_range=(7, 11), premise_weights=(0.6, 0.3, 0.1))


class _EssayBuilder:
    """Accumulates essay text while recording annotation spans at exact offsets."""

    def __init__(self, essay_id: str):
        self.essay_id = essay_id
        self.parts: list[str] = []
        self.length = 0
        self.spans: list[tuple[str, int, int, str]] = []  # (kind, start, end, surface)
        self.relations: list[tuple[int, int, str]] = []  # (premise span idx, claim span idx, kind)
        self.stances: list[tuple[int, str]] = []  # (claim span idx, value)

    def append(self, piece: str) -> None:
        self.parts.append(piece)
        self.length += len(piece)

    def append_span(self, kind: str, surface: str) -> int:
        start = self.length
        self.append(surface)
        self.spans.append((kind, start, start + len(surface), surface))
        return len(self.spans) - 1

    def render(self) -> SynthesizedEssay:
        text = "".join(self.parts)
        lines = []
        for i, (kind, start, end, surface) in enumerate(self.spans):
            assert text[start:end] == surface
            lines.append(f"T{i + 1}\t{kind} {start} {end}\t{surface}")
        for j, (src, dst, kind) in enumerate(self.relations):
            lines.append(f"R{j + 1}\t{kind} Arg1:T{src + 1} Arg2:T{dst + 1}")
        for k, (claim, value) in enumerate(self.stances):
            lines.append(f"A{k + 1}\tStance T{claim + 1} {value}")
        return SynthesizedEssay(self.essay_id, text, "\n".join(lines) + "\n")


def _clause(rng: random.Random, n_words: int, capitalized: bool) -> str:
    words = [rng.choice(_VOCAB) for _ in range(n_words)]
    if capitalized:
        words[0] = words[0].capitalize()
    return " ".join(words)


def _sentence_words(rng: random.Random, marker: str, profile: _Profile) -> int:
    # Per-sentence token total drawn uniformly from the profile's range; the
    # marker's tokens and the final period come out of that budget.
    return max(3, rng.randint(*profile.token_range) - _marker_tokens(marker) - 1)


def synthesize_corpus(
    n_essays: int = 402,
    n_arguments: int = 1029,
    n_sufficient: int = 681,
    n_extra_conclusions: int = 477,
    seed: int = 0,
    profile: _Profile = REFERENCE_PROFILE,
) -> SynthesizedCorpus:
    """Build a corpus with exactly the requested counts.

    `n_extra_conclusions` premise-less claims are embedded strictly inside
    argument passages (at most one per argument), so the masked-pair count is
    n_arguments + n_extra_conclusions.
    """
    if n_arguments < n_essays:
        raise ValueError("need at least one argument per essay")
    if n_extra_conclusions > n_arguments:
        raise ValueError("at most one embedded claim per argument")
    if n_sufficient > n_arguments:
        raise ValueError("n_sufficient exceeds n_arguments")

    global_rng = random.Random(derive_seed(seed, "synthesis-global"))
    base, remainder = divmod(n_arguments, n_essays)
    arg_counts = [base + 1] * remainder + [base] * (n_essays - remainder)
    global_rng.shuffle(arg_counts)

    extra_flags = [True] * n_extra_conclusions + [False] * (n_arguments - n_extra_conclusions)
    global_rng.shuffle(extra_flags)
    labels = ["sufficient"] * n_sufficient + ["insufficient"] * (n_arguments - n_sufficient)
    global_rng.shuffle(labels)

    essays = []
    label_rows = []
    arg_cursor = 0
    for i in range(n_essays):
        essay_id = f"essay{i + 1:03d}"
        rng = random.Random(derive_seed(seed, "synthesis-essay", i))
        builder = _EssayBuilder(essay_id)

        builder.append(_clause(rng, rng.randint(4, 7), capitalized=True) + "\n\n")

        marker = rng.choice(_MAJOR_MARKERS)
        builder.append(_clause(rng, rng.randint(8, 14), capitalized=True) + ". " + marker)
        builder.append_span("MajorClaim", _clause(rng, _sentence_words(rng, marker, profile), capitalized=False))
        builder.append(".\n")

        for _ in range(arg_counts[i]):
            has_extra = extra_flags[arg_cursor]
            label = labels[arg_cursor]
            arg_cursor += 1
            window_text = _emit_argument_paragraph(builder, rng, has_extra, profile)
            label_rows.append((essay_id, window_text, label))

        builder.append(_clause(rng, rng.randint(6, 12), capitalized=True) + ".\n")
        essays.append(builder.render())

    return SynthesizedCorpus(
        essays=tuple(essays),
        label_rows=tuple(label_rows),
        expected_arguments=n_arguments,
        expected_pairs=n_arguments + n_extra_conclusions,
        expected_sufficient=n_sufficient,
        expected_insufficient=n_arguments - n_sufficient,
        expected_skipped_claims=n_extra_conclusions,
    )


def _emit_argument_paragraph(
    builder: _EssayBuilder, rng: random.Random, has_extra: bool, profile: _Profile
) -> str:
    """Append one argument paragraph; returns the passage text the pipeline will extract."""
    sentences: list[tuple[str, str | None, str]] = []  # (marker, span kind, clause)

    n_premises = rng.choices([2, 3, 4], weights=profile.premise_weights)[0]
    for _ in range(n_premises):
        if rng.random() < 0.5:
            marker = rng.choice(_PREMISE_MARKERS)
            sentences.append((marker, "Premise", _clause(rng, _sentence_words(rng, marker, profile), False)))
        else:
            sentences.append(("", "Premise", _clause(rng, _sentence_words(rng, "", profile), True)))

    claim_marker = rng.choice(_CLAIM_MARKERS)
    claim = (claim_marker, "Claim", _clause(rng, _sentence_words(rng, claim_marker, profile), False))
    position = rng.choices(["first", "last", "middle"], weights=[0.5, 0.35, 0.15])[0]
    if position == "first":
        sentences.insert(0, claim)
    elif position == "last":
        sentences.append(claim)
    else:
        sentences.insert(rng.randint(1, len(sentences) - 1), claim)

    if has_extra:
        marker = rng.choice(_EXTRA_CLAIM_MARKERS)
        extra = (marker, "ExtraClaim", _clause(rng, _sentence_words(rng, marker, profile), False))
        sentences.insert(rng.randint(1, len(sentences) - 1), extra)

    if rng.random() < 0.3:
        builder.append(_clause(rng, rng.randint(8, 14), capitalized=True) + ". ")

    claim_idx = None
    premise_idxs = []
    window_start = builder.length
    for k, (marker, kind, clause) in enumerate(sentences):
        builder.append(marker)
        if kind == "Premise":
            # Unmarked premises span the whole sentence body (capitalized);
            # marked ones span just the clause after the marker.
            premise_idxs.append(builder.append_span("Premise", clause))
        elif kind == "Claim":
            claim_idx = builder.append_span("Claim", clause)
        else:
            builder.append_span("Claim", clause)  # embedded premise-less claim
        builder.append(".")
        window_end = builder.length
        if k < len(sentences) - 1:
            builder.append(" ")

    for p_idx in premise_idxs:
        kind = "attacks" if builder.relations and rng.random() < 0.07 else "supports"
        builder.relations.append((p_idx, claim_idx, kind))
    if rng.random() < 0.3:
        builder.stances.append((claim_idx, rng.choice(["For", "Against"])))

    if rng.random() < 0.3:
        builder.append(" " + _clause(rng, rng.randint(8, 14), capitalized=True) + ".")
    builder.append("\n")

    return "".join(builder.parts)[window_start:window_end]
