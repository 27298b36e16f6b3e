"""Parser for line-oriented standoff annotation files paired with essay text.

Each essay is a UTF-8 text file plus a companion annotation file holding one
record per line:

    T<id>\t<Kind> <start> <end>\t<surface text>     component span
    R<id>\t<kind> Arg1:T<src> Arg2:T<dst>           directed relation
    A<id>\t<name> T<target> <value>                 span attribute

Span offsets index characters of the text file; the quoted surface string must
equal the text slice exactly, which guards against the off-by-anything errors
that silently corrupt downstream masking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

SPAN_KINDS = ("MajorClaim", "Claim", "Premise")
RELATION_KINDS = ("supports", "attacks")

_SPAN_RE = re.compile(r"^(T\d+)\t(\w+) (\d+) (\d+)\t(.*)$", re.DOTALL)
_RELATION_RE = re.compile(r"^(R\d+)\t(\w+) Arg1:(T\d+) Arg2:(T\d+)\s*$")
_ATTRIBUTE_RE = re.compile(r"^(A\d+)\t(\w+) (T\d+)(?: (.+))?$")


class MalformedRecord(ValueError):
    """Annotation line that cannot be parsed or references unknown spans."""


class OffsetMismatch(ValueError):
    """Span surface string disagrees with the text slice at its offsets."""


@dataclass(frozen=True)
class AnnotationSpan:
    """One annotated component with its outgoing relations."""

    span_id: str
    kind: str
    start: int
    end: int
    surface: str
    relations: tuple[tuple[str, str], ...] = ()  # (target_span_id, relation kind)
    attributes: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class EssayDocument:
    """One essay's text plus its typed annotation spans."""

    essay_id: str
    text: str
    components: tuple[AnnotationSpan, ...]

    def spans_of_kind(self, kind: str) -> list[AnnotationSpan]:
        return [s for s in self.components if s.kind == kind]

    def span(self, span_id: str) -> AnnotationSpan:
        for s in self.components:
            if s.span_id == span_id:
                return s
        raise KeyError(span_id)


def parse_standoff(essay_text_file: bytes, annotation_file: bytes, essay_id: str) -> EssayDocument:
    """Parse one essay's text and annotation bytes into an EssayDocument.

    Raises MalformedRecord for unparseable lines or dangling relation targets,
    OffsetMismatch when a span's quoted surface differs from the text slice.
    """
    text = essay_text_file.decode("utf-8")
    raw_spans: dict[str, dict] = {}
    relations: dict[str, list[tuple[str, str]]] = {}
    attributes: dict[str, list[tuple[str, str]]] = {}

    for lineno, line in enumerate(annotation_file.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("T"):
            match = _SPAN_RE.match(line)
            if match is None:
                raise MalformedRecord(f"{essay_id}:{lineno}: unparseable span line: {line!r}")
            span_id, kind, start, end, surface = match.groups()
            if kind not in SPAN_KINDS:
                raise MalformedRecord(f"{essay_id}:{lineno}: unknown span kind {kind!r}")
            start_i, end_i = int(start), int(end)
            if not (0 <= start_i < end_i <= len(text)):
                raise OffsetMismatch(
                    f"{essay_id}: span {span_id} range [{start_i}, {end_i}) outside text of length {len(text)}"
                )
            if text[start_i:end_i] != surface:
                raise OffsetMismatch(
                    f"{essay_id}: span {span_id} surface {surface!r} does not match text slice "
                    f"{text[start_i:end_i]!r} at [{start_i}, {end_i})"
                )
            if span_id in raw_spans:
                raise MalformedRecord(f"{essay_id}:{lineno}: duplicate span id {span_id}")
            raw_spans[span_id] = {"kind": kind, "start": start_i, "end": end_i, "surface": surface}
        elif line.startswith("R"):
            match = _RELATION_RE.match(line)
            if match is None:
                raise MalformedRecord(f"{essay_id}:{lineno}: unparseable relation line: {line!r}")
            _, kind, source, target = match.groups()
            if kind not in RELATION_KINDS:
                raise MalformedRecord(f"{essay_id}:{lineno}: unknown relation kind {kind!r}")
            relations.setdefault(source, []).append((target, kind))
        elif line.startswith("A"):
            match = _ATTRIBUTE_RE.match(line)
            if match is None:
                raise MalformedRecord(f"{essay_id}:{lineno}: unparseable attribute line: {line!r}")
            _, name, target, value = match.groups()
            attributes.setdefault(target, []).append((name, value or ""))
        elif line.startswith("#"):
            continue  # annotator notes
        else:
            raise MalformedRecord(f"{essay_id}:{lineno}: unrecognized record: {line!r}")

    for source, rels in relations.items():
        if source not in raw_spans:
            raise MalformedRecord(f"{essay_id}: relation source {source} has no span")
        for target, _ in rels:
            if target not in raw_spans:
                raise MalformedRecord(f"{essay_id}: relation target {target} has no span")
    for target in attributes:
        if target not in raw_spans:
            raise MalformedRecord(f"{essay_id}: attribute target {target} has no span")

    components = tuple(
        AnnotationSpan(
            span_id=span_id,
            kind=data["kind"],
            start=data["start"],
            end=data["end"],
            surface=data["surface"],
            relations=tuple(relations.get(span_id, ())),
            attributes=tuple(attributes.get(span_id, ())),
        )
        for span_id, data in sorted(raw_spans.items(), key=lambda kv: kv[1]["start"])
    )
    return EssayDocument(essay_id=essay_id, text=text, components=components)


def load_essay_dir(essays_dir: str | Path, ann_suffix: str = ".ann") -> list[EssayDocument]:
    """Load every `<id>.txt` / `<id>.ann` pair under a directory, sorted by essay id."""
    essays_dir = Path(essays_dir)
    docs = []
    seen: set[str] = set()
    for txt_path in sorted(essays_dir.glob("*.txt")):
        ann_path = txt_path.with_suffix(ann_suffix)
        if not ann_path.exists():
            continue
        essay_id = txt_path.stem
        if essay_id in seen:
            raise MalformedRecord(f"duplicate essay id {essay_id}")
        seen.add(essay_id)
        docs.append(parse_standoff(txt_path.read_bytes(), ann_path.read_bytes(), essay_id))
    return docs
