"""The eight classifier input variants built from an argument and its generated conclusion.

Each variant serializes premises, gold conclusion, and generated conclusion
into one string. Highlighted spans are wrapped in a balanced pair of
separator markers; where the gold and generated conclusions share one
highlighted region, a double separator divides them so distinct inputs can
never collapse into the same string. The conclusion slot of premises-only is
filled with the encoder's unknown-token placeholder (kept as the literal
"<unk>" in the intermediate text format; the bound encoder maps it to its own
unknown token).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from suffgen.corpus.arguments import Argument, Label

logger = logging.getLogger(__name__)

SEPARATOR = "</s>"
UNKNOWN_TOKEN = "<unk>"


class VariantKind(str, Enum):
    PLAIN = "plain"
    PREMISES_ONLY = "premises-only"
    CONCLUSION_ONLY = "conclusion-only"
    GENERATED_ONLY = "generated-only"
    PREMISES_PLUS_CONCLUSION = "premises+conclusion"
    PREMISES_PLUS_GENERATED = "premises+generated"
    CONCLUSION_PLUS_GENERATED = "conclusion+generated"
    ALL = "all"


# Variants whose serialization consumes a generated conclusion.
GENERATED_KINDS = frozenset(
    {
        VariantKind.GENERATED_ONLY,
        VariantKind.PREMISES_PLUS_GENERATED,
        VariantKind.CONCLUSION_PLUS_GENERATED,
        VariantKind.ALL,
    }
)

class MissingGenerated(ValueError):
    """Variant requires a generated conclusion but none was supplied."""


@dataclass(frozen=True)
class VariantInput:
    argument_id: str
    kind: VariantKind
    serialized: str
    label: Label


def _highlight(text: str) -> str:
    return f"{SEPARATOR} {text} {SEPARATOR}"


_logged_placeholder = False


def _note_placeholder_surface() -> None:
    # The intermediate text format carries the literal "<unk>"; bound encoders
    # remap it to their own unknown token. Logged once per process.
    global _logged_placeholder
    if not _logged_placeholder:
        logger.info("premises-only variant uses placeholder surface %r", UNKNOWN_TOKEN)
        _logged_placeholder = True


def build_variant_input(arg: Argument, generated: str | None, kind: VariantKind) -> VariantInput:
    if arg.label is None:
        raise ValueError(f"{arg.argument_id}: argument must be labeled before serialization")
    if kind in GENERATED_KINDS and generated is None:
        raise MissingGenerated(f"{arg.argument_id}: variant {kind.value} needs a generated conclusion")

    start, end = arg.conclusion_char_range
    prefix, suffix = arg.full_text[:start], arg.full_text[end:]
    gold = arg.conclusion

    if kind is VariantKind.PLAIN:
        serialized = arg.full_text
    elif kind is VariantKind.PREMISES_ONLY:
        _note_placeholder_surface()
        serialized = prefix + UNKNOWN_TOKEN + suffix
    elif kind is VariantKind.CONCLUSION_ONLY:
        serialized = gold
    elif kind is VariantKind.GENERATED_ONLY:
        serialized = generated
    elif kind is VariantKind.PREMISES_PLUS_CONCLUSION:
        serialized = prefix + _highlight(gold) + suffix
    elif kind is VariantKind.PREMISES_PLUS_GENERATED:
        serialized = prefix + _highlight(generated) + suffix
    elif kind is VariantKind.CONCLUSION_PLUS_GENERATED:
        serialized = f"{gold} {SEPARATOR} {generated}"
    elif kind is VariantKind.ALL:
        serialized = prefix + _highlight(f"{gold} {SEPARATOR}{SEPARATOR} {generated}") + suffix
    else:  # pragma: no cover - exhaustive over the enum
        raise ValueError(f"unhandled variant {kind!r}")

    return VariantInput(argument_id=arg.argument_id, kind=kind, serialized=serialized, label=arg.label)


def variant_input_to_record(vi: VariantInput) -> dict:
    return {
        "argument_id": vi.argument_id,
        "kind": vi.kind.value,
        "serialized": vi.serialized,
        "label": vi.label.value,
    }


def variant_input_from_record(record: dict) -> VariantInput:
    return VariantInput(
        argument_id=record["argument_id"],
        kind=VariantKind(record["kind"]),
        serialized=record["serialized"],
        label=Label(record["label"]),
    )
