"""Masked argument-argument pairs for conclusion infilling.

Each pair's source is the argument passage with one conclusion occurrence
replaced by the mask marker; the target is the unmodified passage. A passage
yields one pair for its own conclusion plus one per additional conclusion
occurrence inside it, so the pair count can exceed the argument count.
"""

from __future__ import annotations

from dataclasses import dataclass

from suffgen.corpus.arguments import Argument

MASK_MARKER = "<mask>"


class MaskCollision(ValueError):
    """Argument text already contains the mask marker literal."""


@dataclass(frozen=True)
class MaskedArgumentPair:
    pair_id: str
    argument_id: str
    essay_id: str
    source: str  # passage with exactly one mask marker
    target: str  # original passage
    conclusion: str  # the masked-out text
    is_primary: bool  # True when the masked occurrence is the argument's own conclusion

    def __post_init__(self) -> None:
        if self.source.count(MASK_MARKER) != 1:
            raise ValueError(f"{self.pair_id}: source must contain exactly one mask marker")
        if substitute_mask(self.source, self.conclusion) != self.target:
            raise ValueError(f"{self.pair_id}: mask substitution does not reproduce the target")


def substitute_mask(source: str, fill: str) -> str:
    """Replace the single mask marker in `source` with `fill`."""
    if source.count(MASK_MARKER) != 1:
        raise ValueError("source must contain exactly one mask marker")
    return source.replace(MASK_MARKER, fill, 1)


def build_masked_pairs(args: list[Argument]) -> list[MaskedArgumentPair]:
    """One pair per (argument, conclusion occurrence), primary occurrence first."""
    pairs = []
    for arg in args:
        if MASK_MARKER in arg.full_text:
            raise MaskCollision(f"{arg.argument_id}: text already contains {MASK_MARKER!r}")
        occurrences = [arg.conclusion_char_range] + sorted(arg.extra_conclusion_ranges)
        for i, (start, end) in enumerate(occurrences):
            pairs.append(
                MaskedArgumentPair(
                    pair_id=f"{arg.argument_id}/p{i}",
                    argument_id=arg.argument_id,
                    essay_id=arg.essay_id,
                    source=arg.full_text[:start] + MASK_MARKER + arg.full_text[end:],
                    target=arg.full_text,
                    conclusion=arg.full_text[start:end],
                    is_primary=(start, end) == arg.conclusion_char_range,
                )
            )
    return pairs
