"""Deterministic seed derivation for every stochastic component.

A single master seed fans out into per-stage seeds by hashing the stage's
identifying parts, so re-running any one stage with its recorded seed
reproduces its results regardless of what else ran.
"""

from __future__ import annotations

import hashlib


def derive_seed(master: int, *parts: object) -> int:
    """A 63-bit seed derived from `master` and a label path such as ("fold", run, trial)."""
    material = ":".join([str(master)] + [str(p) for p in parts])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
