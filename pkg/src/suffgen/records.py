"""Line-delimited record files: one JSON object per line under a schema header.

Every intermediate artifact (arguments, pairs, fold plans, generated
conclusions, predictions, cell results) uses this format. The first line is a
header object naming the schema version; readers refuse files whose header
does not match what they expect. Writing is atomic (temp file + rename) and
key order is fixed, so identical data always produces identical bytes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Iterator


class SchemaMismatch(ValueError):
    """File header names a different schema than the reader expected."""


class MalformedRecordFile(ValueError):
    """Record file is missing its header or contains a non-JSON line."""


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def write_records(path: str | Path, schema: str, rows: Iterable[dict]) -> int:
    """Write `rows` under a `schema` header; returns the number of rows written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    count = 0
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(_dump({"schema": schema}) + "\n")
        for row in rows:
            fh.write(_dump(row) + "\n")
            count += 1
    os.replace(tmp, path)
    return count


def iter_records(path: str | Path, schema: str) -> Iterator[dict]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line:
            raise MalformedRecordFile(f"{path}: empty record file")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordFile(f"{path}: unreadable header: {exc}") from exc
        found = header.get("schema") if isinstance(header, dict) else None
        if found != schema:
            raise SchemaMismatch(f"{path}: expected schema {schema!r}, found {found!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordFile(f"{path}:{lineno}: unreadable record: {exc}") from exc


def read_records(path: str | Path, schema: str) -> list[dict]:
    return list(iter_records(path, schema))
