"""Deterministic file output.

All artifacts are written atomically (temp file in the target directory,
then replace), floats are formatted with a fixed significant-digit
count, and JSON keys are sorted, so repeated runs of the same job
produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np


def to_plain(obj):
    """Recursively convert numpy scalars and arrays to plain Python."""
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def format_value(value, precision: int = 17) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.*g" % (precision, float(value))
    return str(value)


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path, header, rows, precision: int = 17) -> None:
    """Delimited table with one unit-annotated header line.

    Every header entry must carry a bracketed unit, e.g. "time [1]" or
    "x [length]"; dimensionless columns use [1].
    """
    for column in header:
        if "[" not in column or not column.rstrip().endswith("]"):
            raise ValueError(f"column {column!r} is missing its [unit]")
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v, precision) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, obj) -> None:
    text = json.dumps(to_plain(obj), sort_keys=True, indent=2)
    atomic_write_text(path, text + "\n")
