"""Flat-file plumbing for the CLI: CSV with full-precision floats, JSON
summaries, input digests.  All writers are byte-deterministic."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np


class CsvParseError(ValueError):
    """Malformed numeric CSV; carries the 1-based row/column location."""

    def __init__(self, path, row, col, cell):
        super().__init__(f"{path}: row {row}, column {col}: cannot parse {cell!r} as a number")
        self.row = row
        self.col = col


def format_float(v: float) -> str:
    """17 significant digits: round-trips any double exactly."""
    return format(float(v), ".17g")


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if not isinstance(v, str) else v for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_numeric_csv(path) -> np.ndarray:
    """Rows of comma-separated numbers; a leading non-numeric row is a header."""
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise CsvParseError(path, 1, 1, "")
    start = 0
    first = lines[0].split(",")
    try:
        [float(c) for c in first]
    except ValueError:
        start = 1
    rows = []
    width = None
    for i, line in enumerate(lines[start:], start=start + 1):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise CsvParseError(path, i, len(cells), line)
        parsed = []
        for j, cell in enumerate(cells, start=1):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise CsvParseError(path, i, j, cell) from None
        rows.append(parsed)
    if not rows:
        raise CsvParseError(path, 1, 1, "<no data rows>")
    out = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(out)):
        bad = np.argwhere(~np.isfinite(out))[0]
        raise CsvParseError(path, int(bad[0]) + start + 1, int(bad[1]) + 1, "non-finite")
    return out


def read_vector_csv(path) -> np.ndarray:
    data = read_numeric_csv(path)
    if data.shape[1] != 1:
        raise CsvParseError(path, 1, data.shape[1], "expected a single column")
    return data[:, 0]


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
