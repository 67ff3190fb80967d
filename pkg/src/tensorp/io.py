"""Text formats: tensor field input files and per-point glyph CSV output.

A tensor field file has one record per line, either 12 fields
``x y z T11 T12 T13 T21 ... T33`` or 6 fields ``x y T11 T12 T21 T22`` for
planar data. Fields are separated by whitespace or commas; ``#`` starts a
comment.
"""

from __future__ import annotations

import csv
import math
import re
from pathlib import Path

import numpy as np

from .errors import InputFormatError
from .interpolator import DataPoint, embed_2d

_SPLIT = re.compile(r"[,\s]+")

GLYPH_COLUMNS = (
    ["x", "y", "z", "lam1", "lam2", "lam3"]
    + [f"Q{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + [f"R{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    + ["det", "trace", "FA", "HA", "status"]
)


def parse_tensor_field(lines) -> list[DataPoint]:
    data = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        fields = [f for f in _SPLIT.split(text) if f]
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise InputFormatError(f"non-numeric field in {text!r}", lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise InputFormatError("non-finite value", lineno)
        if len(vals) == 12:
            data.append(DataPoint(np.array(vals[:3]), np.array(vals[3:]).reshape(3, 3)))
        elif len(vals) == 6:
            pos = np.array([vals[0], vals[1], 0.0])
            data.append(DataPoint(pos, embed_2d(np.array(vals[2:]).reshape(2, 2))))
        else:
            raise InputFormatError(f"expected 12 or 6 fields, got {len(vals)}", lineno)
    return data


def read_tensor_field(path) -> list[DataPoint]:
    with open(path, encoding="utf-8") as fh:
        return parse_tensor_field(fh)


def write_tensor_field(path, data) -> None:
    """Write 12-field records with 17 significant digits (lossless for float64)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# x y z T11 T12 T13 T21 T22 T23 T31 T32 T33\n")
        for d in data:
            vals = list(np.asarray(d.position, float)) + list(np.asarray(d.tensor, float).ravel())
            fh.write(" ".join(f"{v:.17g}" for v in vals) + "\n")


def glyph_row(position, lam, Q, R, metrics, status: str = "ok") -> list:
    nan = [float("nan")]
    pos = list(np.asarray(position, float))
    if lam is None:
        return pos + nan * (len(GLYPH_COLUMNS) - 4) + [status]
    m = [metrics.get(k, float("nan")) for k in ("det", "trace", "FA", "HA")]
    return pos + list(lam) + list(np.ravel(Q)) + list(np.ravel(R)) + m + [status]


def write_glyphs(path_or_file, rows) -> None:
    """CSV with a ``#``-prefixed header line naming the columns."""
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        fh.write("# " + ",".join(GLYPH_COLUMNS) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    finally:
        if own:
            fh.close()


def read_glyphs(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().lstrip("#").strip().split(",")
        return [dict(zip(header, row)) for row in csv.reader(fh)]
