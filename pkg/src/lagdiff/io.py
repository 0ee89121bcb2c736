"""CSV and JSON serialization for nodes, matrices and result tables.

Matrix CSV files start with a self-describing comment line::

    # laguerre-difmat v1, family=augmented-gauss, alpha=0, npts=2, order=1

followed by one comma-separated row per matrix row.  Node tables use the tag
``laguerre-nodes`` and rows ``index,node,coeff``.  At 17 significant digits
every binary64 value survives a write/read round trip bit for bit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

DEFAULT_PRECISION = 17
_HEADER = re.compile(r"^#\s*(laguerre-[a-z]+)\s+v(\d+)\s*(?:,(.*))?$")


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None  # None means standard output
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if not 6 <= self.precision <= 17:
            raise ValueError(f"precision must lie in [6, 17], got {self.precision}")


def format_real(value: float, precision: int = DEFAULT_PRECISION) -> str:
    return f"{float(value):.{precision - 1}e}"


def rounded(values, precision: int = DEFAULT_PRECISION) -> np.ndarray:
    """The binary64 values a CSV reader would see at this precision."""
    a = np.asarray(values, dtype=float)
    if precision == 17:
        return a
    return np.vectorize(lambda v: float(format_real(v, precision)), otypes=[float])(a)


def _fmt_meta(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def header_line(kind: str, meta: dict) -> str:
    fields = ", ".join(f"{k}={_fmt_meta(v)}" for k, v in meta.items())
    return f"# {kind} v1, {fields}" if fields else f"# {kind} v1"


def parse_header(line: str) -> tuple[str, dict]:
    m = _HEADER.match(line.strip())
    if not m:
        raise ValueError(f"not a laguerre CSV header: {line.strip()!r}")
    meta = {}
    for part in (m.group(3) or "").split(","):
        if part.strip():
            key, _, val = part.strip().partition("=")
            meta[key.strip()] = val.strip()
    return m.group(1), meta


@dataclass
class Table:
    """Rows of named columns with a kind tag and metadata."""

    kind: str
    meta: dict
    columns: list[str]
    rows: list[list] = field(default_factory=list)


def _cell(v, precision: int) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_real(v, precision) if np.isfinite(v) else str(float(v))
    return "" if v is None else str(v)


def _jsonable(v, precision: int):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        if not np.isfinite(v):
            return str(float(v))
        return float(format_real(v, precision))
    return v


def write_csv_lines(out: IO[str], header: str, rows: Iterable[Iterable[str]]) -> None:
    out.write(header + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")


def write_matrix(out: IO[str], entries, meta: dict, spec: OutputSpec = OutputSpec()) -> None:
    entries = np.asarray(entries, dtype=float)
    if spec.format == "json":
        doc = {"kind": "laguerre-difmat", "version": 1, **meta}
        doc["entries"] = [[_jsonable(v, spec.precision) for v in row] for row in entries]
        json.dump(doc, out)
        out.write("\n")
        return
    rows = ([format_real(v, spec.precision) for v in row] for row in entries)
    write_csv_lines(out, header_line("laguerre-difmat", meta), rows)


def write_nodes(out: IO[str], nodes, coeffs, meta: dict, spec: OutputSpec = OutputSpec()) -> None:
    if spec.format == "json":
        doc = {"kind": "laguerre-nodes", "version": 1, **meta}
        doc["nodes"] = [_jsonable(v, spec.precision) for v in nodes]
        doc["coeffs"] = [_jsonable(v, spec.precision) for v in coeffs]
        json.dump(doc, out)
        out.write("\n")
        return
    rows = (
        [str(i), format_real(x, spec.precision), format_real(c, spec.precision)]
        for i, (x, c) in enumerate(zip(nodes, coeffs))
    )
    write_csv_lines(out, header_line("laguerre-nodes", meta), rows)


def write_table(out: IO[str], table: Table, spec: OutputSpec = OutputSpec()) -> None:
    if spec.format == "json":
        doc = {"kind": table.kind, "version": 1, **table.meta}
        doc["rows"] = [
            {c: _jsonable(v, spec.precision) for c, v in zip(table.columns, row)} for row in table.rows
        ]
        json.dump(doc, out)
        out.write("\n")
        return
    out.write(header_line(table.kind, table.meta) + "\n")
    out.write(",".join(table.columns) + "\n")
    for row in table.rows:
        out.write(",".join(_cell(v, spec.precision) for v in row) + "\n")


def read_matrix_text(path: str | Path) -> tuple[dict, list[list[str]]]:
    """Header metadata and the raw decimal strings of a matrix CSV."""
    with open(path) as fh:
        kind, meta = parse_header(fh.readline())
        if kind != "laguerre-difmat":
            raise ValueError(f"{path}: expected a laguerre-difmat file, found {kind}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return meta, rows


def read_matrix(path: str | Path) -> tuple[dict, np.ndarray]:
    meta, rows = read_matrix_text(path)
    return meta, np.array([[float(v) for v in row] for row in rows])


def read_nodes(path: str | Path) -> tuple[dict, np.ndarray, np.ndarray]:
    with open(path) as fh:
        kind, meta = parse_header(fh.readline())
        if kind != "laguerre-nodes":
            raise ValueError(f"{path}: expected a laguerre-nodes file, found {kind}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    nodes = np.array([float(r[1]) for r in rows])
    coeffs = np.array([float(r[2]) for r in rows])
    return meta, nodes, coeffs


def parse_matrix_text(text: str) -> tuple[dict, np.ndarray]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    _, meta = parse_header(lines[0])
    return meta, np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
