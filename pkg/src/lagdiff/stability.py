"""Stable versus classic construction over a range of node counts.

Reference matrices come from an on-disk cache of extended-precision first
order matrices (CSV, 34 significant digits) produced by
``scripts/build_oracle_cache.py``.  The cache directory is taken from the
``LAGUERRE_ORACLE_CACHE`` environment variable when set.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .collocation import build_nodeset, scaled_coeffs
from .difmat import DiffMatrix, classic_construction, first_order
from .io import Table, read_matrix

CACHE_ENV = "LAGUERRE_ORACLE_CACHE"
DEFAULT_CACHE = Path.home() / ".cache" / "lagdiff" / "oracle"
REGENERATE_HINT = "regenerate it with: python scripts/build_oracle_cache.py --out <dir>"


class MissingCacheError(FileNotFoundError):
    pass


def cache_dir(override: str | Path | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else DEFAULT_CACHE


def cache_file(directory: Path, family: str, npts: int) -> Path:
    return directory / f"d1-{family}-{npts}.csv"


def nodes_file(directory: Path, family: str, npts: int) -> Path:
    return directory / f"nodes-{family}-{npts}.csv"


def cached_sizes(directory: Path, family: str) -> list[int]:
    if not directory.is_dir():
        raise MissingCacheError(f"oracle cache {directory} does not exist; {REGENERATE_HINT}")
    prefix = f"d1-{family}-"
    sizes = sorted(int(p.stem[len(prefix):]) for p in directory.glob(f"{prefix}*.csv"))
    if not sizes:
        raise MissingCacheError(f"oracle cache {directory} holds no {family} matrices; {REGENERATE_HINT}")
    return sizes


def max_relative_error(approx: np.ndarray, ref: np.ndarray, mask: np.ndarray | None = None) -> float:
    """Largest ``|approx - ref| / |ref|`` over entries with a nonzero reference.

    Zero reference entries are compared in absolute terms.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.where(ref != 0, np.abs(approx - ref) / np.abs(ref), np.abs(approx - ref))
    if mask is not None:
        err = err[mask]
    return float(np.max(err)) if err.size else 0.0


@dataclass(frozen=True)
class GrowthFactors:
    """Decimal logarithms of the factors making up ``c`` at the largest node."""

    log10_weight: float  # exp(-x_max/2)
    log10_product: float  # prod_{m != max} |x_max - x_m|
    log10_scaled: float  # |c~| at the largest node


def growth_factors(nodeset, coeffs=None) -> GrowthFactors:
    x = nodeset.nodes
    coeffs = scaled_coeffs(nodeset) if coeffs is None else coeffs
    xm = x[-1]
    return GrowthFactors(
        -xm / (2 * math.log(10)),
        float(np.sum(np.log10(np.abs(xm - x[:-1])))),
        float(np.log10(abs(coeffs.values[-1]))),
    )


STUDY_COLUMNS = [
    "npts",
    "product_finite",
    "product_max_rel_err",
    "derivative_finite",
    "derivative_max_rel_err",
    "stable_offdiag_max_rel_err",
    "stable_diag_max_rel_err",
    "stable_min_abs_entry",
    "stable_max_abs_entry",
    "log10_weight",
    "log10_product",
    "log10_scaled_coeff",
]


def _offdiag_mask(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def study_row(npts: int, family: str = "augmented-gauss", reference: np.ndarray | None = None) -> list:
    ns = build_nodeset(family, npts)
    coeffs = scaled_coeffs(ns)
    d = first_order(ns, coeffs).entries
    off = _offdiag_mask(npts)
    row: list = [npts]
    for weights in ("product", "derivative"):
        res = classic_construction(ns, weights)
        finite = isinstance(res, DiffMatrix)
        row.append(finite)
        row.append(max_relative_error(res.entries, reference) if finite and reference is not None else None)
    if reference is not None:
        row.append(max_relative_error(d, reference, off))
        row.append(max_relative_error(np.diag(d), np.diag(reference)))
    else:
        row += [None, None]
    mags = np.abs(d[off])
    g = growth_factors(ns, coeffs)
    row += [float(mags.min()), float(mags.max()), g.log10_weight, g.log10_product, g.log10_scaled]
    return row


def stability_study(
    max_n: int,
    step: int = 10,
    family: str = "augmented-gauss",
    cache: str | Path | None = None,
) -> Table:
    """One row per node count on ``step, 2*step, ..., max_n`` plus every cached size.

    Error columns are filled where the cache has a reference matrix.
    """
    directory = cache_dir(cache)
    sizes = [s for s in cached_sizes(directory, family) if s <= max_n]
    grid = sorted(set(range(step, max_n + 1, step)) | set(sizes))
    grid = [n for n in grid if n >= 2]
    table = Table("laguerre-stability", {"family": family, "max_n": max_n}, list(STUDY_COLUMNS))
    for npts in grid:
        ref = read_matrix(cache_file(directory, family, npts))[1] if npts in sizes else None
        table.rows.append(study_row(npts, family, ref))
    return table


def first_breakdown(table: Table, column: str = "product_finite") -> int | None:
    idx = table.columns.index(column)
    for row in table.rows:
        if not row[idx]:
            return row[0]
    return None

