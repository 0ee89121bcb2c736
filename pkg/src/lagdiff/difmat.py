"""Laguerre pseudospectral differentiation matrices.

The stable path builds every off-diagonal entry from node differences and
ratios of scaled coefficients, and every first- and second-order diagonal
entry from a closed form in the node itself.  Nothing exponentially large or
small is formed, so the construction works for thousands of nodes.

Two unstable alternatives are kept for comparison: the weighted negative sum
for diagonals, and a classic construction that forms the unscaled
coefficients ``exp(-x_j/2) pi'(x_j)`` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .collocation import NodeSet, ScaledCoeffs, scaled_coeffs
from .glr import root_bounds
from .laguerre import LaguerreParam, binom_at_zero, eval_poly_array

# largest argument for which exp() is finite in binary64
EXP_LIMIT = math.log(np.finfo(float).max)


class RangeLimitError(OverflowError):
    """An exponential ratio would overflow for this node set."""

    def __init__(self, message: str, max_safe_n: int):
        super().__init__(message)
        self.max_safe_n = max_safe_n


@dataclass(frozen=True)
class DiffMatrix:
    order: int
    entries: np.ndarray = field(repr=False)
    nodeset: NodeSet = field(repr=False)

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def _check(nodeset: NodeSet, coeffs: ScaledCoeffs | None) -> tuple[np.ndarray, np.ndarray]:
    if coeffs is None:
        coeffs = scaled_coeffs(nodeset)
    x, c = nodeset.nodes, coeffs.values
    if c.shape != x.shape:
        raise ValueError(f"{c.size} coefficients for {x.size} nodes")
    return x, c


def _differences(x: np.ndarray) -> np.ndarray:
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    return dx


def _offdiag_first(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    return (c[:, None] / c[None, :]) / _differences(x)


def first_order_diagonal(nodeset: NodeSet) -> np.ndarray:
    x, a, n = nodeset.nodes, nodeset.alpha, nodeset.generating_degree
    if not nodeset.family.includes_origin:
        return (-1.0 - a) / (2.0 * x)
    d = np.empty_like(x)
    d[0] = -0.5 - n / (a + 1.0)
    d[1:] = (1.0 - a) / (2.0 * x[1:])
    return d


def second_order_diagonal(nodeset: NodeSet) -> np.ndarray:
    x, a, n = nodeset.nodes, nodeset.alpha, nodeset.generating_degree
    s = 2 * n + a + 1
    if not nodeset.family.includes_origin:
        b = 4.0 * (a + 1) * (a + 2)
        return 1.0 / 12 - (2 * s * x - b) / (12 * x * x)
    b = 4.0 * (a + 1) * (a - 1)
    d = np.empty_like(x)
    xi = x[1:]
    d[0] = 0.25 + n * (n + a + 1) / ((a + 1) * (a + 2))
    d[1:] = 1.0 / 12 - (2 * s * xi - b) / (12 * xi * xi)
    return d


def first_order(nodeset: NodeSet, coeffs: ScaledCoeffs | None = None) -> DiffMatrix:
    x, c = _check(nodeset, coeffs)
    d = _offdiag_first(x, c)
    np.fill_diagonal(d, first_order_diagonal(nodeset))
    return DiffMatrix(1, d, nodeset)


def _raised_offdiag(order: int, prev: np.ndarray, x: np.ndarray, c: np.ndarray) -> np.ndarray:
    ratio = c[:, None] / c[None, :]
    return order / _differences(x) * (ratio * np.diag(prev)[:, None] - prev)


def second_order(
    nodeset: NodeSet, coeffs: ScaledCoeffs | None = None, d1: DiffMatrix | None = None
) -> DiffMatrix:
    x, c = _check(nodeset, coeffs)
    if d1 is None:
        d1 = first_order(nodeset, ScaledCoeffs(c))
    elif d1.order != 1 or d1.shape != (x.size, x.size):
        raise ValueError("d1 must be the first-order matrix on the same nodes")
    d = _raised_offdiag(2, d1.entries, x, c)
    np.fill_diagonal(d, second_order_diagonal(nodeset))
    return DiffMatrix(2, d, nodeset)


def max_safe_degree(alpha: float, limit: float = EXP_LIMIT) -> int:
    """Largest generating degree whose root range keeps ``exp(x_max/2)`` finite.

    Uses the rigorous upper bound on the largest root.
    """
    n = max(int(limit / 2), 1)
    while n > 0 and root_bounds(LaguerreParam(alpha, n))[1] / 2 >= limit:
        n -= 1
    return n


def _exp_ratio(nodeset: NodeSet) -> np.ndarray:
    # exp((x_k - x_j)/2) as a single exponential of a difference
    x = nodeset.nodes
    span = (x[-1] - x[0]) / 2
    if span >= EXP_LIMIT:
        safe = max_safe_degree(nodeset.alpha)
        raise RangeLimitError(
            f"exp((x_k - x_j)/2) overflows: node span {x[-1] - x[0]:.6g} exceeds "
            f"{2 * EXP_LIMIT:.6g}; generating degree must be at most {safe} "
            f"(got {nodeset.generating_degree})",
            safe,
        )
    return np.exp((x[:, None] - x[None, :]) / 2)


def weighted_negative_sum(entries: np.ndarray, order: int, ratio: np.ndarray) -> np.ndarray:
    """Diagonal making ``D^(order)`` differentiate ``exp(-x/2)`` exactly."""
    terms = ratio * entries
    np.fill_diagonal(terms, 0.0)
    return (-0.5) ** order - terms.sum(axis=1)


def negative_sum_diagonal(offdiag: DiffMatrix, nodeset: NodeSet | None = None) -> np.ndarray:
    """Diagonal from the weight-function identity, for comparison only.

    Unstable at large n: the exponential factors amplify rounding in the
    off-diagonals, and past the range limit they overflow, in which case
    :class:`RangeLimitError` is raised.
    """
    nodeset = offdiag.nodeset if nodeset is None else nodeset
    return weighted_negative_sum(offdiag.entries, offdiag.order, _exp_ratio(nodeset))


def reciprocal_sum_diagonal(nodeset: NodeSet) -> np.ndarray:
    """First-order diagonal ``-1/2 + sum_{i != k} 1/(x_k - x_i)``.

    The common library formula, accurate in exact arithmetic but subject to
    cancellation; the direct closed forms are preferred.
    """
    inv = 1.0 / _differences(nodeset.nodes)
    np.fill_diagonal(inv, 0.0)
    return -0.5 + inv.sum(axis=1)


def higher_order(prev: DiffMatrix, coeffs: ScaledCoeffs | None = None, nodeset: NodeSet | None = None) -> DiffMatrix:
    """Raise the order by one.

    Off-diagonals follow the order-raising recursion; the diagonal comes from
    the weighted negative sum, which limits the usable node range.
    """
    nodeset = prev.nodeset if nodeset is None else nodeset
    x, c = _check(nodeset, coeffs)
    order = prev.order + 1
    ratio = _exp_ratio(nodeset)
    d = _raised_offdiag(order, prev.entries, x, c)
    np.fill_diagonal(d, weighted_negative_sum(d, order, ratio))
    if not np.all(np.isfinite(d)):
        raise RangeLimitError(
            f"non-finite entries in the order-{order} matrix", max_safe_degree(nodeset.alpha)
        )
    return DiffMatrix(order, d, nodeset)


def differentiation_matrix(nodeset: NodeSet, order: int, coeffs: ScaledCoeffs | None = None) -> DiffMatrix:
    """``D^(order)``: direct formulas for orders 1 and 2, recursion beyond."""
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = scaled_coeffs(nodeset) if coeffs is None else coeffs
    d = first_order(nodeset, coeffs)
    if order >= 2:
        d = second_order(nodeset, coeffs, d)
    while d.order < order:
        d = higher_order(d, coeffs, nodeset)
    return d


@dataclass(frozen=True)
class ScaledOperators:
    """Matrices for the mapped variable ``x = xt / beta``."""

    beta: float
    nodes: np.ndarray
    matrices: dict[int, np.ndarray]


def scaled_operators(nodeset: NodeSet, orders=(1, 2), beta: float = 1.0) -> ScaledOperators:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    coeffs = scaled_coeffs(nodeset)
    mats = {}
    d = None
    for order in range(1, max(orders) + 1):
        if order == 1:
            d = first_order(nodeset, coeffs)
        elif order == 2:
            d = second_order(nodeset, coeffs, d)
        else:
            d = higher_order(d, coeffs, nodeset)
        if order in orders:
            mats[order] = beta**order * d.entries
    return ScaledOperators(beta, nodeset.nodes / beta, mats)


def interpolate(nodeset: NodeSet, values, x, coeffs: ScaledCoeffs | None = None) -> np.ndarray:
    """Evaluate the weighted interpolant ``exp(-x/2) p(x)`` through ``values``.

    Barycentric form with the weights ``exp(-x_j/2)/c_j``; the exponential
    enters only as ``exp((x - x_j)/2)``.
    """
    xn, c = _check(nodeset, coeffs)
    f = np.asarray(values, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - xn[None, :]
    exact = diff == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        num = (f / c / diff).sum(axis=1)
        den = (np.exp(diff / 2) / c / diff).sum(axis=1)
        out = num / den
    rows, cols = np.nonzero(exact)
    out[rows] = f[cols]
    return out


@dataclass(frozen=True)
class BreakdownReport:
    """Where a classic construction first produced a non-finite value."""

    npts: int
    weights: str
    intermediate: str
    index: tuple[int, ...]
    value: float

    def to_dict(self) -> dict:
        return {
            "npts": self.npts,
            "weights": self.weights,
            "intermediate": self.intermediate,
            "index": list(self.index),
            "value": repr(self.value),
        }


def _first_bad(a: np.ndarray, allow_zero: bool = True):
    bad = ~np.isfinite(a) if allow_zero else ~np.isfinite(a) | (a == 0)
    if not bad.any():
        return None
    idx = np.unravel_index(np.argmax(bad), a.shape)
    return tuple(int(i) for i in idx), float(a[idx])


def classic_coefficients(nodeset: NodeSet, weights: str = "product") -> np.ndarray:
    """Unscaled ``c_j = exp(-x_j/2) pi'(x_j)`` (may overflow or underflow).

    ``product`` forms ``pi'(x_j)`` as the product of node differences;
    ``derivative`` uses ``a(x_j) L_n'(x_j)`` from the unweighted recurrence.
    """
    x = nodeset.nodes
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        w = np.exp(-x / 2)
        if weights == "product":
            dx = _differences(x)
            return w * np.prod(dx, axis=1)
        if weights != "derivative":
            raise ValueError(f"unknown weight path {weights!r}")
        n, a = nodeset.generating_degree, nodeset.alpha
        interior = nodeset.interior
        _, lnm1 = eval_poly_array(n, a, interior)
        # at a root: L_n' = -(n + a) L_{n-1} / x
        dl = -(n + a) * lnm1 / interior
        if nodeset.family.includes_origin:
            return np.concatenate([[binom_at_zero(n, a)], w[1:] * interior * dl])
        return w * dl


def classic_construction(nodeset: NodeSet, weights: str = "product") -> DiffMatrix | BreakdownReport:
    """First-order matrix from unscaled coefficients, or where it broke down.

    Mirrors the usual library construction: explicit coefficients and the
    reciprocal-sum diagonal.
    """
    c = classic_coefficients(nodeset, weights)
    bad = _first_bad(c, allow_zero=False)
    if bad is not None:
        return BreakdownReport(nodeset.npts, weights, "c", *bad)
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        d = _offdiag_first(nodeset.nodes, c)
    np.fill_diagonal(d, reciprocal_sum_diagonal(nodeset))
    bad = _first_bad(d)
    if bad is not None:
        return BreakdownReport(nodeset.npts, weights, "D", *bad)
    return DiffMatrix(1, d, nodeset)


def weight_identity_residual(d: DiffMatrix) -> np.ndarray:
    """Per-row residual of ``sum_j D_kj exp(-x_j/2) = (-1/2)^l exp(-x_k/2)``.

    Row ``k`` is multiplied by ``exp(x_k/2)`` and then divided by its largest
    term, all in logarithms, so the check stays finite when the individual
    terms exceed the floating-point range.  The result is the residual
    relative to ``max_j |D_kj exp((x_k - x_j)/2)|``.
    """
    x, m = d.nodeset.nodes, d.entries
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(m)) + (x[:, None] - x[None, :]) / 2
    top = logs.max(axis=1, keepdims=True)
    terms = np.sign(m) * np.exp(logs - top)
    rhs = (-0.5) ** d.order * np.exp(-top[:, 0])
    return np.abs(terms.sum(axis=1) - rhs)
