"""Generalized Laguerre polynomials and Laguerre functions.

``L_n^(a)(x)`` is evaluated by its three-term recurrence and the Laguerre
function ``Lhat_n^(a)(x) = exp(-x/2) L_n^(a)(x)`` by the same recurrence
with weighted seeds.  A difference form of the recurrence, carrying
``dL_k = L_k - L_{k-1}``, avoids the cancellation in ``2k + a + 1 - x``
when ``x`` is small compared to ``2n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

# exp(-x/2) is refused once x/2 passes this fraction of log(realmax)
UNDERFLOW_GUARD = 0.95 * math.log(np.finfo(float).max)


class LaguerreOverflowError(OverflowError):
    """A recurrence produced a non-finite intermediate."""


class UseTaylorPath(ValueError):
    """Direct weighted evaluation refused: ``exp(-x/2)`` would underflow.

    Evaluate through the root sweep's local expansions instead.
    """


@dataclass(frozen=True)
class LaguerreParam:
    """The pair ``(alpha, degree)`` selecting ``L_degree^(alpha)``."""

    alpha: float
    degree: int

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "alpha", float(self.alpha))


class EvalPair(NamedTuple):
    value: float
    derivative: float


def binom_at_zero(n: int, alpha: float) -> float:
    """``L_n^(alpha)(0) = binom(n + alpha, n)``."""
    if n < 0:
        return 0.0
    if float(alpha).is_integer():
        return float(math.comb(n + int(alpha), n))
    return math.exp(math.lgamma(n + alpha + 1) - math.lgamma(n + 1) - math.lgamma(alpha + 1))


def eval_poly(param: LaguerreParam, x: float) -> float:
    """``L_n^(alpha)(x)`` by forward recurrence.

    Raises :class:`LaguerreOverflowError` instead of returning an infinity.
    """
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    n, a = param.degree, param.alpha
    prev, cur = 1.0, 1.0 + a - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + a + 1 - x) * cur - (k + a) * prev) / (k + 1)
        if not math.isfinite(cur):
            raise LaguerreOverflowError(f"L_{k + 1}^({a})({x}) overflowed")
    return cur


def _check_weighted(x: float) -> float:
    if not x >= 0:
        raise ValueError(f"Laguerre functions are evaluated on x >= 0, got {x}")
    if x / 2 > UNDERFLOW_GUARD:
        raise UseTaylorPath(f"exp(-{x}/2) underflows; use the root sweep expansions")
    return math.exp(-x / 2)


def _derivative(n: int, a: float, x: float, w: float, val: float, prev: float) -> float:
    # x L_n' = n L_n - (n + a) L_{n-1}; val, prev already carry the weight w
    if x == 0.0:
        dpoly = -binom_at_zero(n - 1, a + 1)  # -binom(n + a, n - 1)
        return w * dpoly - 0.5 * val
    return (n * val - (n + a) * prev) / x - 0.5 * val


def eval_function(param: LaguerreParam, x: float) -> EvalPair:
    """Value and derivative of ``Lhat_n^(alpha)`` via the standard recurrence."""
    w = _check_weighted(x)
    n, a = param.degree, param.alpha
    if n == 0:
        return EvalPair(w, -0.5 * w)
    prev, cur = w, (1.0 + a - x) * w
    for k in range(1, n):
        prev, cur = cur, ((2 * k + a + 1 - x) * cur - (k + a) * prev) / (k + 1)
    return EvalPair(cur, _derivative(n, a, x, w, cur, prev))


def _difference_recurrence(n: int, a: float, x: float, w: float) -> tuple[float, float]:
    # (w L_n, w dL_n) with dL_n = L_n - L_{n-1}; n >= 1
    cur, delta = (1.0 + a - x) * w, (a - x) * w
    for k in range(1, n):
        delta = ((k + a) * delta - x * cur) / (k + 1)
        cur = cur + delta
    return cur, delta


def eval_function_modified(param: LaguerreParam, x: float) -> EvalPair:
    """Value and derivative of ``Lhat_n^(alpha)`` via the difference recurrence.

    ``dL_{k+1} = ((k + alpha) dL_k - x L_k) / (k + 1)`` and
    ``L_{k+1} = L_k + dL_{k+1}``, seeded with the weight ``exp(-x/2)``.  The
    polynomial derivative uses ``L_n^(alpha)' = -L_{n-1}^(alpha+1)`` from the
    same recurrence, so it keeps its accuracy near ``x = 0`` for every alpha.
    """
    w = _check_weighted(x)
    n, a = param.degree, param.alpha
    if n == 0:
        return EvalPair(w, -0.5 * w)
    val, _ = _difference_recurrence(n, a, x, w)
    dpoly = _difference_recurrence(n - 1, a + 1, x, w)[0] if n > 1 else w
    return EvalPair(val, -dpoly - 0.5 * val)


def eval_poly_array(n: int, alpha: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unguarded vectorized recurrence returning ``(L_n(x), L_{n-1}(x))``.

    Intermediates may overflow; the caller inspects the result.  Used by the
    classic (unscaled) constructions that are meant to exhibit breakdown.
    """
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    cur = 1.0 + alpha - x
    if n == 0:
        return prev, np.zeros_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            prev, cur = cur, ((2 * k + alpha + 1 - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur, prev
