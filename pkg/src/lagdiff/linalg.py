"""Dense linear solves and the diagonal-weighted eigenproblem.

Thin checked wrappers over LAPACK (through scipy): LU with partial pivoting,
and the QZ algorithm on the pencil ``(A, diag(d))``.  QZ is used rather than
QR on ``diag(d)^-1 A`` because the weights ``d`` can span many orders of
magnitude, and dividing by them first destroys the small eigenvalues.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

EPS = np.finfo(float).eps


class SingularMatrixError(np.linalg.LinAlgError):
    def __init__(self, pivot: int):
        super().__init__(f"matrix is singular: zero pivot at index {pivot}")
        self.pivot = pivot


class EigenSolverError(np.linalg.LinAlgError):
    pass


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def lu_solve(a, b) -> np.ndarray:
    """Solve ``a x = b`` by LU with partial pivoting."""
    a = _square(a)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {a.shape[0]}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite entries in the linear system")
    with warnings.catch_warnings():
        # exact singularity is reported below with the pivot index
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    zero = np.flatnonzero(np.diag(lu) == 0)
    if zero.size:
        raise SingularMatrixError(int(zero[0]))
    return sla.lu_solve((lu, piv), b, check_finite=False)


def backward_error(a, x, b) -> float:
    """``||a x - b||_inf / (||a||_inf ||x||_inf + ||b||_inf)``."""
    a, x, b = np.asarray(a), np.asarray(x), np.asarray(b)
    r = np.linalg.norm(a @ x - b, np.inf)
    scale = np.linalg.norm(a, np.inf) * np.linalg.norm(x, np.inf) + np.linalg.norm(b, np.inf)
    return float(r / scale) if scale else float(r)


@dataclass(frozen=True)
class EigResult:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray  # ||A y - lam diag(d) y|| / (||A|| ||y||)


def eig_generalized_diag(
    a, d, count: int | None = None, *, residual_tol: float = 1e-10, imag_tol: float = 1e-8
) -> EigResult:
    """Smallest-magnitude eigenpairs of ``a y = lam diag(d) y`` with ``d > 0``.

    Eigenvalues are returned in order of increasing magnitude.  Each pair is
    checked against ``residual_tol`` and must be real to ``imag_tol`` relative.
    """
    a = _square(a)
    d = np.asarray(d, dtype=float)
    if d.shape != (a.shape[0],):
        raise ValueError("d must be a vector matching the matrix size")
    if not np.all(d > 0):
        raise ValueError("d must be strictly positive")
    count = a.shape[0] if count is None else int(count)
    if not 1 <= count <= a.shape[0]:
        raise ValueError(f"count must lie in [1, {a.shape[0]}], got {count}")
    try:
        lam, vec = sla.eig(a, np.diag(d), check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"QZ iteration failed to converge: {exc}") from exc
    order = np.argsort(np.abs(lam), kind="stable")[:count]
    lam, vec = lam[order], vec[:, order]
    big = np.abs(lam.imag) > imag_tol * np.abs(lam)
    if big.any():
        k = int(np.argmax(big))
        raise EigenSolverError(f"eigenvalue {k} is not real: {lam[k]}")
    lam, vec = lam.real, vec.real
    norm_a = np.linalg.norm(a, 2)
    res = np.linalg.norm(a @ vec - (d[:, None] * vec) * lam, axis=0)
    res = res / (norm_a * np.linalg.norm(vec, axis=0))
    if np.any(res > residual_tol):
        k = int(np.argmax(res))
        raise EigenSolverError(f"eigenpair {k} has residual {res[k]:.3e} > {residual_tol:.1e}")
    return EigResult(lam, vec, res)
