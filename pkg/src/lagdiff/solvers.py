"""Model problems on the half line solved by Laguerre collocation.

Both use augmented Laguerre-Gauss nodes mapped by ``x = xt / beta`` so the
first node sits on the boundary ``x = 0``.  Decay at infinity is built into
the weighted basis and needs no extra condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .collocation import build_nodeset
from .difmat import scaled_operators
from .linalg import EigResult, eig_generalized_diag, lu_solve


def manufactured_forcing(x):
    """Forcing for ``u = sin(2x) exp(-x/4)`` with ``gamma = 2``."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x / 4) * (95.0 / 16.0 * np.sin(2 * x) + np.cos(2 * x))


def manufactured_solution(x):
    x = np.asarray(x, dtype=float)
    return np.sin(2 * x) * np.exp(-x / 4)


@dataclass(frozen=True)
class BvpProblem:
    """``-u'' + gamma u = f`` on ``x > 0`` with ``u(0) = 0``."""

    gamma: float = 2.0
    beta: float = 4.03
    forcing: Callable = manufactured_forcing
    exact: Callable | None = manufactured_solution

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass(frozen=True)
class BvpSolution:
    npts: int
    nodes: np.ndarray
    values: np.ndarray
    error: float | None  # max-norm error at the nodes when the exact solution is known


def solve_bvp(problem: BvpProblem, npts: int) -> BvpSolution:
    if npts < 3:
        raise ValueError(f"npts must be at least 3, got {npts}")
    ops = scaled_operators(build_nodeset("augmented-gauss", npts), orders=(2,), beta=problem.beta)
    x = ops.nodes
    a = -ops.matrices[2] + problem.gamma * np.eye(npts)
    rhs = np.asarray(problem.forcing(x), dtype=float)
    # the Dirichlet row u_0 = 0 replaces the first equation; eliminating it
    # leaves the trailing block and keeps the boundary value exactly zero
    u = np.zeros(npts)
    u[1:] = lu_solve(a[1:, 1:], rhs[1:])
    err = None
    if problem.exact is not None:
        err = float(np.max(np.abs(u - problem.exact(x))))
    return BvpSolution(npts, x, u, err)


@dataclass(frozen=True)
class SchrodingerProblem:
    """``-y'' + y = lam q(x) y`` with the Woods-Saxon profile ``q``.

    The radius and surface thickness are illustrative defaults.
    """

    R: float = 7.0
    a: float = 0.6
    beta: float = 10.0
    count: int = 6

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"surface thickness a must be positive, got {self.a}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.count < 1:
            raise ValueError("count must be at least 1")

    def potential(self, x):
        return expit((self.R - np.asarray(x, dtype=float)) / self.a)


def schrodinger_eigs(problem: SchrodingerProblem, npts: int) -> EigResult:
    """Smallest-magnitude eigenvalues on the system without the boundary node."""
    if npts < 10:
        raise ValueError(f"npts must be at least 10, got {npts}")
    if problem.count > npts - 1:
        raise ValueError(f"cannot return {problem.count} eigenvalues from {npts - 1} unknowns")
    ops = scaled_operators(build_nodeset("augmented-gauss", npts), orders=(2,), beta=problem.beta)
    a = -ops.matrices[2][1:, 1:] + np.eye(npts - 1)
    q = problem.potential(ops.nodes[1:])
    if not np.all(q > 0):
        # far nodes give q below the smallest normal number; the weighted
        # problem is then undefined in binary64
        raise ArithmeticError(
            f"Woods-Saxon weight underflows at x={ops.nodes[1:][q <= 0][0]:.6g}; reduce npts or raise beta"
        )
    return eig_generalized_diag(a, q, problem.count)


def parse_range(spec: str) -> list[int]:
    """``"40:230:10"`` -> 40, 50, ..., 230 (inclusive); a single integer is allowed."""
    try:
        nums = [int(p) for p in spec.split(":")]
    except ValueError:
        raise ValueError(f"invalid range {spec!r}; expected start[:stop[:step]]") from None
    if len(nums) == 1:
        return nums
    if len(nums) == 2:
        nums.append(1)
    if len(nums) != 3 or nums[2] <= 0 or nums[1] < nums[0]:
        raise ValueError(f"invalid range {spec!r}; expected start:stop:step with step > 0")
    start, stop, step = nums
    return list(range(start, stop + 1, step))

