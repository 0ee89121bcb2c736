"""Relative root error of the sweep and of Golub-Welsch against the oracle.

Prints CSV: n, alpha, sweep error, sweep error without the final compensated
step, and the error of the Jacobi-matrix eigenvalue method.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracle.reference import oracle_roots, rel_error  # noqa: E402

from lagdiff.glr import sweep_roots  # noqa: E402
from lagdiff.laguerre import LaguerreParam  # noqa: E402


def golub_welsch(n: int, alpha: float) -> np.ndarray:
    k = np.arange(1, n)
    return eigh_tridiagonal(2 * np.arange(n) + alpha + 1, np.sqrt(k * (k + alpha)), eigvals_only=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 25, 50, 100, 200, 300, 400, 500])
    parser.add_argument("--alpha", type=float, nargs="+", default=[0.0, 1.0])
    args = parser.parse_args(argv)
    print("n,alpha,sweep,sweep_unpolished,golub_welsch")
    for a in args.alpha:
        for n in args.sizes:
            ref = oracle_roots(n, a).roots
            param = LaguerreParam(a, n)
            polished = np.max(rel_error(sweep_roots(param).roots, ref))
            raw = np.max(rel_error(sweep_roots(param, polish=False).roots, ref))
            gw = np.max(rel_error(golub_welsch(n, a), ref))
            print(f"{n},{a:g},{polished:.3e},{raw:.3e},{gw:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
