"""Convergence tables for the two half-line model problems.

BVP: max-norm error against the manufactured solution.  Schrodinger:
relative change of selected eigenvalues against the largest npts.
"""

from __future__ import annotations

import argparse
import sys

from lagdiff.solvers import BvpProblem, SchrodingerProblem, schrodinger_eigs, solve_bvp


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--problem", choices=("bvp", "schrodinger"), default="bvp")
    parser.add_argument("--start", type=int, default=40)
    parser.add_argument("--stop", type=int, default=230)
    parser.add_argument("--step", type=int, default=10)
    parser.add_argument("--indices", type=int, nargs="+", default=[1, 5, 10, 25])
    args = parser.parse_args(argv)
    sizes = range(args.start, args.stop + 1, args.step)
    if args.problem == "bvp":
        print("npts,max_abs_error")
        for n in sizes:
            print(f"{n},{solve_bvp(BvpProblem(), n).error:.3e}")
        return 0
    p = SchrodingerProblem(count=max(args.indices))
    ref = schrodinger_eigs(p, args.stop).values
    print("npts," + ",".join(f"lambda{k}_rel_change" for k in args.indices))
    for n in sizes:
        if n - 1 < p.count:
            continue
        vals = schrodinger_eigs(p, n).values
        cells = [f"{abs(vals[k - 1] - ref[k - 1]) / abs(ref[k - 1]):.3e}" for k in args.indices]
        print(f"{n}," + ",".join(cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
