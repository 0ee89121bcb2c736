"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 classic construction broke down,
4 solver failure, 5 oracle cache missing.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .collocation import FAMILY_TAGS, build_nodeset, scaled_coeffs
from .difmat import BreakdownReport, RangeLimitError, classic_construction, differentiation_matrix
from .glr import RootSweepError
from .io import OutputSpec, Table, write_matrix, write_nodes, write_table
from .linalg import EigenSolverError, SingularMatrixError
from .solvers import BvpProblem, SchrodingerProblem, parse_range, schrodinger_eigs, solve_bvp
from .stability import MissingCacheError, stability_study

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BREAKDOWN = 3
EXIT_SOLVER = 4
EXIT_NO_CACHE = 5


class UsageError(Exception):
    pass


@contextmanager
def _output(spec: OutputSpec):
    if spec.path is None or spec.path == "-":
        yield sys.stdout
    else:
        with open(spec.path, "w") as fh:
            yield fh


def _spec(args) -> OutputSpec:
    try:
        return OutputSpec(args.format, args.out, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _nodeset(args):
    try:
        return build_nodeset(args.family, args.npts, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _meta(ns, **extra) -> dict:
    return {"family": ns.family.tag, "alpha": ns.alpha, "npts": ns.npts, **extra}


def cmd_nodes(args) -> int:
    spec = _spec(args)
    ns = _nodeset(args)
    with _output(spec) as out:
        write_nodes(out, ns.nodes, scaled_coeffs(ns).values, _meta(ns), spec)
    return EXIT_OK


def cmd_difmat(args) -> int:
    spec = _spec(args)
    if args.order < 1:
        raise UsageError("--order must be at least 1")
    if args.mode == "classic" and args.order != 1:
        raise UsageError("classic mode builds first-order matrices only")
    ns = _nodeset(args)
    if args.mode == "classic":
        res = classic_construction(ns, args.weights)
        if isinstance(res, BreakdownReport):
            with _output(spec) as out:
                json.dump({"breakdown": True, **res.to_dict()}, out)
                out.write("\n")
            print(
                f"classic construction broke down at npts={ns.npts}: non-finite {res.intermediate}"
                f"{list(res.index)}",
                file=sys.stderr,
            )
            return EXIT_BREAKDOWN
        entries = res.entries
    else:
        try:
            entries = differentiation_matrix(ns, args.order).entries
        except RangeLimitError as exc:
            raise UsageError(f"{exc} (max safe degree {exc.max_safe_n})") from None
    with _output(spec) as out:
        write_matrix(out, entries, _meta(ns, order=args.order), spec)
    return EXIT_OK


def _sizes(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_bvp(args) -> int:
    spec = _spec(args)
    sizes = _sizes(args.npts)
    try:
        problem = BvpProblem(gamma=args.gamma, beta=args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = {"beta": args.beta, "gamma": args.gamma}
    if args.values:
        sol = solve_bvp(problem, sizes[-1])
        table = Table("laguerre-bvp-solution", {**meta, "npts": sizes[-1]}, ["x", "u", "exact"])
        exact = problem.exact(sol.nodes)
        table.rows = [[x, u, e] for x, u, e in zip(sol.nodes, sol.values, exact)]
    else:
        table = Table("laguerre-bvp", meta, ["npts", "max_abs_error"])
        table.rows = [[n, solve_bvp(problem, n).error] for n in sizes]
    with _output(spec) as out:
        write_table(out, table, spec)
    return EXIT_OK


def cmd_schrodinger(args) -> int:
    spec = _spec(args)
    sizes = _sizes(args.npts)
    try:
        problem = SchrodingerProblem(R=args.R, a=args.a, beta=args.beta, count=args.count)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = {"beta": args.beta, "R": args.R, "a": args.a}
    table = Table("laguerre-schrodinger", meta, ["npts", "index", "eigenvalue", "residual"])
    for n in sizes:
        res = schrodinger_eigs(problem, n)
        for i, (lam, r) in enumerate(zip(res.values, res.residuals), start=1):
            table.rows.append([n, i, lam, r])
    with _output(spec) as out:
        write_table(out, table, spec)
    return EXIT_OK


def cmd_stability_study(args) -> int:
    spec = _spec(args)
    if args.max_n < 2 or args.step < 1:
        raise UsageError("--max-n must be at least 2 and --step at least 1")
    table = stability_study(args.max_n, args.step, args.family, args.cache)
    with _output(spec) as out:
        write_table(out, table, spec)
    return EXIT_OK


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: standard output)")
    p.add_argument("--precision", type=int, default=17, help="significant digits, 6 to 17")


def _add_family(p: argparse.ArgumentParser, required_npts: bool = True) -> None:
    p.add_argument("--family", choices=FAMILY_TAGS, default="augmented-gauss")
    p.add_argument("--npts", type=int, required=required_npts)
    p.add_argument("--alpha", type=float, default=None, help="only for standard-gauss (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lagdiff", description="Laguerre differentiation matrices")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nodes", help="collocation nodes and scaled coefficients")
    _add_family(p)
    _add_output(p)
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("difmat", help="differentiation matrix")
    _add_family(p)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--mode", choices=("stable", "classic"), default="stable")
    p.add_argument(
        "--weights", choices=("product", "derivative"), default="product",
        help="classic mode: how the unscaled coefficients are formed",
    )
    _add_output(p)
    p.set_defaults(func=cmd_difmat)

    p = sub.add_parser("bvp", help="-u'' + gamma u = f on the half line, u(0) = 0")
    p.add_argument("--npts", required=True, help="node count or start:stop:step (inclusive)")
    p.add_argument("--beta", type=float, default=4.03)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--values", action="store_true", help="emit the solution at the last npts")
    _add_output(p)
    p.set_defaults(func=cmd_bvp)

    p = sub.add_parser("schrodinger", help="Woods-Saxon eigenvalues")
    p.add_argument("--npts", required=True, help="node count or start:stop:step (inclusive)")
    p.add_argument("--beta", type=float, default=10.0)
    p.add_argument("--R", type=float, default=7.0)
    p.add_argument("--a", type=float, default=0.6)
    p.add_argument("--count", type=int, default=6)
    _add_output(p)
    p.set_defaults(func=cmd_schrodinger)

    p = sub.add_parser("stability-study", help="classic vs stable construction over npts")
    p.add_argument("--max-n", type=int, default=500)
    p.add_argument("--step", type=int, default=10)
    p.add_argument("--family", choices=FAMILY_TAGS, default="augmented-gauss")
    p.add_argument("--cache", default=None, help="oracle cache directory (overrides LAGUERRE_ORACLE_CACHE)")
    _add_output(p)
    p.set_defaults(func=cmd_stability_study)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lagdiff {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingCacheError as exc:
        print(f"lagdiff {args.command}: {exc}", file=sys.stderr)
        return EXIT_NO_CACHE
    except (SingularMatrixError, EigenSolverError, RootSweepError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"lagdiff {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
