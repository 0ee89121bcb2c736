"""First-order diagonal error for the direct formula and the two sum variants.

The weighted negative sum overflows once the node span passes the exponent
range; those cells are left empty.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracle.reference import oracle_difmat  # noqa: E402

from lagdiff.collocation import build_nodeset  # noqa: E402
from lagdiff.difmat import (  # noqa: E402
    RangeLimitError,
    first_order,
    first_order_diagonal,
    negative_sum_diagonal,
    reciprocal_sum_diagonal,
)


def _err(v, ref):
    scale = np.where(ref != 0, np.abs(ref), 1.0)
    return float(np.max(np.abs(v - ref) / scale))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="augmented-gauss")
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 100, 200, 300, 355, 400, 500])
    args = parser.parse_args(argv)
    print("npts,direct,reciprocal_sum,weighted_negative_sum")
    for npts in args.sizes:
        ns = build_nodeset(args.family, npts)
        ref = np.diag(oracle_difmat(args.family, npts, 1).hi)
        try:
            weighted = f"{_err(negative_sum_diagonal(first_order(ns)), ref):.3e}"
        except RangeLimitError:
            weighted = ""
        direct = _err(first_order_diagonal(ns), ref)
        recip = _err(reciprocal_sum_diagonal(ns), ref)
        print(f"{npts},{direct:.3e},{recip:.3e},{weighted}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
