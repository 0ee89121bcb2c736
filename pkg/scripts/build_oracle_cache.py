"""Write extended-precision reference matrices for the stability study.

Each size gets a first-order matrix ``d1-<family>-<npts>.csv`` and a node
table ``nodes-<family>-<npts>.csv``, both with 34 significant digits.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracle.reference import oracle_difmat, oracle_nodes  # noqa: E402

from lagdiff.io import header_line, write_csv_lines  # noqa: E402
from lagdiff.stability import cache_dir, cache_file, nodes_file  # noqa: E402

DEFAULT_SIZES = (25, 50, 100, 200, 300, 400, 500)
DIGITS = 34


def _strings(dw) -> list[str]:
    return [f"{d:.{DIGITS - 1}E}" for d in dw.to_decimal(DIGITS)]


def write_size(directory: Path, family: str, npts: int) -> None:
    on = oracle_nodes(family, npts)
    meta = {"family": family, "alpha": on.alpha, "npts": npts}
    with open(nodes_file(directory, family, npts), "w") as fh:
        rows = ([str(i), x, c] for i, (x, c) in enumerate(zip(_strings(on.nodes), _strings(on.coeffs))))
        write_csv_lines(fh, header_line("laguerre-nodes", meta), rows)
    d1 = oracle_difmat(family, npts, 1)
    flat = _strings(d1.reshape(-1))
    with open(cache_file(directory, family, npts), "w") as fh:
        rows = (flat[i * npts:(i + 1) * npts] for i in range(npts))
        write_csv_lines(fh, header_line("laguerre-difmat", {**meta, "order": 1}), rows)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None, help="cache directory (default: LAGUERRE_ORACLE_CACHE or ~/.cache)")
    parser.add_argument("--family", default="augmented-gauss")
    parser.add_argument("--sizes", type=int, nargs="+", default=list(DEFAULT_SIZES))
    args = parser.parse_args(argv)
    directory = cache_dir(args.out)
    directory.mkdir(parents=True, exist_ok=True)
    for npts in args.sizes:
        t0 = time.perf_counter()
        write_size(directory, args.family, npts)
        print(f"{args.family} npts={npts}: {time.perf_counter() - t0:.1f}s", flush=True)
    print(f"oracle cache written to {directory}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
