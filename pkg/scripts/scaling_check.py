"""Fit the decay exponent of truncated identities near y = 0.

For each level the truncated identity residual should scale like t^(level+1)
up to a log factor.  A slope of inf means every sampled residual was exactly
zero.  Usage: python3 scripts/scaling_check.py [--points 20]
"""

from __future__ import annotations

import argparse

import numpy as np

from csdilog import A1_1, A2_2, assemble_di, build_csd, verify_di_numeric
from csdilog.identity import DEFAULT_SCALE_GRID


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--levels", default="1,2,3,4")
    args = ap.parse_args()
    pts = np.random.default_rng(args.seed).uniform(0, 1, size=(args.points, 2))
    print(f"{'data':8} {'level':>5} {'mode':>6} {'slope':>7} {'target':>6}")
    for name, fd in (("A1(1)", A1_1), ("A2(2)", A2_2)):
        for level in (int(x) for x in args.levels.split(",")):
            terms = assemble_di(build_csd(fd, level))
            for mode in ("exact", "series"):
                rep = verify_di_numeric(terms, pts, DEFAULT_SCALE_GRID, fd=fd, mode=mode)
                print(f"{name:8} {level:5d} {mode:>6} {rep.scaling_slope:7.3f} {level + 1:6d}")


if __name__ == "__main__":
    main()
