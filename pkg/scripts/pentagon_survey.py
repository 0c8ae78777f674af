"""Survey pentagon sorting of the incoming product over rank-2 data.

Reports, per level, how often the move rule reaches the same ordered product
as the degree-by-degree algorithm, and how often it gets stuck.
Usage: python3 scripts/pentagon_survey.py [--levels 3,5] [--max-moves 3000]
"""

from __future__ import annotations

import argparse
import sys

from csdilog.lattice import FixedData
from csdilog.scatter import PentagonInapplicable, incoming_product, order_product, pentagon_sort_trace


def rank2_data(bound: int = 4) -> list[FixedData]:
    out = []
    for d1 in range(1, 5):
        for d2 in range(1, 5):
            for b12 in range(1, bound + 1):
                if (b12 * d2) % d1 == 0 and b12 * d2 // d1 <= bound:
                    out.append(FixedData(((0, -b12), (b12 * d2 // d1, 0)), (d1, d2)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", default="3,5")
    ap.add_argument("--max-moves", type=int, default=3000)
    args = ap.parse_args()
    data = rank2_data()
    for level in (int(x) for x in args.levels.split(",")):
        agree = stuck = budget = wrong = 0
        for fd in data:
            C = incoming_product(fd)
            try:
                out, trace = pentagon_sort_trace(fd, level, C, max_moves=args.max_moves)
            except PentagonInapplicable as exc:
                if "within" in str(exc):
                    budget += 1
                else:
                    stuck += 1
                continue
            if out == order_product(fd, level, C):
                agree += 1
            else:
                wrong += 1
                print(f"  mismatch B={fd.B} delta={fd.delta}", file=sys.stderr)
        print(f"level {level}: {len(data)} data, agree {agree}, stuck {stuck}, over budget {budget}, mismatch {wrong}")


if __name__ == "__main__":
    main()
