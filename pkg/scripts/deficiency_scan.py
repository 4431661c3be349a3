#!/usr/bin/env python3
"""Scan A(x)B(x)/x and the decomposition terms across a geometric grid.

Writes CSV to stdout; pipe into your plotting tool of choice.
"""

import argparse
import csv
import math
import sys

from addcomp import analytics as an
from addcomp.construction import GrowthConfig, construct


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--blocks", type=int, default=6)
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--limit", type=int, default=None)
    args = ap.parse_args()

    pair = construct(GrowthConfig(args.blocks))
    top = min(an.resolve_limit(args.limit), an.guaranteed_range(pair)[1])
    xs = sorted({max(2, round(top ** (i / args.points))) for i in range(1, args.points + 1)})
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "A_x", "B_x", "y", "z", "r", "deficiency", "ratio", "log_A_over_log_x", "mean_a_ratio"])
    for rep in an.stream_deficiency(pair, xs, args.limit):
        ea, _ = an.growth_exponents(pair, rep.x)
        w.writerow([rep.x, rep.count_a, rep.count_b, rep.y, rep.z, rep.r, rep.deficiency,
                    f"{float(rep.exactness_ratio):.6f}", f"{ea:.4f}", f"{float(an.mean_a_ratio(pair, rep.x)):.5f}"])


if __name__ == "__main__":
    main()
