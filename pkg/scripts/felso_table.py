#!/usr/bin/env python3
"""Deficiency at x = u_{k+1} relative to a*(x), for greedy-min pairs.

Usage: python scripts/felso_table.py [--max-blocks 6] [--omega root:2]
"""

import argparse

from addcomp.construction import GrowthConfig, construct
from addcomp.verification import check_felso


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-blocks", type=int, default=6)
    ap.add_argument("--omega", default="root:2")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'K':>2} {'k':>2} {'x=u_k+1':>9} {'A(x)B(x)-x':>11} {'a*(x)':>7} {'c':>8}  omega(x)")
    for K in range(3, args.max_blocks + 1):
        pair = construct(GrowthConfig(K, seed=args.seed))
        for k in range(2, K):
            r = check_felso(pair, k, args.omega)
            print(f"{K:>2} {k:>2} {r.x:>9} {r.deficiency:>11} {r.a_star:>7} {float(r.implied_c):>8.3f}  {r.omega_value}")


if __name__ == "__main__":
    main()
