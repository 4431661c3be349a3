"""Command-line entry point: ``addcomp <subcommand>``.

Exit codes: 0 success, 1 failed check or rejected input file, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Iterable, Iterator

from . import analytics
from .archive import load_pair, save_pair, dumps
from .construction import POLICIES, GrowthConfig, construct
from .errors import AddCompError
from .omega import OmegaSpec
from .verification import check_felso, sigma_delta_fuzz, verify_coverage, verify_invariants

DEFICIENCY_COLUMNS = ["x", "A_x", "B_x", "a_star", "r", "y", "z", "deficiency", "ratio_num", "ratio_den"]
DICHOTOMY_COLUMNS = ["x", "ratio_a_num", "ratio_a_den", "ratio_b_num", "ratio_b_den"]
GAP_COLUMNS = ["n"]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _omega(text: str) -> str:
    try:
        OmegaSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _coverage(text: str) -> tuple[str, int]:
    if text == "exhaustive":
        return ("exhaustive", 0)
    name, _, n = text.partition(":")
    if name == "sampled" and n.isdigit() and int(n) > 0:
        return ("sampled", int(n))
    raise argparse.ArgumentTypeError("coverage must be 'exhaustive' or 'sampled:N'")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="addcomp", description="Exact additive complements: build and check.")
    ap.add_argument("--limit", type=int, default=None,
                    help="enumeration limit for B materialization and r(x) scans (cost grows linearly)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a pair and save it")
    c.add_argument("--blocks", type=int, required=True, help="block count K >= 2")
    c.add_argument("--policy", choices=POLICIES, default="greedy-min")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--u-list", type=_int_list, default=None, help="u_2..u_K (or u_1..u_K) for explicit policy")
    c.add_argument("--sieve-threshold", type=int, default=10 ** 6)
    c.add_argument("--omega", type=_omega, default=None)
    c.add_argument("--enforce-omega", action="store_true")
    c.add_argument("--out", default=None, help="archive path (stdout if omitted)")

    a = sub.add_parser("analyze", help="deficiency decomposition at checkpoints")
    a.add_argument("--pair", required=True)
    a.add_argument("--checkpoints", type=_int_list, default=None)
    a.add_argument("--auto-checkpoints", action="store_true")

    v = sub.add_parser("verify", help="audit invariants and coverage")
    v.add_argument("--pair", required=True)
    v.add_argument("--coverage", type=_coverage, default=None)
    v.add_argument("--seed", type=int, default=0)

    f = sub.add_parser("felso", help="deficiency at x = u_{k+1} against a*(x) and omega")
    f.add_argument("--pair", required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--omega", type=_omega, default=None)

    z = sub.add_parser("fuzz", help="random check of the sum/difference excess inequality")
    z.add_argument("--trials", type=int, default=10_000)
    z.add_argument("--size", type=int, default=30)
    z.add_argument("--values", type=int, default=200)
    z.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("export", help="plot-ready tables")
    e.add_argument("--pair", required=True)
    e.add_argument("--what", choices=("deficiency", "dichotomy", "gaps"), required=True)
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.add_argument("--checkpoints", type=_int_list, default=None)
    e.add_argument("--out", default=None)
    return ap


def _checkpoints(args, pair) -> list[int]:
    if args.checkpoints and not getattr(args, "auto_checkpoints", False):
        return sorted(set(args.checkpoints))
    pts = analytics.auto_checkpoints(pair, limit=args.limit)
    return sorted(set(pts) | set(args.checkpoints or ()))


def deficiency_row(rep: analytics.DeficiencyReport) -> list[int]:
    q = rep.exactness_ratio
    return [rep.x, rep.count_a, rep.count_b, rep.a_star, rep.r, rep.y, rep.z, rep.deficiency,
            q.numerator, q.denominator]


def _write_table(out, fmt: str, columns: list[str], rows: Iterable[list]) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([str(v) for v in row])
        return
    out.write("[")
    sep = "\n"
    for row in rows:
        out.write(sep + json.dumps({c: str(v) for c, v in zip(columns, row)}, sort_keys=False))
        sep = ",\n"
    out.write("\n]\n")


def _rows(args, pair) -> tuple[list[str], Iterator[list]]:
    xs = _checkpoints(args, pair)
    if args.what == "deficiency":
        return DEFICIENCY_COLUMNS, (deficiency_row(r) for r in analytics.stream_deficiency(pair, xs, args.limit))
    if args.what == "dichotomy":
        def gen():
            for x in xs:
                if analytics.count_A(pair, x) and analytics.count_B(pair, x):
                    d = analytics.dichotomy_ratios(pair, [x])[0]
                    yield [x, d.ratio_a.numerator, d.ratio_a.denominator, d.ratio_b.numerator, d.ratio_b.denominator]
        return DICHOTOMY_COLUMNS, gen()
    unc = analytics.uncovered_up_to(pair, max(xs), args.limit)
    return GAP_COLUMNS, ([n] for n in unc.gaps)


def _run(args) -> int:
    out = sys.stdout
    if args.command == "construct":
        config = GrowthConfig(
            K=args.blocks, policy=args.policy, seed=args.seed, sieve_threshold=args.sieve_threshold,
            omega=args.omega, u_list=tuple(args.u_list) if args.u_list else None,
            enforce_omega=args.enforce_omega,
        )
        pair = construct(config)
        if args.out:
            save_pair(pair, args.out)
        else:
            out.write(dumps(pair))
        info = sys.stderr if not args.out else out
        print(f"primes: {list(pair.schedule)}", file=info)
        print(f"u: {[str(u) for u in pair.u]}", file=info)
        print(f"block sizes: {[len(b.elements) for b in pair.a_blocks]}", file=info)
        print(f"retries: {list(pair.retries)}", file=info)
        return 0

    if args.command == "fuzz":
        rep = sigma_delta_fuzz(args.trials, args.size, args.values, args.seed)
        print(rep.summary(), file=out)
        return 0 if rep.overall else 1

    pair = load_pair(args.pair)

    if args.command == "analyze":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(DEFICIENCY_COLUMNS + ["identity_ok"])
        ok = True
        for rep in analytics.stream_deficiency(pair, _checkpoints(args, pair), args.limit):
            ok &= rep.identity_ok
            w.writerow([str(v) for v in deficiency_row(rep)] + [str(rep.identity_ok).lower()])
        return 0 if ok else 1

    if args.command == "verify":
        rep = verify_invariants(pair)
        if args.coverage:
            mode, n = args.coverage
            lo, hi = analytics.guaranteed_range(pair)
            hi = min(hi, lo + analytics.resolve_limit(args.limit)) if mode == "exhaustive" else hi
            rep.checks.extend(verify_coverage(pair, lo + 1, hi, mode, count=n, seed=args.seed).checks)
        print(rep.summary(), file=out)
        return 0 if rep.overall else 1

    if args.command == "felso":
        rec = check_felso(pair, args.k, args.omega, args.limit)
        c = rec.implied_c
        print(f"k={rec.k} x={rec.x} deficiency={rec.deficiency} a_star={rec.a_star} "
              f"implied_c={c.numerator}/{c.denominator} (~{float(c):.6g})", file=out)
        if rec.omega_value is not None:
            print(f"omega({rec.x})={rec.omega_value} within_omega={str(rec.within_omega).lower()}", file=out)
        return 0

    if args.command == "export":
        columns, rows = _rows(args, pair)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write_table(fh, args.format, columns, rows)
        else:
            _write_table(out, args.format, columns, rows)
        return 0
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except AddCompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
