"""Coverage witnesses, structural audits and the excess-inequality fuzzer."""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import analytics
from .construction import ComplementPair, block_sizes, is_prime, uniform_int
from .core_sets import check_excess_inequality, doubled_remark_holds, delta_profile, moment_identities
from .errors import CheckpointViolation, OutOfGuaranteedRange, WitnessInvalid
from .omega import OmegaSpec


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), "" if passed else detail))

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "")
                 for c in self.checks]
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Witness:
    n: int
    k: int
    a: int
    b: int


@lru_cache(maxsize=32)
def _residue_tables(pair: ComplementPair) -> tuple[dict[int, int], ...]:
    """Per level k, residue mod p_k -> the element of A_1..A_k in that class."""
    return tuple({a % pair.p(k): a for a in pair.level(k)} for k in range(1, pair.K + 1))


def _witness_ranges(pair: ComplementPair) -> list[tuple[int, int]]:
    """Block k covers ((k+2) u_k, (k+3) u_{k+1}]."""
    return [((k + 2) * pair.u_(k), (k + 3) * pair.u_(k + 1)) for k in range(1, pair.K)]


def witness(pair: ComplementPair, n: int) -> Witness:
    lo, hi = analytics.guaranteed_range(pair)
    if not lo < n <= hi:
        raise OutOfGuaranteedRange(f"n={n} outside ({lo}, {hi}]")
    ranges = _witness_ranges(pair)
    i = bisect_left([b for _, b in ranges], n)
    k = i + 1
    lo_k, hi_k = ranges[i]
    if not lo_k < n <= hi_k:
        raise WitnessInvalid(n, f"no block range contains n (nearest {ranges[i]})")
    pk = pair.p(k)
    a = _residue_tables(pair)[k - 1].get(n % pk)
    if a is None:
        raise WitnessInvalid(n, f"residue {n % pk} mod {pk} missing from level {k}")
    b = n - a
    # re-check through predicates that do not use the residue table
    blk = pair.block_of(a)
    if blk is None or blk > k:
        raise WitnessInvalid(n, f"a={a} not in A_1..A_{k}")
    if not (k * pair.u_(k) < b < (k + 3) * pair.u_(k + 1) and b % pk == 0):
        raise WitnessInvalid(n, f"b={b} not in B_{k}")
    if not analytics.is_in_B(pair, b):
        raise WitnessInvalid(n, f"b={b} rejected by is_in_B")
    return Witness(n, k, a, b)


def verify_coverage(
    pair: ComplementPair,
    lo: int,
    hi: int,
    mode: str = "exhaustive",
    count: int = 1000,
    seed: int = 0,
) -> AuditReport:
    """Witness every n in [lo, hi] (exhaustive) or ``count`` seeded draws (sampled)."""
    g_lo, g_hi = analytics.guaranteed_range(pair)
    if lo <= g_lo or hi > g_hi or lo > hi:
        raise ValueError(f"coverage range must satisfy {g_lo} < lo <= hi <= {g_hi}")
    rep = AuditReport()
    if mode == "exhaustive":
        ns = range(lo, hi + 1)
    elif mode == "sampled":
        rng = random.Random(f"coverage:{seed}")
        ns = [uniform_int(rng, lo, hi) for _ in range(count)]
    else:
        raise ValueError(f"unknown coverage mode {mode!r}")
    checked = 0
    for n in ns:
        witness(pair, n)
        checked += 1
    rep.add(f"coverage[{mode}] {checked} values in [{lo}, {hi}]", True)
    return rep


def verify_invariants(pair: ComplementPair) -> AuditReport:
    rep = AuditReport()
    S, K = pair.schedule, pair.K
    rep.add("schedule: primes", all(is_prime(p) for p in S), f"{S}")
    rep.add("schedule: increasing", all(a < b for a, b in zip(S, S[1:])), f"{S}")
    rep.add(
        "schedule: k^3 < p_k < (k+1)^3 (k >= 2), 1 < p_1 < 8",
        1 < S[0] < 8 and all(k ** 3 < S[k - 1] < (k + 1) ** 3 for k in range(2, K + 1)),
        f"{S}",
    )
    rep.add("lengths", len(pair.u) == K == len(pair.a_blocks) and len(pair.b_descriptors) == K - 1,
            f"|u|={len(pair.u)} |A|={len(pair.a_blocks)} |B|={len(pair.b_descriptors)}")
    if not rep.overall:
        return rep

    sizes = [len(b.elements) for b in pair.a_blocks]
    rep.add("block sizes", sizes == block_sizes(S), f"{sizes} vs {block_sizes(S)}")
    rep.add("blocks sorted/distinct",
            all(all(x < y for x, y in zip(b.elements, b.elements[1:])) for b in pair.a_blocks))
    rep.add("block metadata", all(b.k == i + 1 and b.u_k == pair.u[i] for i, b in enumerate(pair.a_blocks)))
    rep.add("A_1 = {1..p_1}, u_1 multiple of p_1",
            pair.a_blocks[0].elements == tuple(range(1, S[0] + 1)) and pair.u[0] % S[0] == 0 and pair.u[0] > 0)
    bad = [b.k for b in pair.a_blocks[1:] if not all(b.u_k < a < 2 * b.u_k for a in b.elements)]
    rep.add("A_k inside (u_k, 2u_k)", not bad, f"blocks {bad}")
    rep.add("blocks increasing",
            all(pair.a_blocks[i].elements[-1] < pair.a_blocks[i + 1].elements[0] for i in range(K - 1)
                if pair.a_blocks[i].elements and pair.a_blocks[i + 1].elements))
    bad = [k for k in range(2, K + 1) if pair.u_(k) % pair.p(k)]
    rep.add("p_k | u_k", not bad, f"k={bad}")
    bad = [k for k in range(2, K + 1) if not pair.u_(k) > k * pair.u_(k - 1)]
    rep.add("u_k > k u_{k-1}", not bad, f"k={bad}")

    residue_bad, incong_bad = [], []
    for k in range(1, K + 1):
        lvl = pair.level(k)
        if sorted(a % pair.p(k) for a in lvl) != list(range(pair.p(k))):
            residue_bad.append(k)
        for j in range(k, K + 1):
            if len({a % pair.p(j) for a in lvl}) != len(lvl):
                incong_bad.append((k, j))
    rep.add("complete residue system mod p_k", not residue_bad, f"levels {residue_bad}")
    rep.add("incongruent mod p_j for k <= j <= K", not incong_bad, f"(k, j) = {incong_bad[:10]}")

    ds = pair.b_descriptors
    bad = [d.k for i, d in enumerate(ds)
           if not (d.k == i + 1 and d.modulus == pair.p(d.k) and d.lower == d.k * pair.u_(d.k)
                   and d.upper == (d.k + 3) * pair.u_(d.k + 1) and d.lower < d.upper)]
    rep.add("B descriptors well-formed", not bad, f"k={bad}")
    bad = [(d.k, e.k) for i, d in enumerate(ds) for e in ds[i + 2:] if e.lower + 1 < d.upper]
    rep.add("non-adjacent B descriptors disjoint", not bad, f"{bad[:10]}")
    return rep


@dataclass(frozen=True)
class FelsoRecord:
    k: int
    x: int
    deficiency: int
    a_star: int
    implied_c: Fraction
    omega_value: int | float | None
    within_omega: bool | None


def check_felso(pair: ComplementPair, k: int, omega: str | OmegaSpec | None = None,
                limit: int | None = None) -> FelsoRecord:
    """Deficiency at x = u_{k+1} measured against a*(x) and optionally omega(x)."""
    if not 2 <= k <= pair.K - 1:
        raise ValueError(f"k must satisfy 2 <= k <= {pair.K - 1}")
    x = pair.u_(k + 1)
    rep = analytics.deficiency_decomposition(pair, x, limit)
    if rep.count_a != pair.p(k):
        raise CheckpointViolation(f"A({x}) = {rep.count_a}, expected p_{k} = {pair.p(k)}")
    if not pair.u_(k) < rep.a_star < 2 * pair.u_(k):
        raise CheckpointViolation(f"a*({x}) = {rep.a_star} not in ({pair.u_(k)}, {2 * pair.u_(k)})")
    if not rep.identity_ok:
        raise CheckpointViolation(f"decomposition identity fails at x={x}")
    if isinstance(omega, str):
        omega = OmegaSpec.parse(omega)
    w = omega(x) if omega else None
    return FelsoRecord(
        k=k, x=x, deficiency=rep.deficiency, a_star=rep.a_star,
        implied_c=Fraction(rep.deficiency, rep.a_star),
        omega_value=w, within_omega=None if w is None else rep.deficiency < w,
    )


def progression_fixtures(m_max: int = 10) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Arithmetic progressions with heavy sum/difference collisions."""
    out = []
    for m in range(m_max + 1):
        ap = tuple(range(m + 1))
        out.append((ap, ap))
        out.append((ap, tuple(range(0, 2 * m + 1, 2))))
        out.append((tuple(range(-m, 1)), tuple(range(0, 3 * m + 1, 3))))
    return out


def _check_pair(U, V) -> str | None:
    ex = check_excess_inequality(U, V)
    mo = moment_identities(U, V)
    if not ex.holds:
        return f"inequality: U={U} V={V} lhs={ex.lhs} rhs_num={ex.rhs_numerator}"
    if not (mo.first_ok and mo.second_ok):
        return f"moments: U={U} V={V} {mo}"
    if not doubled_remark_holds(delta_profile(U, V)):
        return f"pointwise remark: U={U} V={V}"
    return None


def sigma_delta_fuzz(trials: int, size_bound: int, value_bound: int, seed: int,
                     fixtures: bool = True) -> AuditReport:
    if trials < 0 or size_bound < 1 or value_bound < 1:
        raise ValueError("bounds must be positive")
    rng = random.Random(f"fuzz:{seed}")
    universe = range(-value_bound, value_bound + 1)
    cap = min(size_bound, len(universe))
    failures = []
    cases = progression_fixtures() if fixtures else []
    for U, V in cases:
        msg = _check_pair(U, V)
        if msg:
            failures.append(msg)
    for _ in range(trials):
        U = tuple(sorted(rng.sample(universe, rng.randint(1, cap))))
        V = tuple(sorted(rng.sample(universe, rng.randint(0, cap))))
        msg = _check_pair(U, V)
        if msg:
            failures.append(msg)
    rep = AuditReport()
    rep.add(f"fuzz: {trials} random + {len(cases)} fixture pairs", not failures,
            "; ".join(failures[:5]) + (f" (+{len(failures) - 5} more)" if len(failures) > 5 else ""))
    return rep
