"""Counting functions and the deficiency decomposition A(x)B(x) - x = y + z - r.

Everything that materializes B or scans integers up to x is bounded by an
enumeration limit (default 10**6, env ``ADDCOMP_LIMIT``).  Counting A and B
themselves goes through block geometry and has no limit.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .construction import ComplementPair
from .core_sets import excess, sigma_profile
from .errors import BelowMinimum, DegenerateA, LimitExceeded, ZeroDenominator

DEFAULT_LIMIT = 10 ** 6
GAP_CAP = 10 ** 4


def resolve_limit(limit: int | None = None) -> int:
    if limit is not None:
        return limit
    env = os.environ.get("ADDCOMP_LIMIT")
    return int(env) if env else DEFAULT_LIMIT


def _check_limit(x: int, limit: int | None) -> None:
    lim = resolve_limit(limit)
    if x > lim:
        raise LimitExceeded(x, lim)


def count_A(pair: ComplementPair, x: int) -> int:
    return sum(bisect_right(blk.elements, x) for blk in pair.a_blocks)


def a_star(pair: ComplementPair, x: int) -> int:
    """Largest element of A not exceeding x."""
    if x < 1:
        raise BelowMinimum(f"a*(x) needs x >= 1, got {x}")
    for blk in reversed(pair.a_blocks):
        i = bisect_right(blk.elements, x)
        if i:
            return blk.elements[i - 1]
    raise BelowMinimum(f"no element of A is <= {x}")


def a_sum(pair: ComplementPair, x: int) -> int:
    return sum(a for blk in pair.a_blocks for a in blk.elements[: bisect_right(blk.elements, x)])


def _multiples_in(m: int, lo: int, hi: int, x: int) -> int:
    """Multiples of m in the open interval (lo, hi), clipped to <= x."""
    top = min(x, hi - 1)
    return top // m - lo // m if top > lo else 0


def count_B(pair: ComplementPair, x: int) -> int:
    """|B n [1, x]| by inclusion-exclusion over adjacent descriptors."""
    ds = pair.b_descriptors
    total = sum(_multiples_in(d.modulus, d.lower, d.upper, x) for d in ds)
    for d, e in zip(ds, ds[1:]):
        lo, hi = max(d.lower, e.lower), min(d.upper, e.upper)
        if lo < hi:
            total -= _multiples_in(d.modulus * e.modulus, lo, hi, x)
    return total


def is_in_B(pair: ComplementPair, n: int) -> bool:
    return any(d.contains(n) for d in pair.b_descriptors)


def b_elements_up_to(pair: ComplementPair, x: int, limit: int | None = None) -> tuple[int, ...]:
    _check_limit(x, limit)
    out: set[int] = set()
    for d in pair.b_descriptors:
        top = min(x, d.upper - 1)
        first = (d.lower // d.modulus + 1) * d.modulus
        out.update(range(first, top + 1, d.modulus))
    return tuple(sorted(out))


def _b_bitmask(pair: ComplementPair, x: int) -> int:
    """Bit n set iff n in B, for 1 <= n <= x."""
    mask = 0
    for d in pair.b_descriptors:
        m = d.modulus
        first = (d.lower // m + 1) * m
        top = min(x, d.upper - 1)
        if first > top:
            continue
        c = (top - first) // m + 1
        # base-2^m repunit: bits at 0, m, ..., (c-1)m
        mask |= (((1 << (m * c)) - 1) // ((1 << m) - 1)) << first
    return mask


@dataclass(frozen=True)
class Uncovered:
    x: int
    r: int
    gaps: tuple[int, ...]
    truncated: bool


def uncovered_up_to(pair: ComplementPair, x: int, limit: int | None = None) -> Uncovered:
    """Integers 1..x not of the form a + b with a in A, b in B."""
    _check_limit(x, limit)
    if x < 1:
        return Uncovered(x, 0, (), False)
    bmask = _b_bitmask(pair, x)
    covered = 0
    for blk in pair.a_blocks:
        for a in blk.elements:
            if a >= x:
                break
            covered |= bmask << a
    full = (1 << (x + 1)) - 2
    missing = ~covered & full
    r = missing.bit_count()
    bits = bin(missing)[:1:-1]
    gaps = []
    i = bits.find("1")
    while i >= 0 and len(gaps) < GAP_CAP:
        gaps.append(i)
        i = bits.find("1", i + 1)
    return Uncovered(x, r, tuple(gaps), r > len(gaps))


@dataclass(frozen=True)
class DeficiencyReport:
    x: int
    count_a: int
    count_b: int
    a_star: int
    r: int
    y: int
    z: int
    deficiency: int
    exactness_ratio: Fraction
    identity_ok: bool


def deficiency_decomposition(pair: ComplementPair, x: int, limit: int | None = None) -> DeficiencyReport:
    _check_limit(x, limit)
    if x < 1:
        raise BelowMinimum("checkpoints must be >= 1")
    U = tuple(a for blk in pair.a_blocks for a in blk.elements if a <= x)
    V = b_elements_up_to(pair, x, limit)
    prof = sigma_profile(U, V)
    y = excess(prof)
    z = sum(1 for n in prof if n > x)
    r = uncovered_up_to(pair, x, limit).r
    deficiency = len(U) * len(V) - x
    return DeficiencyReport(
        x=x,
        count_a=len(U),
        count_b=len(V),
        a_star=a_star(pair, x),
        r=r,
        y=y,
        z=z,
        deficiency=deficiency,
        exactness_ratio=Fraction(len(U) * len(V), x),
        identity_ok=deficiency == y + z - r,
    )


@dataclass(frozen=True)
class DichotomyReport:
    x: int
    ratio_a: Fraction
    ratio_b: Fraction


def dichotomy_ratios(pair: ComplementPair, xs: Iterable[int]) -> list[DichotomyReport]:
    out = []
    for x in xs:
        ax, bx = count_A(pair, x), count_B(pair, x)
        if ax == 0 or bx == 0:
            raise ZeroDenominator(f"A({x})={ax}, B({x})={bx}")
        out.append(DichotomyReport(x, Fraction(count_A(pair, 2 * x), ax), Fraction(count_B(pair, 2 * x), bx)))
    return out


def mean_a_ratio(pair: ComplementPair, x: int) -> Fraction:
    """(sum of a <= x) / (x A(x)); small when A's mass sits far below x."""
    ax = count_A(pair, x) if x >= 1 else 0
    if ax == 0:
        raise ZeroDenominator(f"A({x}) = 0")
    return Fraction(a_sum(pair, x), x * ax)


def growth_exponents(pair: ComplementPair, x: int) -> tuple[float, float]:
    """log A(x)/log x and log B(x)/log x, for display only."""
    if x < 2:
        raise ValueError("x must be >= 2")
    lx = math.log(x)
    ax, bx = count_A(pair, x), count_B(pair, x)
    return (math.log(ax) / lx if ax else float("-inf"), math.log(bx) / lx if bx else float("-inf"))


@dataclass(frozen=True)
class LowerBoundReport:
    x: int
    epsilon: Fraction
    lhs: int
    rhs: Fraction
    satisfied: bool


def lower_bound_report(
    pair: ComplementPair, x: int, epsilon: Fraction, limit: int | None = None
) -> LowerBoundReport:
    """A(x)B(x) - x against (1-eps) a*(x)/(A(x)-1) - r(x) A(x)/(A(x)-1)."""
    ax = count_A(pair, x)
    if ax < 2:
        raise DegenerateA(f"A({x}) = {ax} < 2")
    rep = deficiency_decomposition(pair, x, limit)
    eps = Fraction(epsilon)
    rhs = ((1 - eps) * rep.a_star - rep.r * ax) / (ax - 1)
    return LowerBoundReport(x, eps, rep.deficiency, rhs, rep.deficiency >= rhs)


def guaranteed_range(pair: ComplementPair) -> tuple[int, int]:
    """(lo, hi) with every n in (lo, hi] covered by construction."""
    return 3 * pair.u[0], (pair.K + 2) * pair.u[-1]


def u_checkpoints(pair: ComplementPair, limit: int | None = None) -> list[int]:
    """x = u_{k+1} for 2 <= k <= K-1 within the limit."""
    lim = resolve_limit(limit)
    return [pair.u_(k + 1) for k in range(2, pair.K) if pair.u_(k + 1) <= lim]


def auto_checkpoints(pair: ComplementPair, count: int = 20, limit: int | None = None) -> list[int]:
    """All u_{k+1} checkpoints plus geometric fill-in up to the guaranteed range."""
    lim = resolve_limit(limit)
    top = min(lim, guaranteed_range(pair)[1])
    pts = {pair.u_(k + 1) for k in range(1, pair.K) if pair.u_(k + 1) <= lim}
    want = count - len(pts)
    if want > 0 and top >= 2:
        step = math.log(top) / want
        pts.update(max(1, min(top, round(math.exp(step * i)))) for i in range(1, want + 1))
        n = 1
        while len(pts) < min(count, top):
            pts.add(n)
            n += 1
    return sorted(pts)


def stream_deficiency(pair: ComplementPair, xs: Iterable[int], limit: int | None = None) -> Iterator[DeficiencyReport]:
    for x in xs:
        yield deficiency_decomposition(pair, x, limit)
