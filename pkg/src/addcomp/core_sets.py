"""Finite integer sets, representation functions and the excess inequality.

Sets are plain sorted tuples of distinct ints; representation profiles are
``dict[int, int]`` mapping a value to a positive count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyU

FiniteIntSet = tuple[int, ...]
RepProfile = dict[int, int]


def int_set(values: Iterable[int]) -> FiniteIntSet:
    """Normalize to a sorted tuple of distinct ints."""
    return tuple(sorted(set(values)))


def sumset(U: Iterable[int], V: Iterable[int]) -> FiniteIntSet:
    V = tuple(V)
    return int_set(u + v for u in U for v in V)


def sigma_profile(U: Iterable[int], V: Iterable[int]) -> RepProfile:
    """Counts of pairs (u, v) with u + v = n."""
    V = tuple(V)
    return dict(Counter(u + v for u in U for v in V))


def delta_profile(U: Iterable[int], V: Iterable[int]) -> RepProfile:
    """Counts of pairs (u, v) with v - u = n; n may be negative."""
    V = tuple(V)
    return dict(Counter(v - u for u in U for v in V))


def mass(p: Mapping[int, int]) -> int:
    return sum(p.values())


def excess(p: Mapping[int, int]) -> int:
    """Sum of (count - 1) over values represented more than once."""
    return mass(p) - len(p)


def doubled_remark_holds(p: Mapping[int, int]) -> bool:
    # pointwise: c - 1 <= (c^2 - c) / 2 whenever c > 1
    return all(2 * (c - 1) <= c * c - c for c in p.values() if c > 1)


@dataclass(frozen=True)
class ExcessCheck:
    lhs: int
    rhs_numerator: int
    size_u: int
    holds: bool


def check_excess_inequality(U: Iterable[int], V: Iterable[int]) -> ExcessCheck:
    """Compare |U| * excess(sigma) against excess(delta) in integers."""
    U, V = int_set(U), int_set(V)
    if not U:
        raise EmptyU("U must be nonempty")
    lhs = excess(sigma_profile(U, V))
    rhs = excess(delta_profile(U, V))
    return ExcessCheck(lhs, rhs, len(U), lhs * len(U) >= rhs)


@dataclass(frozen=True)
class MomentIdentities:
    sum_sigma: int
    sum_delta: int
    sum_sigma_sq: int
    sum_delta_sq: int
    first_ok: bool
    second_ok: bool


def moment_identities(U: Iterable[int], V: Iterable[int]) -> MomentIdentities:
    U, V = int_set(U), int_set(V)
    s, d = sigma_profile(U, V), delta_profile(U, V)
    ss, sd = mass(s), mass(d)
    qs = sum(c * c for c in s.values())
    qd = sum(c * c for c in d.values())
    return MomentIdentities(
        ss, sd, qs, qd,
        first_ok=ss == sd == len(U) * len(V),
        second_ok=qs == qd,
    )
