"""Construction of the prime-block complement pair (A, B).

A is the union of explicit blocks A_1 = {1..p_1}, A_k inside (u_k, 2u_k),
chosen so that A_1 u ... u A_k hits every residue class mod p_k exactly once.
B is kept implicit: B_k is the multiples of p_k in (k u_k, (k+3) u_{k+1}).
"""

from __future__ import annotations

import logging
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import Sequence

from .core_sets import FiniteIntSet
from .errors import (
    BlockInfeasible,
    ConstructionFailed,
    InsufficientSchedule,
    InvalidExplicitU,
    ScheduleGap,
)
from .omega import OmegaSpec

log = logging.getLogger(__name__)

POLICIES = ("greedy-min", "lemma-safe", "explicit")
MAX_RETRIES = 64
MAX_CONSECUTIVE_REJECTIONS = 10_000
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def prime_schedule(K: int) -> tuple[int, ...]:
    """p_k = least prime above k^3, for k = 1..K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    primes = []
    for k in range(1, K + 1):
        p = next_prime(k ** 3)
        if k >= 2 and p >= (k + 1) ** 3:
            raise ScheduleGap(k)
        primes.append(p)
    return tuple(primes)


def uniform_int(rng: random.Random, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi] by rejection from a power-of-two envelope."""
    if hi < lo:
        raise ValueError("empty range")
    span = hi - lo + 1
    bits = span.bit_length()
    while True:
        r = rng.getrandbits(bits)
        if r < span:
            return lo + r


@dataclass(frozen=True)
class GrowthConfig:
    K: int
    policy: str = "greedy-min"
    seed: int = 0
    sieve_threshold: int = 10 ** 6
    omega: str | None = None
    u_list: tuple[int, ...] | None = None
    enforce_omega: bool = False

    def __post_init__(self):
        if self.K < 2:
            raise ValueError("K must be >= 2")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")
        if self.sieve_threshold < 1:
            raise ValueError("sieve_threshold must be >= 1")
        if self.policy == "explicit":
            if self.u_list is None or len(self.u_list) not in (self.K - 1, self.K):
                raise ValueError("explicit policy needs u_list of length K-1 (u_2..u_K) or K")
        if self.omega is not None:
            OmegaSpec.parse(self.omega)
        if self.enforce_omega and self.omega is None:
            raise ValueError("enforce_omega requires omega")

    @property
    def omega_spec(self) -> OmegaSpec | None:
        return OmegaSpec.parse(self.omega) if self.omega else None

    def explicit_u(self, k: int) -> int:
        """User value for u_k (1-based)."""
        offset = 1 if len(self.u_list) == self.K else 2
        return self.u_list[k - offset]


@dataclass(frozen=True)
class ABlock:
    k: int
    u_k: int
    elements: FiniteIntSet


@dataclass(frozen=True)
class BBlockDescriptor:
    """Multiples of ``modulus`` strictly between ``lower`` and ``upper``."""

    k: int
    modulus: int
    lower: int
    upper: int

    def contains(self, n: int) -> bool:
        return self.lower < n < self.upper and n % self.modulus == 0


@dataclass(frozen=True)
class ComplementPair:
    schedule: tuple[int, ...]
    u: tuple[int, ...]
    a_blocks: tuple[ABlock, ...]
    b_descriptors: tuple[BBlockDescriptor, ...]
    config: GrowthConfig
    retries: tuple[int, ...] = field(default=())

    @property
    def K(self) -> int:
        return len(self.schedule)

    def p(self, k: int) -> int:
        return self.schedule[k - 1]

    def u_(self, k: int) -> int:
        return self.u[k - 1]

    @cached_property
    def a_elements(self) -> FiniteIntSet:
        return tuple(a for blk in self.a_blocks for a in blk.elements)

    def level(self, k: int) -> FiniteIntSet:
        """A_1 u ... u A_k."""
        return tuple(a for blk in self.a_blocks[:k] for a in blk.elements)

    def block_of(self, a: int) -> int | None:
        """Block index containing a, or None if a is not in A."""
        for blk in self.a_blocks:
            els = blk.elements
            i = bisect_right(els, a)
            if i and els[i - 1] == a:
                return blk.k
        return None


def block_sizes(schedule: Sequence[int]) -> list[int]:
    return [schedule[0]] + [schedule[i] - schedule[i - 1] for i in range(1, len(schedule))]


@dataclass(frozen=True)
class LemmaBound:
    k: int
    delta_lower: Fraction
    r: int
    q: int
    v_k: int


def lemma_safe_bound(k: int, schedule: Sequence[int]) -> LemmaBound:
    """Certified sufficient size v_k = ceil(2q / delta_lower) for block k.

    delta_lower bounds prod_{j >= k} (1 - (p_k - 1)/p_j) from below: exact
    factors for the listed primes times 1 - s for the unlisted tail, where
    p_j > j^3 gives sum_{j > K} (p_k - 1)/p_j < (p_k - 1)/(2K^2) and
    log(1 - y) >= -y/(1 - y_max).
    """
    K = len(schedule)
    if not 2 <= k <= K:
        raise ValueError(f"k must satisfy 2 <= k <= {K}")
    pk = schedule[k - 1]
    c = pk - 1
    finite = prod((Fraction(p - c, p) for p in schedule[k - 1:]), start=Fraction(1))
    y_max = Fraction(c, (K + 1) ** 3)
    if y_max >= 1:
        raise InsufficientSchedule(f"tail factors not certified positive with K={K}")
    s = Fraction(c, 2 * K * K) / (1 - y_max)
    if s >= 1 or finite <= 0:
        raise InsufficientSchedule(f"delta not certified positive with K={K}")
    delta_lower = finite * (1 - s)
    target = delta_lower / (4 * pk)
    tail_bound = Fraction(1, 2 * K * K)
    # tails[r] bounds sum_{i > r} 1/p_i
    r = None
    tail = tail_bound
    for idx in range(K, k - 1, -1):
        if tail < target:
            r = idx
        else:
            break
        tail += Fraction(1, schedule[idx - 1])
    if r is None:
        raise InsufficientSchedule(f"no r <= {K} with certified tail below delta/(4 p_k)")
    q = prod(schedule[k - 1:r])
    v_k = -((-2 * q * delta_lower.denominator) // delta_lower.numerator)
    return LemmaBound(k, delta_lower, r, q, v_k)


def lemma_safe_bound_extended(k: int, K_min: int, K_cap: int = 1 << 14) -> LemmaBound:
    """lemma_safe_bound over the least schedule length (doubling) that certifies it."""
    R = max(K_min, k, 2)
    while R <= K_cap:
        try:
            return lemma_safe_bound(k, prime_schedule(R))
        except InsufficientSchedule:
            R *= 2
    raise InsufficientSchedule(f"schedule of length {K_cap} still insufficient for k={k}")


def _least_multiple_above(m: int, bound: int) -> int:
    return (bound // m + 1) * m


def choose_u(k: int, schedule: Sequence[int], u_prev: int, config: GrowthConfig) -> int:
    """u_k: a multiple of p_k strictly above k * u_{k-1}, per policy."""
    if k < 2:
        raise ValueError("choose_u is for k >= 2")
    pk = schedule[k - 1]
    floor_ = k * u_prev
    if config.policy == "explicit":
        u = config.explicit_u(k)
        if u % pk:
            raise InvalidExplicitU(f"u_{k}={u} is not divisible by p_{k}={pk}")
        if u <= floor_:
            raise InvalidExplicitU(f"u_{k}={u} must exceed {k}*u_{k - 1}={floor_}")
        return u
    if config.policy == "lemma-safe":
        floor_ = max(floor_, lemma_safe_bound_extended(k, len(schedule)).v_k)
    if config.enforce_omega:
        # u_k >= least x with omega(x) > u_{k-1}
        floor_ = max(floor_, config.omega_spec.least_exceeding(u_prev) - 1)
    return _least_multiple_above(pk, floor_)


def build_a_block(
    k: int,
    u_k: int,
    schedule: Sequence[int],
    prior_blocks: Sequence[ABlock],
    config: GrowthConfig,
) -> ABlock:
    """Pick p_k - p_{k-1} elements of (u_k, 2u_k) avoiding used residues.

    A candidate is admissible when it is incongruent, modulo every schedule
    prime p_j (j >= k) below 2u_k, to everything already in A.  Primes at or
    above 2u_k never separate distinct elements below 2u_k, so they are skipped.
    """
    needed = schedule[k - 1] - schedule[k - 2]
    upper = 2 * u_k
    moduli = [p for p in schedule[k - 1:] if p < upper]
    forbidden = {p: set() for p in moduli}
    for blk in prior_blocks:
        for a in blk.elements:
            for p in moduli:
                forbidden[p].add(a % p)

    def admissible(c: int) -> bool:
        return all(c % p not in forbidden[p] for p in moduli)

    def take(c: int) -> None:
        chosen.append(c)
        for p in moduli:
            forbidden[p].add(c % p)

    def scan() -> None:
        c = u_k + 1
        while len(chosen) < needed and c < upper:
            if admissible(c):
                take(c)
            c += 1

    chosen: list[int] = []
    if u_k - 1 <= config.sieve_threshold:
        scan()
    else:
        rng = random.Random(f"addcomp:{config.seed}:{k}:{u_k}")
        misses = 0
        while len(chosen) < needed:
            c = uniform_int(rng, u_k + 1, upper - 1)
            if admissible(c):
                take(c)
                misses = 0
            else:
                misses += 1
                if misses >= MAX_CONSECUTIVE_REJECTIONS:
                    scan()
                    break
    if len(chosen) < needed:
        raise BlockInfeasible(k, u_k, len(chosen), needed)
    return ABlock(k, u_k, tuple(sorted(chosen)))


def build_b_descriptors(u: Sequence[int], schedule: Sequence[int]) -> tuple[BBlockDescriptor, ...]:
    if len(u) < 2:
        raise ValueError("need at least u_1, u_2")
    return tuple(
        BBlockDescriptor(k, schedule[k - 1], k * u[k - 1], (k + 3) * u[k])
        for k in range(1, len(u))
    )


def construct(config: GrowthConfig) -> ComplementPair:
    schedule = prime_schedule(config.K)
    p1 = schedule[0]
    u1 = p1
    if config.policy == "explicit" and len(config.u_list) == config.K:
        u1 = config.u_list[0]
        if u1 < 1 or u1 % p1:
            raise InvalidExplicitU(f"u_1={u1} must be a positive multiple of p_1={p1}")
    us = [u1]
    blocks = [ABlock(1, u1, tuple(range(1, p1 + 1)))]
    retries = [0]
    for k in range(2, config.K + 1):
        u_k = choose_u(k, schedule, us[-1], config)
        for attempt in range(MAX_RETRIES + 1):
            try:
                blk = build_a_block(k, u_k, schedule, blocks, config)
                break
            except BlockInfeasible as exc:
                if config.policy == "explicit":
                    raise ConstructionFailed(k, u_k, str(exc)) from exc
                log.debug("block %d infeasible at u=%d, doubling", k, u_k)
                u_k *= 2
        else:
            raise ConstructionFailed(k, u_k // 2)
        us.append(u_k)
        blocks.append(blk)
        retries.append(attempt)
    return ComplementPair(
        schedule=schedule,
        u=tuple(us),
        a_blocks=tuple(blocks),
        b_descriptors=build_b_descriptors(us, schedule),
        config=config,
        retries=tuple(retries),
    )
