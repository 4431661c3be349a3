"""Named slowly growing functions used to report against the deficiency.

Spec strings look like ``name`` or ``name:param``:

    root:d     floor(x ** (1/d)), exact integer arithmetic
    log[:c]    c * ln(x) (float)
    loglog[:c] c * ln(ln(x)) (float, 0 for x <= e)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_MAX_BITS = 1 << 20


def iroot(x: int, d: int) -> int:
    """Largest integer r with r**d <= x."""
    if x < 0 or d < 1:
        raise ValueError("iroot needs x >= 0 and d >= 1")
    if x < 2 or d == 1:
        return x
    r = 1 << -(-x.bit_length() // d)
    while True:
        s = ((d - 1) * r + x // r ** (d - 1)) // d
        if s >= r:
            break
        r = s
    while r ** d > x:
        r -= 1
    while (r + 1) ** d <= x:
        r += 1
    return r


@dataclass(frozen=True)
class OmegaSpec:
    name: str
    param: Fraction

    @classmethod
    def parse(cls, text: str) -> "OmegaSpec":
        name, _, raw = text.partition(":")
        name = name.strip().lower()
        if name == "root":
            d = int(raw) if raw else 2
            if d < 1:
                raise ValueError("root degree must be >= 1")
            return cls("root", Fraction(d))
        if name in ("log", "loglog"):
            c = Fraction(raw) if raw else Fraction(1)
            if c <= 0:
                raise ValueError("scale must be positive")
            return cls(name, c)
        raise ValueError(f"unknown omega function {text!r}")

    def __str__(self) -> str:
        return f"{self.name}:{self.param}"

    def __call__(self, x: int) -> int | float:
        if x < 1:
            raise ValueError("omega is defined for x >= 1")
        if self.name == "root":
            return iroot(x, int(self.param))
        c = float(self.param)
        if self.name == "log":
            return c * math.log(x)
        lx = math.log(x)
        return c * math.log(lx) if lx > 1 else 0.0

    def least_exceeding(self, value: int) -> int:
        """Smallest x >= 1 with omega(x) > value."""
        if self.name == "root":
            return (value + 1) ** int(self.param)
        hi = 1
        while self(hi) <= value:
            hi <<= 1
            if hi.bit_length() > _MAX_BITS:
                raise OverflowError(f"omega exceeds {value} only beyond 2^{_MAX_BITS}")
        lo = hi >> 1
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self(mid) > value:
                hi = mid
            else:
                lo = mid
        return hi
