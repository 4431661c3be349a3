"""Exact additive complements: construction, counting and exact finite checks."""

from .construction import ComplementPair, GrowthConfig, construct, prime_schedule
from .core_sets import sigma_profile, delta_profile, excess, sumset

__all__ = [
    "ComplementPair",
    "GrowthConfig",
    "construct",
    "prime_schedule",
    "sigma_profile",
    "delta_profile",
    "excess",
    "sumset",
]
