"""OVERVIEW:
Random streams and truncated power laws for the benchmark generator.

Random numbers come from numpy's Philox (a counter-based 64-bit generator).
Every stage of generation draws from its own substream, derived from
(seed, stage tag, extra keys...) through a SeedSequence, so changing how
one stage consumes randomness never shifts another stage's draws.
"""

import math
from typing import Tuple

import numpy as np

# stage tags for substreams; values are part of the on-disk reproducibility contract
STAGE_DEGREES = 1
STAGE_COMMUNITY_SIZES = 2
STAGE_ASSIGNMENT = 3
STAGE_INTERNAL = 4
STAGE_EXTERNAL = 5

BISECTION_TOLERANCE = 1e-7


def substream(seed: int, stage: int, *keys: int) -> np.random.Generator:
    """Independent Philox generator for (seed, stage, *keys)"""
    entropy = [int(seed), int(stage), *(int(k) for k in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def _integral_of_power(exponent: float, lo: float, hi: float) -> float:
    """∫_lo^hi x^exponent dx"""
    if abs(exponent + 1.0) < 1e-12:
        return math.log(hi / lo)
    return (hi ** (exponent + 1.0) - lo ** (exponent + 1.0)) / (exponent + 1.0)


def truncated_mean(tau: float, lo: float, hi: float) -> float:
    """Mean of the continuous density ∝ x^(-tau) on [lo, hi]"""
    if hi - lo <= 0:
        return hi
    return _integral_of_power(1.0 - tau, lo, hi) / _integral_of_power(-tau, lo, hi)


def solve_lower_bound(tau: float, target_mean: float, hi: float) -> float:
    """Bisection for lo in [1, hi] with truncated_mean(tau, lo, hi) = target_mean.

    The truncated mean increases with lo, so the caller must first check
    truncated_mean(tau, 1, hi) <= target_mean <= hi.
    """
    if target_mean >= hi:
        return hi
    lo_bound, hi_bound = 1.0, float(hi)
    while hi_bound - lo_bound > BISECTION_TOLERANCE:
        mid = 0.5 * (lo_bound + hi_bound)
        if truncated_mean(tau, mid, hi) < target_mean:
            lo_bound = mid
        else:
            hi_bound = mid
    return 0.5 * (lo_bound + hi_bound)


def sample_continuous(rng: np.random.Generator, tau: float, lo: float, hi: float, size: int) -> np.ndarray:
    """Inverse-CDF draws from the density ∝ x^(-tau) on [lo, hi]"""
    u = rng.random(size)
    if hi - lo <= 0:
        return np.full(size, float(hi))
    if abs(tau - 1.0) < 1e-12:
        return lo * (hi / lo) ** u
    a = lo ** (1.0 - tau)
    b = hi ** (1.0 - tau)
    return (a + u * (b - a)) ** (1.0 / (1.0 - tau))


def sample_integers(rng: np.random.Generator, tau: float, lo: float, hi: int, size: int,
                    floor_value: int) -> np.ndarray:
    """Continuous draws rounded half up and clipped to [floor_value, hi]"""
    values = np.floor(sample_continuous(rng, tau, lo, hi, size) + 0.5).astype(np.int64)
    return np.clip(values, floor_value, hi)


def composition_bounds(n: int, lo: int, hi: int) -> Tuple[int, int]:
    """Range of part counts k with k·lo <= n <= k·hi (empty when first > second)"""
    return math.ceil(n / hi), n // lo
