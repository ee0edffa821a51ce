"""Empirical quantile processes and the Kolmogorov sup-norm calibration.

The empirical quantile is the left-continuous inverse Q_n(t) = Y_(j) for
j-1 < n t <= j.  The sup distance between the quantile functions of a sample
and a same-size replicate is attained at the n step locations, which ties
this module to the order-statistic matching cost computed elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import ndtr


@dataclass
class QuantileFunction:
    """Left-continuous empirical quantile function of a sample."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise ValueError("need at least one observation")
        if not np.all(np.isfinite(v)):
            raise ValueError("observations must be finite")
        self.values = v

    @property
    def n(self) -> int:
        return self.values.size

    def __call__(self, t: float) -> float:
        return empirical_quantile(self, t)


def empirical_quantile(q: QuantileFunction, t: float) -> float:
    """Q_n(t) = Y_(j) with j = ceil(n t), for t in (0, 1].

    Products n*t within 1e-9 of an integer are snapped to it before taking
    the ceiling, so t = j/n lands on Y_(j) despite the roundtrip through
    division.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    x = q.n * t
    nearest = round(x)
    if abs(x - nearest) < 1e-9 and nearest >= 1:
        j = int(nearest)
    else:
        j = math.ceil(x)
    j = min(max(j, 1), q.n)
    return float(q.values[j - 1])


def kolmogorov_cdf(x: float) -> float:
    """P(sup_t |B(t)| <= x) for a Brownian bridge B.

    Alternating series 1 - 2 sum_k (-1)^(k+1) exp(-2 k^2 x^2), truncated
    once a term drops below 1e-12.
    """
    if x <= 0.0:
        return 0.0
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        if term < 1e-12:
            break
        total += sign * term
        sign = -sign
        k += 1
    return max(0.0, min(1.0, 1.0 - 2.0 * total))


@lru_cache(maxsize=None)
def kolmogorov_quantile(alpha: float) -> float:
    """c(alpha) with P(sup_t |B(t)| <= c) = 1 - alpha, by bisection to 1e-8."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    target = 1.0 - alpha
    lo, hi = 1e-8, 10.0
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        if kolmogorov_cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class DensityHandle:
    """A density together with the interval on which it is positive."""

    pdf: Callable[[float], float]
    support: tuple[float, float] = (-np.inf, np.inf)


def standard_normal_density() -> DensityHandle:
    return DensityHandle(pdf=lambda y: float(np.exp(-0.5 * y * y) / np.sqrt(2.0 * np.pi)))


def normal_cdf(x):
    """Standard normal CDF via erf; vectorized."""
    return ndtr(x)


def oracle_dilation_interval(y: float, n: int, alpha: float, density: DensityHandle) -> tuple[float, float]:
    """Density-scaled band around y: y -/+ c(alpha) / (sqrt(n) f(y)).

    This is the infeasible counterpart of the bootstrap dilation: it needs
    the true density at y, and it is the pointwise width that the bootstrap
    radius mimics without knowing f.
    """
    if n < 1:
        raise ValueError("n must be positive")
    fy = float(density.pdf(y))
    if not (np.isfinite(fy) and fy > 0.0):
        raise ValueError(f"density must be positive at y={y}, got {fy}")
    half = kolmogorov_quantile(alpha) / (math.sqrt(n) * fy)
    return (y - half, y + half)


def bootstrap_quantile_sup(sample, replicate) -> float:
    """sup_t |Q_n^rep(t) - Q_n(t)|, exact via the n step locations.

    Unscaled: multiply by sqrt(n) for the usual normalization.  Equals the
    1-d minimax matching cost between the two multisets.
    """
    a = np.asarray(sample, dtype=float).ravel()
    b = np.asarray(replicate, dtype=float).ravel()
    if a.size != b.size:
        raise ValueError(f"sample and replicate sizes differ: {a.size} vs {b.size}")
    if a.size == 0:
        raise ValueError("need at least one observation")
    return float(np.max(np.abs(np.sort(a) - np.sort(b))))
