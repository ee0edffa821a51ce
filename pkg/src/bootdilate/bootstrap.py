"""Bootstrap calibration of the dilation radius.

Each replicate is an iid-with-replacement redraw of the sample matched back
to it with the exact minimax matching; the dilation radius at level alpha is
the floor(B*alpha)-th largest of the B matching costs.  Replicate b derives
its generator from ``(seed, b)`` alone, so results do not depend on how the
replicate loop is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matching import PointCloud, _threshold_search, pairwise_distances


@dataclass
class BootstrapConfig:
    replicates: int
    alpha: float
    seed: int

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("need at least one bootstrap replicate")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass
class BootstrapSummary:
    """All B matching costs plus the selected radius (an element of etas)."""

    etas: np.ndarray
    radius: float


@dataclass
class DilationSpec:
    """A closed ball radius and the norm it is measured in."""

    radius: float
    norm: str = "sup"

    def __post_init__(self) -> None:
        if not (np.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError("radius must be finite and nonnegative")


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for replicate ``index``: seeded by the entropy pair
    (seed, index) so replicates are reproducible independently of worker
    count or evaluation order."""
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def resample(sample: PointCloud, rng: np.random.Generator) -> PointCloud:
    """Uniform iid draw with replacement of n points from the cloud."""
    idx = rng.integers(0, sample.n, size=sample.n)
    return PointCloud(sample.points[idx], norm=sample.norm)


def select_radius(etas, alpha: float) -> float:
    """floor(B*alpha)-th largest of the replicate costs.

    Duplicated values count separately (plain descending order).  Raises if
    floor(B*alpha) < 1, i.e. alpha is too small to be calibrated with B
    replicates.
    """
    values = np.asarray(etas, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("no replicate costs given")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k = math.floor(values.size * alpha)
    if k < 1:
        raise ValueError(
            f"floor(B*alpha) = 0 with B={values.size}, alpha={alpha}; "
            "increase the number of replicates"
        )
    return float(np.sort(values)[values.size - k])


def bootstrap_etas(sample: PointCloud, replicates: int, seed: int) -> np.ndarray:
    """Matching cost between the sample and each of B bootstrap replicates.

    d=1 uses the order-statistic pairing; d>=2 runs the exact threshold
    search on each replicate, reusing the sample's pairwise distances (a
    replicate is a row selection of them) and a single sorted candidate set.
    """
    if replicates < 1:
        raise ValueError("need at least one bootstrap replicate")
    n = sample.n
    etas = np.empty(replicates)
    if sample.dim == 1:
        base = np.sort(sample.points[:, 0])
        for b in range(replicates):
            idx = replicate_rng(seed, b).integers(0, n, size=n)
            etas[b] = np.max(np.abs(np.sort(sample.points[idx, 0]) - base))
    else:
        dist_full = pairwise_distances(sample.points, sample.points, sample.norm)
        candidates = np.unique(dist_full)
        for b in range(replicates):
            idx = replicate_rng(seed, b).integers(0, n, size=n)
            _, etas[b] = _threshold_search(dist_full[idx], candidates)
    return etas


def dilation_radius_bootstrap(sample: PointCloud, config: BootstrapConfig) -> BootstrapSummary:
    """Bootstrap-calibrated dilation radius at level ``config.alpha``.

    The costs are unscaled distances (no root-n normalization); callers who
    want a scale-free quantity multiply by sqrt(n) themselves.
    """
    etas = bootstrap_etas(sample, config.replicates, config.seed)
    return BootstrapSummary(etas=etas, radius=select_radius(etas, config.alpha))
