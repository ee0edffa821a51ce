"""Interval-valued models: dilated correspondences and containment tests.

A model assigns each latent draw u an interval [lower(u; theta),
upper(u; theta)].  A sample is compatible with theta after dilating every
interval by eta iff the empirical distribution is stochastically wedged
between the reachability CDFs of the dilated endpoints; for monotone
endpoint maps it is enough to check the two half-line families at the order
statistics:

    F_n(Y_(j)) <= nu({u : lower(u) - eta <= Y_(j)})     ("reach from below")
    nu({u : upper(u) + eta < Y_(j)}) <= F_n(Y_(j)-)     ("clear from above")

F_n jumps at its order statistics, and which side of the jump enters the
comparison decides whether the extreme constraints are unsatisfiable (right
side: level 1 against a CDF that never attains 1) or vacuous (left side:
level 0).  Both families are therefore compared at the expected CDF values
E F(Y_(j)) = j/(n+1), the classical plotting positions, which sit strictly
inside the jump [(j-1)/n, j/n] and keep every constraint informative.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtr, ndtri

Endpoint = Callable[[np.ndarray, float], np.ndarray]


@dataclass
class IntervalCorrespondence:
    """Interval-valued map u -> [lower(u; theta), upper(u; theta)].

    ``lower``/``upper``/``latent_cdf`` take (u, theta) with u vectorized.
    ``monotone`` asserts both endpoint maps are nondecreasing in u (the
    containment test requires it).  ``dilation`` is an accumulated widening
    applied symmetrically to both endpoints; composing dilations adds the
    radii before they touch the endpoints, so composition is exactly
    associative.  ``lower_inv(y, theta)`` is sup{u : lower(u) <= y} and
    ``upper_inv(y, theta)`` is sup{u : upper(u) < y}; when absent they are
    computed by bisection over ``latent_support``.
    """

    lower: Endpoint
    upper: Endpoint
    latent_cdf: Endpoint
    monotone: bool = True
    dilation: float = 0.0
    lower_inv: Endpoint | None = None
    upper_inv: Endpoint | None = None
    latent_support: tuple[float, float] = (-np.inf, np.inf)

    def lower_at(self, u, theta: float):
        return self.lower(np.asarray(u, dtype=float), theta) - self.dilation

    def upper_at(self, u, theta: float):
        return self.upper(np.asarray(u, dtype=float), theta) + self.dilation


@dataclass
class RegionResult:
    """Membership flags of a parameter grid at a fixed dilation radius."""

    theta_grid: np.ndarray
    member: np.ndarray
    radius: float
    alpha: float

    def __post_init__(self) -> None:
        grid = np.asarray(self.theta_grid, dtype=float)
        member = np.asarray(self.member, dtype=bool)
        if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
            raise ValueError("theta_grid must be strictly increasing and 1-d")
        if member.shape != grid.shape:
            raise ValueError("member flags must align with the grid")
        self.theta_grid = grid
        self.member = member


def compose_dilation(corr: IntervalCorrespondence, eta: float) -> IntervalCorrespondence:
    """Widen every interval of the correspondence by eta on both sides."""
    if not (np.isfinite(eta) and eta >= 0.0):
        raise ValueError(f"dilation radius must be finite and >= 0, got {eta}")
    return dataclasses.replace(corr, dilation=corr.dilation + eta)


def _sup_below(fn: Endpoint, y: float, theta: float, support: tuple[float, float],
               strict: bool) -> float:
    """sup{u in support : fn(u, theta) <= y} (or < y when strict) for fn
    nondecreasing in u, by expanding bracket plus bisection."""
    lo, hi = support
    lo = max(lo, -1e18)
    hi = min(hi, 1e18)

    def below(u: float) -> bool:
        v = float(fn(np.asarray([u]), theta)[0])
        return v < y if strict else v <= y

    if not below(lo):
        return -np.inf
    if below(hi):
        return np.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if below(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(lo), abs(hi)):
            break
    return lo


def _reach_clear_probs(corr: IntervalCorrespondence, ys: np.ndarray, theta: float,
                       total_dilation: float) -> tuple[np.ndarray, np.ndarray]:
    """nu(lower(U) - eta <= y) and nu(upper(U) + eta < y) at each y."""
    y_lo = ys + total_dilation
    y_hi = ys - total_dilation
    if corr.lower_inv is not None:
        u_reach = np.asarray(corr.lower_inv(y_lo, theta), dtype=float)
    else:
        u_reach = np.array([_sup_below(corr.lower, y, theta, corr.latent_support, strict=False)
                            for y in y_lo])
    if corr.upper_inv is not None:
        u_clear = np.asarray(corr.upper_inv(y_hi, theta), dtype=float)
    else:
        u_clear = np.array([_sup_below(corr.upper, y, theta, corr.latent_support, strict=True)
                            for y in y_hi])

    def cdf_at(u: np.ndarray) -> np.ndarray:
        out = np.empty(u.shape)
        finite = np.isfinite(u)
        out[u == -np.inf] = 0.0
        out[u == np.inf] = 1.0
        if np.any(finite):
            out[finite] = np.asarray(corr.latent_cdf(u[finite], theta), dtype=float)
        return out

    return cdf_at(u_reach), cdf_at(u_clear)


def membership_test(theta: float, sample, corr: IntervalCorrespondence, eta: float) -> bool:
    """Is theta compatible with the sample once intervals are dilated by eta?

    Checks the half-line containment conditions at every order statistic
    Y_(j), with the empirical CDF replaced by its expected values at the
    order statistics: j/(n+1) may not exceed the latent probability of
    intervals reaching down to Y_(j), and the latent probability of
    intervals lying strictly above Y_(j) may not exceed j/(n+1).  The
    plotting positions E F(Y_(j)) = j/(n+1) land strictly inside F_n's jump
    at Y_(j); taking the empirical CDF's raw one-sided values j/n and
    (j-1)/n instead would make the extreme constraints either unsatisfiable
    against a full-support latent (j = n above) or vacuous (j = 1 below).
    Requires a monotone correspondence.
    """
    if not corr.monotone:
        raise ValueError("containment test needs monotone endpoint maps")
    if not (np.isfinite(eta) and eta >= 0.0):
        raise ValueError(f"dilation radius must be finite and >= 0, got {eta}")
    ys = np.sort(np.asarray(sample, dtype=float).ravel())
    n = ys.size
    if n == 0:
        raise ValueError("need at least one observation")
    reach, clear = _reach_clear_probs(corr, ys, theta, corr.dilation + eta)
    levels = np.arange(1, n + 1, dtype=float) / (n + 1)
    if not np.all(levels <= reach):
        return False
    return bool(np.all(clear <= levels))


def confidence_region_scan(sample, radius: float, theta_grid, corr: IntervalCorrespondence,
                           alpha: float) -> RegionResult:
    """Evaluate the containment test over a parameter grid."""
    grid = np.asarray(theta_grid, dtype=float)
    ys = np.sort(np.asarray(sample, dtype=float).ravel())
    member = np.fromiter(
        (membership_test(th, ys, corr, radius) for th in grid),
        dtype=bool, count=grid.size,
    )
    return RegionResult(theta_grid=grid, member=member, radius=radius, alpha=alpha)


def unit_interval_normal_model() -> IntervalCorrespondence:
    """The benchmark design: each latent u maps to [u - 1, u + 1] and the
    latent is N(theta, 1).  Inverses are analytic, so the containment test
    reduces to normal CDF evaluations at the order statistics."""
    return IntervalCorrespondence(
        lower=lambda u, th: u - 1.0,
        upper=lambda u, th: u + 1.0,
        latent_cdf=lambda u, th: ndtr(u - th),
        monotone=True,
        lower_inv=lambda y, th: y + 1.0,
        upper_inv=lambda y, th: y - 1.0,
    )


def cara_portfolio_model(lambda_lo: float, lambda_hi: float) -> IntervalCorrespondence:
    """Risk-aversion bounds from optimal portfolio shares in (lambda_lo,
    lambda_hi): a latent return u > 0 brackets theta in
    [lambda_lo / u, lambda_hi / u], with an exponential(theta) latent.
    Endpoints decrease in u, so this one is tagged non-monotone and only
    supports composition, not the containment test."""
    if not 0.0 < lambda_lo <= lambda_hi:
        raise ValueError("need 0 < lambda_lo <= lambda_hi")
    return IntervalCorrespondence(
        lower=lambda u, th: lambda_lo / u,
        upper=lambda u, th: lambda_hi / u,
        latent_cdf=lambda u, th: -np.expm1(-th * u),
        monotone=False,
        latent_support=(0.0, np.inf),
    )


def cara_identified_set(lambda_lo: float, lambda_hi: float, eta: float = 0.0) -> tuple[float, float]:
    """Identified set [1/lambda_hi, 1/lambda_lo] of the risk-aversion model.

    The dilated constraints 1/(lambda_hi + eta*u) <= theta <=
    1/(lambda_lo - eta*u) must hold for every u > 0; letting u -> 0 the
    dilation drops out, so the set does not depend on eta.  The argument is
    kept for interface symmetry with the scan-based cross-check.
    """
    if not 0.0 < lambda_lo <= lambda_hi:
        raise ValueError("need 0 < lambda_lo <= lambda_hi")
    if not (np.isfinite(eta) and eta >= 0.0):
        raise ValueError(f"dilation radius must be finite and >= 0, got {eta}")
    return (1.0 / lambda_hi, 1.0 / lambda_lo)


def cara_scan_interval(lambda_lo: float, lambda_hi: float, eta: float,
                       theta_step: float = 1e-3,
                       u_grid=None) -> tuple[float, float]:
    """Grid-based cross-check of the risk-aversion identified set.

    Intersects the per-u constraint intervals over a grid of small u and
    reports the extreme feasible theta values on a theta grid of the given
    step; agrees with the analytic set up to one grid step.
    """
    if not 0.0 < lambda_lo <= lambda_hi:
        raise ValueError("need 0 < lambda_lo <= lambda_hi")
    if theta_step <= 0.0:
        raise ValueError("theta_step must be positive")
    if u_grid is None:
        u_grid = np.linspace(1e-6, 0.05, 200)
    u = np.asarray(u_grid, dtype=float)
    if np.any(u <= 0.0) or np.any(lambda_lo - eta * u <= 0.0):
        raise ValueError("u grid must be positive and keep lambda_lo - eta*u > 0")
    lo_env = np.max(1.0 / (lambda_hi + eta * u))
    hi_env = np.min(1.0 / (lambda_lo - eta * u))
    span_lo = 0.5 / lambda_hi
    span_hi = 2.0 / lambda_lo
    m = int(np.floor((span_hi - span_lo) / theta_step)) + 1
    thetas = span_lo + theta_step * np.arange(m)
    feasible = (thetas >= lo_env) & (thetas <= hi_env)
    if not np.any(feasible):
        raise RuntimeError("scan found no feasible theta; grid too coarse")
    kept = thetas[feasible]
    return (float(kept[0]), float(kept[-1]))


def voting_radius_two_party(p: float, n_district: int, alpha: float) -> float:
    """Gaussian sampling radius for one district's two-party vote share:
    z_{1-alpha/2} * sqrt(p (1-p) / n)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"vote share must lie strictly in (0, 1), got {p}")
    if n_district < 1:
        raise ValueError("district sample size must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    z = float(ndtri(1.0 - alpha / 2.0))
    return z * np.sqrt(p * (1.0 - p) / n_district)


def voting_radius_multiparty(p, n_district: int, alpha: float,
                             mc_draws: int = 100_000, seed: int = 0) -> float:
    """Sup-norm radius for a multiparty vote-share vector.

    Draws from N(0, V/n) with V = diag(p) - p p' (via the exact factor
    diag(sqrt(p)) - p sqrt(p)', which avoids the singular covariance) and
    returns the smallest simulated norm whose empirical coverage reaches
    1 - alpha.
    """
    shares = np.asarray(p, dtype=float).ravel()
    if shares.size < 2:
        raise ValueError("need at least two parties")
    if np.any(shares <= 0.0) or not np.isclose(shares.sum(), 1.0):
        raise ValueError("vote shares must be positive and sum to one")
    if n_district < 1:
        raise ValueError("district sample size must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if mc_draws < 1:
        raise ValueError("need at least one Monte Carlo draw")
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0)))
    root = np.sqrt(shares)
    w = rng.standard_normal((mc_draws, shares.size))
    z = (w * root - (w @ root)[:, None] * shares) / np.sqrt(n_district)
    norms = np.sort(np.max(np.abs(z), axis=1))
    k = max(1, int(np.ceil((1.0 - alpha) * mc_draws)))
    return float(norms[k - 1])
