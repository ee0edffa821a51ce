"""Exact minimax (bottleneck) matching between point clouds.

The matching cost used throughout the package is the smallest achievable
value of ``max_j d(a_j, b_sigma(j))`` over permutations ``sigma``; the
minimizing radius is what gets bootstrapped into a dilation.  The solver
does a binary search over the sorted distinct pairwise distances, deciding
feasibility of each threshold with a maximum bipartite matching, so the
returned cost is always an exact element of the distance multiset (no
real-valued bisection error).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

VALID_NORMS = ("sup", "euclidean")


@dataclass
class PointCloud:
    """A finite set of points in R^d with an attached norm tag.

    ``points`` is coerced to a float64 array of shape (n, d); a 1-d input
    is treated as n points on the real line.
    """

    points: np.ndarray
    norm: str = "sup"

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError(f"points must be (n, d), got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("need at least one point in at least one dimension")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        if self.norm not in VALID_NORMS:
            raise ValueError(f"unknown norm {self.norm!r}, expected one of {VALID_NORMS}")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass
class BottleneckMatch:
    """Result of a minimax matching: ``assignment[j]`` pairs point j of the
    first cloud with point ``assignment[j]`` of the second; ``cost`` is the
    largest paired distance."""

    assignment: np.ndarray
    cost: float

    def __post_init__(self) -> None:
        a = np.asarray(self.assignment, dtype=int)
        if sorted(a.tolist()) != list(range(len(a))):
            raise ValueError("assignment is not a permutation")
        if not (np.isfinite(self.cost) and self.cost >= 0.0):
            raise ValueError("cost must be finite and nonnegative")
        self.assignment = a


def distance(x, y, norm: str = "sup") -> float:
    """Distance between two points under the given norm.

    For d=1 both norms reduce to ``abs(x - y)`` and are computed that way,
    so the two norm tags agree bitwise on the line.
    """
    dx = np.asarray(x, dtype=float)
    dy = np.asarray(y, dtype=float)
    if dx.shape != dy.shape:
        raise ValueError(f"dimension mismatch: {dx.shape} vs {dy.shape}")
    diff = np.abs(dx - dy)
    if norm == "sup" or diff.size == 1:
        return float(np.max(diff))
    if norm == "euclidean":
        return float(np.sqrt(np.sum(diff * diff)))
    raise ValueError(f"unknown norm {norm!r}")


def pairwise_distances(a: np.ndarray, b: np.ndarray, norm: str = "sup") -> np.ndarray:
    """Full (n_a, n_b) distance matrix, chunked over rows to bound memory.

    Entry (j, k) is computed with the same arithmetic as ``distance``, so
    matrix entries are bitwise identical to pointwise calls.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[1] != b.shape[1]:
        raise ValueError("point clouds live in different dimensions")
    if norm not in VALID_NORMS:
        raise ValueError(f"unknown norm {norm!r}")
    na, d = a.shape
    out = np.empty((na, b.shape[0]))
    # cap the (chunk, n_b, d) temporary at ~8M doubles
    chunk = max(1, int(8_000_000 // max(1, b.shape[0] * d)))
    for start in range(0, na, chunk):
        stop = min(na, start + chunk)
        diff = np.abs(a[start:stop, None, :] - b[None, :, :])
        if norm == "sup" or d == 1:
            out[start:stop] = diff.max(axis=2)
        else:
            out[start:stop] = np.sqrt(np.sum(diff * diff, axis=2))
    return out


def _matching_at(mask: np.ndarray) -> np.ndarray | None:
    """Perfect matching of rows to columns within ``mask``, or None.

    Feasibility of a distance threshold reduces to existence of a perfect
    matching in the bipartite graph of admissible pairs, solved here as a
    0/1 assignment problem: admissible pairs cost nothing, forbidden pairs
    cost one, and a zero-cost assignment is exactly a perfect matching
    inside the mask.  (csgraph's augmenting-path matcher stalls badly on
    the near-threshold instances this search generates, the assignment
    solver does not.)
    """
    row, col = linear_sum_assignment(np.where(mask, 0.0, 1.0))
    if not mask[row, col].all():
        return None
    perm = np.empty(mask.shape[0], dtype=int)
    perm[row] = col
    return perm


def _threshold_search(dist: np.ndarray, candidates: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest feasible threshold among ``candidates`` plus a matching at it.

    ``candidates`` must be sorted ascending and contain every value of
    ``dist`` (a superset is fine: the optimum is a value of ``dist``, and
    anything below it is infeasible, so the search lands on the same float).
    Starts from the nearest-neighbour lower bound and gallops upward so the
    matching subproblems stay sparse near the optimum.
    """
    n = dist.shape[0]
    if n == 1:
        return np.array([0]), float(dist[0, 0])
    # every row and column must carry at least its nearest neighbour
    lower = max(dist.min(axis=1).max(), dist.min(axis=0).max())
    lo = int(np.searchsorted(candidates, lower))
    perm = _matching_at(dist <= candidates[lo])
    if perm is not None:
        return perm, float(candidates[lo])
    # gallop until feasible, then bisect on the candidate index
    last = len(candidates) - 1
    step = 1
    hi = lo
    perm_hi = None
    while perm_hi is None:
        hi = min(last, hi + step)
        step *= 2
        perm_hi = _matching_at(dist <= candidates[hi])
        if perm_hi is None and hi == last:
            raise RuntimeError("no perfect matching at the largest distance")  # unreachable
    while hi - lo > 1:
        mid = (lo + hi) // 2
        perm_mid = _matching_at(dist <= candidates[mid])
        if perm_mid is None:
            lo = mid
        else:
            hi, perm_hi = mid, perm_mid
    return perm_hi, float(candidates[hi])


def bottleneck_match(a: PointCloud, b: PointCloud) -> BottleneckMatch:
    """Exact minimax matching between two equally sized clouds.

    Parameters
    ----------
    a, b : PointCloud
        Same cardinality, same dimension, same norm tag.

    Returns
    -------
    BottleneckMatch
        ``cost`` is the exact optimum; any matching attaining it may be
        returned when several do.
    """
    if a.n != b.n:
        raise ValueError(f"clouds have different sizes: {a.n} vs {b.n}")
    if a.dim != b.dim:
        raise ValueError(f"clouds have different dimensions: {a.dim} vs {b.dim}")
    if a.norm != b.norm:
        raise ValueError(f"clouds carry different norms: {a.norm!r} vs {b.norm!r}")
    dist = pairwise_distances(a.points, b.points, a.norm)
    candidates = np.unique(dist)
    perm, cost = _threshold_search(dist, candidates)
    return BottleneckMatch(assignment=perm, cost=cost)


def brute_force_bottleneck(a: PointCloud, b: PointCloud) -> BottleneckMatch:
    """Reference solver: enumerate all permutations (n <= 8).

    Ties are broken toward the lexicographically smallest assignment, which
    makes the output reproducible for oracle comparisons.
    """
    if a.n != b.n:
        raise ValueError(f"clouds have different sizes: {a.n} vs {b.n}")
    if a.n > 8:
        raise ValueError("brute force is limited to n <= 8")
    if a.dim != b.dim:
        raise ValueError(f"clouds have different dimensions: {a.dim} vs {b.dim}")
    if a.norm != b.norm:
        raise ValueError(f"clouds carry different norms: {a.norm!r} vs {b.norm!r}")
    dist = pairwise_distances(a.points, b.points, a.norm)
    n = a.n
    rows = np.arange(n)
    best_perm: tuple[int, ...] | None = None
    best_cost = np.inf
    for perm in itertools.permutations(range(n)):
        cost = dist[rows, perm].max()
        if cost < best_cost:
            best_cost = cost
            best_perm = perm
    assert best_perm is not None
    return BottleneckMatch(assignment=np.array(best_perm), cost=float(best_cost))


def sorted_match_1d(a, b) -> BottleneckMatch:
    """Minimax matching on the real line by pairing order statistics.

    Pairing the j-th smallest of ``a`` with the j-th smallest of ``b`` is
    optimal in one dimension, so the cost is
    ``max_j abs(sort(a)[j] - sort(b)[j])`` and the whole thing is
    O(n log n).
    """
    av = np.asarray(a, dtype=float).ravel()
    bv = np.asarray(b, dtype=float).ravel()
    if av.size != bv.size:
        raise ValueError(f"sequences have different lengths: {av.size} vs {bv.size}")
    if av.size == 0:
        raise ValueError("need at least one point")
    if not (np.all(np.isfinite(av)) and np.all(np.isfinite(bv))):
        raise ValueError("values must be finite")
    ia = np.argsort(av, kind="stable")
    ib = np.argsort(bv, kind="stable")
    cost = float(np.max(np.abs(av[ia] - bv[ib])))
    perm = np.empty(av.size, dtype=int)
    perm[ia] = ib
    return BottleneckMatch(assignment=perm, cost=cost)
