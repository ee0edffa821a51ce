"""Monte Carlo experiment drivers behind the command line interface.

All drivers share one determinism scheme: world w of a run seeded with s
draws its sample from the entropy tuple (s, w, 0) and hands the auxiliary
resampling (bootstrap replicates or subsamples) a 64-bit seed derived from
(s, w, 1).  Results therefore depend only on (config, seed), never on how
worlds are scheduled across workers, and CSV output is byte-identical for
identical inputs.
"""

from __future__ import annotations

import csv
import math
import multiprocessing as mp
from dataclasses import dataclass

import numpy as np

from .bootstrap import bootstrap_etas, select_radius
from .intervals import (
    cara_identified_set,
    cara_scan_interval,
    confidence_region_scan,
    unit_interval_normal_model,
)
from .matching import PointCloud
from .subsampling import criterion_profile, subsample_suprema

# the benchmark design identifies theta up to this interval
KNOWN_IDENTIFIED_SET = (-1.0, 1.0)

DEFAULT_SUBSAMPLE_SIZES = {
    50: (40, 45, 48),
    100: (85, 92, 95),
    500: (425, 450, 475),
}

RATE_STUDY_SIZES = (100, 400, 1600)

TABLE_FIELDS = ("design", "n", "alpha", "aux", "reject_rate", "se", "seed")
RATE_FIELDS = ("design", "n", "dimension", "aux", "median_eta", "normalized", "seed")


@dataclass
class ExperimentConfig:
    design: str
    n: int = 100
    mc_reps: int = 500
    bootstrap_reps: int = 500
    num_subsamples: int = 500
    subsample_sizes: tuple[int, ...] | None = None
    alphas: tuple[float, ...] = (0.01, 0.05, 0.10)
    seed: int = 0
    grid: tuple[float, float, float] = (-3.0, 3.0, 0.01)
    dimension: int = 2
    workers: int = 1
    out: str | None = None
    lambda_lo: float = 0.5
    lambda_hi: float = 2.0
    eta: float = 0.1
    inject_mismatch: bool = False

    def __post_init__(self) -> None:
        if self.design not in ("table1", "table2", "rate-study", "cara-check"):
            raise ValueError(f"unknown design {self.design!r}")
        if self.n < 1 or self.mc_reps < 1 or self.bootstrap_reps < 1 or self.num_subsamples < 1:
            raise ValueError("sizes and repetition counts must be positive")
        for a in self.alphas:
            if not 0.0 < a < 1.0:
                raise ValueError(f"alpha must lie in (0, 1), got {a}")
        lo, hi, step = self.grid
        if not (step > 0.0 and lo < hi):
            raise ValueError(f"grid must satisfy lo < hi with positive step, got {self.grid}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.design in ("table1", "table2"):
            reps = self.bootstrap_reps if self.design == "table1" else self.num_subsamples
            for a in self.alphas:
                if math.floor(reps * a) < 1:
                    raise ValueError(
                        f"floor(reps*alpha) = 0 with reps={reps}, alpha={a}; "
                        "the quantile selection needs more replicates")
        if self.design == "rate-study" and self.dimension not in (2, 3):
            raise ValueError("rate study covers d in {2, 3}; d=1 is the table1 machinery")


def theta_grid(spec: tuple[float, float, float]) -> np.ndarray:
    """Grid lo, lo+step, ..., capped at hi, rounded to 10 decimals so that
    decimal steps land exactly on decimal endpoints (the identified-set
    endpoints must be testable grid points)."""
    lo, hi, step = spec
    m = int(math.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(m + 1), 10)


def _derived_seed(seed: int, world: int) -> int:
    return int(np.random.SeedSequence((seed, world, 1)).generate_state(1, np.uint64)[0])


def _world_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, *key)))


def _map_worlds(worker, argses, workers: int):
    if workers <= 1:
        return [worker(a) for a in argses]
    with mp.Pool(workers) as pool:
        return pool.map(worker, argses)


def _in_set_indices(grid: np.ndarray) -> np.ndarray:
    lo, hi = KNOWN_IDENTIFIED_SET
    idx = np.nonzero((grid >= lo) & (grid <= hi))[0]
    if idx.size == 0:
        raise ValueError("theta grid does not intersect the identified set")
    return idx


def _se(rate: float, reps: int) -> float:
    return math.sqrt(rate * (1.0 - rate) / reps)


def _table1_world(args) -> list[tuple[bool, bool]]:
    w, seed, n, replicates, alphas, grid_spec = args
    grid = theta_grid(grid_spec)
    inside = _in_set_indices(grid)
    sample = _world_rng(seed, w, 0).standard_normal(n)
    etas = bootstrap_etas(PointCloud(sample), replicates, _derived_seed(seed, w))
    corr = unit_interval_normal_model()
    ys = np.sort(sample)
    out = []
    for alpha in alphas:
        radius = select_radius(etas, alpha)
        region = confidence_region_scan(ys, radius, grid, corr, alpha)
        covered = region.member[inside]
        out.append((not bool(covered.all()),
                    not bool(covered[0] and covered[-1])))
    return out


def run_table1(config: ExperimentConfig) -> list[dict]:
    """Coverage experiment for the bootstrap-dilated region on the benchmark
    design.  One row per alpha; ``reject_rate`` counts worlds where some
    identified-set grid point is excluded, ``reject_rate_endpoints`` only
    looks at the two extreme in-set grid points (reported in the summary,
    not the CSV)."""
    argses = [(w, config.seed, config.n, config.bootstrap_reps, tuple(config.alphas), config.grid)
              for w in range(config.mc_reps)]
    results = _map_worlds(_table1_world, argses, config.workers)
    rows = []
    for i, alpha in enumerate(config.alphas):
        grid_rate = sum(r[i][0] for r in results) / config.mc_reps
        end_rate = sum(r[i][1] for r in results) / config.mc_reps
        rows.append({
            "design": "table1", "n": config.n, "alpha": float(alpha),
            "aux": config.bootstrap_reps, "reject_rate": grid_rate,
            "se": _se(grid_rate, config.mc_reps), "seed": config.seed,
            "reject_rate_endpoints": end_rate,
        })
    return rows


def _table2_world(args) -> list[bool]:
    w, seed, n, size, num_subsamples, alphas, grid_spec = args
    grid = theta_grid(grid_spec)
    inside = _in_set_indices(grid)
    sample = _world_rng(seed, w, 0).standard_normal(n)
    sups = subsample_suprema(sample, size, num_subsamples, _derived_seed(seed, w),
                             grid[inside])
    profile = criterion_profile(sample, grid)
    out = []
    for alpha in alphas:
        c_hat = select_radius(sups, alpha)
        member = profile <= c_hat
        out.append(not bool(member[inside].all()))
    return out


def run_table2(config: ExperimentConfig) -> list[dict]:
    """Coverage experiment for the criterion-subsampling comparator.  One
    row per (subsample size, alpha)."""
    sizes = config.subsample_sizes
    if not sizes:
        if config.n not in DEFAULT_SUBSAMPLE_SIZES:
            raise ValueError(
                f"no default subsample sizes for n={config.n}; pass --subsample-size")
        sizes = DEFAULT_SUBSAMPLE_SIZES[config.n]
    rows = []
    for size in sizes:
        argses = [(w, config.seed, config.n, size, config.num_subsamples,
                   tuple(config.alphas), config.grid)
                  for w in range(config.mc_reps)]
        results = _map_worlds(_table2_world, argses, config.workers)
        for i, alpha in enumerate(config.alphas):
            rate = sum(r[i] for r in results) / config.mc_reps
            rows.append({
                "design": "table2", "n": config.n, "alpha": float(alpha),
                "aux": size, "reject_rate": rate,
                "se": _se(rate, config.mc_reps), "seed": config.seed,
            })
    return rows


def _rate_world(args) -> np.ndarray:
    w, seed, n, dim, replicates = args
    pts = _world_rng(seed, n, w, 0).random((n, dim))
    boot_seed = int(np.random.SeedSequence((seed, n, w, 1)).generate_state(1, np.uint64)[0])
    return bootstrap_etas(PointCloud(pts, norm="sup"), replicates, boot_seed)


def run_rate_study(config: ExperimentConfig) -> list[dict]:
    """Median matching cost for uniform clouds on the unit cube at the three
    canonical sizes, with the dimension-specific normalization that should
    be flat in n:  eta * sqrt(n) / (ln n)^(3/4) for d=2 and
    eta * (n / ln n)^(1/d) for d >= 3."""
    rows = []
    for n in RATE_STUDY_SIZES:
        argses = [(w, config.seed, n, config.dimension, config.bootstrap_reps)
                  for w in range(config.mc_reps)]
        etas = np.concatenate(_map_worlds(_rate_world, argses, config.workers))
        med = float(np.median(etas))
        if config.dimension == 2:
            normalized = med * math.sqrt(n) / math.log(n) ** 0.75
        else:
            normalized = med * (n / math.log(n)) ** (1.0 / config.dimension)
        rows.append({
            "design": "rate-study", "n": n, "dimension": config.dimension,
            "aux": config.bootstrap_reps, "median_eta": med,
            "normalized": normalized, "seed": config.seed,
        })
    return rows


@dataclass
class CaraCheckResult:
    analytic: tuple[float, float]
    scanned: tuple[float, float]
    step: float
    ok: bool


def run_cara_check(config: ExperimentConfig) -> CaraCheckResult:
    """Cross-check the analytic risk-aversion identified set against the
    constraint-intersection grid scan; they must agree to one grid step."""
    step = config.grid[2]
    analytic = cara_identified_set(config.lambda_lo, config.lambda_hi, config.eta)
    if config.inject_mismatch:
        # negative control: a deliberately wrong closed form
        analytic = (analytic[0] + 10.0 * step, analytic[1] - 10.0 * step)
    scanned = cara_scan_interval(config.lambda_lo, config.lambda_hi, config.eta,
                                 theta_step=step)
    ok = (abs(analytic[0] - scanned[0]) <= step + 1e-12
          and abs(analytic[1] - scanned[1]) <= step + 1e-12)
    return CaraCheckResult(analytic=analytic, scanned=scanned, step=step, ok=ok)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[dict], path: str, fields: tuple[str, ...]) -> None:
    """UTF-8, LF line endings, header row; float cells use repr so identical
    runs produce identical bytes."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row[f]) for f in fields])


def format_table(rows: list[dict], fields: tuple[str, ...]) -> str:
    header = [list(fields)]
    body = [[_fmt(row[f]) for f in fields] for row in rows]
    widths = [max(len(line[i]) for line in header + body) for i in range(len(fields))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip()
             for line in header + body]
    return "\n".join(lines)
