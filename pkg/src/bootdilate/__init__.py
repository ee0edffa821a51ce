"""Bootstrap-calibrated dilations and confidence regions for models that
identify their parameter only up to an interval-valued correspondence.

The pipeline: match a bootstrap replicate back to the sample with an exact
minimax matching (``matching``), turn the matching costs into a dilation
radius (``bootstrap``), widen the model's intervals by that radius and test
parameter membership through half-line conditions (``intervals``).  The
``quantiles`` module carries the univariate theory (quantile processes and
the Kolmogorov calibration), ``subsampling`` a criterion-function comparator,
and ``experiments``/``cli`` the Monte Carlo drivers.
"""

from .bootstrap import (
    BootstrapConfig,
    BootstrapSummary,
    DilationSpec,
    bootstrap_etas,
    dilation_radius_bootstrap,
    replicate_rng,
    resample,
    select_radius,
)
from .intervals import (
    IntervalCorrespondence,
    RegionResult,
    cara_identified_set,
    cara_portfolio_model,
    cara_scan_interval,
    compose_dilation,
    confidence_region_scan,
    membership_test,
    unit_interval_normal_model,
    voting_radius_multiparty,
    voting_radius_two_party,
)
from .matching import (
    BottleneckMatch,
    PointCloud,
    bottleneck_match,
    brute_force_bottleneck,
    distance,
    pairwise_distances,
    sorted_match_1d,
)
from .quantiles import (
    DensityHandle,
    QuantileFunction,
    bootstrap_quantile_sup,
    empirical_quantile,
    kolmogorov_cdf,
    kolmogorov_quantile,
    oracle_dilation_interval,
    standard_normal_density,
)
from .subsampling import (
    SubsampleConfig,
    criterion_profile,
    criterion_value,
    subsample_suprema,
    subsampling_region,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
