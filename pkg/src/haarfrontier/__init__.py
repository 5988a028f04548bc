"""Frontier estimation for planar Poisson point clouds.

Estimates the upper boundary of the region a homogeneous Poisson process is
observed in, by averaging per-cell maxima through a Haar expansion, with a
minima-based correction for the systematic downward bias. Analytic oracles
for the cell-maximum law and the three limit distributions back a Monte
Carlo experiment harness.
"""

__version__ = "0.1.0"

from .estimators import (
    EstimateBundle,
    coefficient_estimates,
    corrected_estimate,
    geffroy_estimate,
    haar_ev_estimate,
    haar_ev_estimate_at,
    minima_mean,
    oracle_corrected_estimate,
    residuals,
)
from .experiments import (
    ErrorMetrics,
    ExperimentConfig,
    error_metrics,
    gaussian_experiment,
    gumbel_experiment,
    local_bias_experiment,
    mise_experiment,
    run_experiment,
    supnorm_experiment,
    variance_experiment,
    weibull_experiment,
    zn_moments_experiment,
)
from .frontiers import (
    FrontierSpec,
    affine_frontier,
    area,
    constant_frontier,
    parse_frontier,
    sine_frontier,
    two_level_frontier,
)
from .haar import (
    DyadicIndex,
    DyadicInterval,
    dirichlet_kernel,
    dirichlet_kernel_sum,
    dyadic_index,
    haar_coefficient,
    haar_eval,
    haar_interval,
    haar_step,
    truncated_expansion,
    uniform_cell_index,
)
from .oracles import (
    LimitLaw,
    Normalization,
    cell_cdf,
    cell_max_mean,
    cell_max_variance,
    ks_statistic,
    limit_cdf,
    limit_law,
    normalizations,
)
from .process import CellStats, PartitionConfig, PointSample, cell_stats, simulate
from .quadrature import QuadratureError, adaptive_simpson
from .stepfun import StepFunction

__all__ = [
    "__version__",
    "EstimateBundle",
    "coefficient_estimates",
    "corrected_estimate",
    "geffroy_estimate",
    "haar_ev_estimate",
    "haar_ev_estimate_at",
    "minima_mean",
    "oracle_corrected_estimate",
    "residuals",
    "ErrorMetrics",
    "ExperimentConfig",
    "error_metrics",
    "gaussian_experiment",
    "gumbel_experiment",
    "local_bias_experiment",
    "mise_experiment",
    "run_experiment",
    "supnorm_experiment",
    "variance_experiment",
    "weibull_experiment",
    "zn_moments_experiment",
    "FrontierSpec",
    "affine_frontier",
    "area",
    "constant_frontier",
    "parse_frontier",
    "sine_frontier",
    "two_level_frontier",
    "DyadicIndex",
    "DyadicInterval",
    "dirichlet_kernel",
    "dirichlet_kernel_sum",
    "dyadic_index",
    "haar_coefficient",
    "haar_eval",
    "haar_interval",
    "haar_step",
    "truncated_expansion",
    "uniform_cell_index",
    "LimitLaw",
    "Normalization",
    "cell_cdf",
    "cell_max_mean",
    "cell_max_variance",
    "ks_statistic",
    "limit_cdf",
    "limit_law",
    "normalizations",
    "CellStats",
    "PartitionConfig",
    "PointSample",
    "cell_stats",
    "simulate",
    "QuadratureError",
    "adaptive_simpson",
    "StepFunction",
]
