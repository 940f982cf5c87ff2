"""Depths for functional data, depth-trimmed means, and a Monte Carlo
robustness benchmark for the resulting location estimators."""

from .core import (
    DataError,
    DepthVector,
    DimensionMismatchError,
    FunctionalDataError,
    FunctionalSample,
    Grid,
    grid_norm,
    make_grid,
    validate_sample,
)
from .depths import (
    BandwidthError,
    DepthKind,
    DepthMethod,
    band_depth,
    band_fraction,
    compute_depths,
    dominates,
    functional_majority_depth,
    functional_spatial_depth,
    h_mode_depth,
    half_region_depth,
    in_band,
    modified_band_depth,
)
from .estimators import TrimSpec, depth_trimmed_mean, untrimmed_mean
from .evaluation import BenchmarkConfig, ResultTable, ise, run_benchmark, run_replication
from .simulation import CovarianceKernel, ModelSpec, generate_model, gp_sample, make_rng

__version__ = "0.1.0"

__all__ = [
    "BandwidthError", "BenchmarkConfig", "CovarianceKernel", "DataError", "DepthKind",
    "DepthMethod", "DepthVector", "DimensionMismatchError", "FunctionalDataError",
    "FunctionalSample", "Grid", "ModelSpec", "ResultTable", "TrimSpec", "band_depth",
    "band_fraction", "compute_depths", "depth_trimmed_mean", "dominates",
    "functional_majority_depth", "functional_spatial_depth", "generate_model", "gp_sample",
    "grid_norm", "h_mode_depth", "half_region_depth", "in_band", "ise", "make_grid",
    "make_rng", "modified_band_depth", "run_benchmark", "run_replication", "untrimmed_mean",
    "validate_sample",
]
