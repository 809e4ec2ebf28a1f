"""Average convergence rate measurement for elitist evolutionary algorithms."""
from ._accel import BACKEND
from .engine import (
    AdaptiveCoordinate, AdaptiveNorm, EaConfig, InvariantSigma, RunTrajectory, mutate,
    run_batch, run_ea, select_elitist,
)
from .metrics import (
    AcrSeries, ErrorSeries, acr_series, error_series, log_error_series, ratio_series,
    sample_mean_fitness,
)
from .objectives import (
    IntervalSet, ObjectiveSpec, RegionClass, classify_region_1d, evaluate, get_objective,
    local_optima_1d, rastrigin1d, rastrigin2d, sphere2d, sublevel_intervals_1d,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AdaptiveCoordinate", "AdaptiveNorm", "EaConfig", "InvariantSigma",
    "RunTrajectory", "mutate", "run_batch", "run_ea", "select_elitist", "AcrSeries",
    "ErrorSeries", "acr_series", "error_series", "log_error_series", "ratio_series",
    "sample_mean_fitness", "IntervalSet", "ObjectiveSpec", "RegionClass", "classify_region_1d",
    "evaluate", "get_objective", "local_optima_1d", "rastrigin1d", "rastrigin2d", "sphere2d",
    "sublevel_intervals_1d",
]
