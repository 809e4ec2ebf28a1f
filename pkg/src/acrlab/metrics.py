"""Error series, average convergence rate, and the one-step comparison metrics.

Undefined entries are stored as NaN. An error is treated as exactly zero
only when it is at or below ``ZERO_TOL``, an underflow guard rather than a
tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import RunTrajectory

ZERO_TOL = 1e-300


class MetricsError(ValueError):
    pass


class DegenerateStartError(MetricsError):
    """The initial error is zero, so the rate is undefined."""


@dataclass(frozen=True)
class ErrorSeries:
    e: np.ndarray
    runs: int = 1

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        if e.ndim != 1 or e.size == 0:
            raise MetricsError("error series must be a non-empty 1-D sequence")
        if np.any(e < 0) or not np.all(np.isfinite(e)):
            raise MetricsError("errors must be finite and non-negative")
        object.__setattr__(self, "e", e)

    def __len__(self):
        return self.e.shape[0]


@dataclass(frozen=True)
class AcrSeries:
    """``R[t]`` aligned with generation ``t``; ``R[0]`` is NaN (rate needs t >= 1)."""

    R: np.ndarray

    def at(self, t: int) -> float:
        if t < 1:
            raise MetricsError("the rate is defined for t >= 1")
        return float(self.R[t])


def sample_mean_fitness(trajectories: Sequence[RunTrajectory], t: int) -> float:
    if not trajectories:
        raise MetricsError("need at least one trajectory")
    acc = 0.0
    for tr in trajectories:
        acc += float(tr.best_fitness[t])
    return acc / len(trajectories)


def mean_fitness_curve(trajectories: Sequence[RunTrajectory]) -> np.ndarray:
    """``sample_mean_fitness`` for every t, summed in run order."""
    if not trajectories:
        raise MetricsError("need at least one trajectory")
    acc = np.zeros_like(np.asarray(trajectories[0].best_fitness, dtype=float))
    for tr in trajectories:
        acc += tr.best_fitness
    return acc / len(trajectories)


def error_series(trajectories: Sequence[RunTrajectory], f_star: float) -> ErrorSeries:
    # mean fitness first, then distance to the optimum
    return ErrorSeries(np.abs(mean_fitness_curve(trajectories) - f_star), len(trajectories))


def acr_series(errors: ErrorSeries) -> AcrSeries:
    e = errors.e
    e0 = e[0]
    if e0 <= ZERO_TOL:
        raise DegenerateStartError("e_0 = 0: the run started at an optimum")
    t = np.arange(e.shape[0], dtype=float)
    R = np.full(e.shape, np.nan)
    pos = e > ZERO_TOL
    with np.errstate(divide="ignore"):
        ratio = e / e0
        R[1:] = 1.0 - np.exp(np.log(ratio[1:]) / t[1:])
    hit = np.flatnonzero(~pos)
    if hit.size:
        R[max(int(hit[0]), 1):] = 1.0
    return AcrSeries(R)


def ratio_series(errors: ErrorSeries) -> np.ndarray:
    """``e[t] / e[t-1]`` for t >= 1 (index 0 is NaN); NaN where ``e[t-1]`` is zero."""
    e = errors.e
    out = np.full(e.shape, np.nan)
    prev = e[:-1]
    ok = prev > ZERO_TOL
    out[1:][ok] = e[1:][ok] / prev[ok]
    return out


def log_error_series(errors: ErrorSeries) -> np.ndarray:
    e = errors.e
    out = np.full(e.shape, np.nan)
    ok = e > ZERO_TOL
    out[ok] = np.log10(e[ok])
    return out
