"""(1+1) elitist evolutionary algorithm with Gaussian mutation.

Run ``seed`` owns the stream ``stream_key(seed)``; generation ``t`` reads the
fixed draw block ``[t * D, (t + 1) * D)`` with ``D = 2 * ceil(d / 2)``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .objectives import ObjectiveSpec, evaluate
from .rng import CounterRNG, stream_key


class EngineError(ValueError):
    pass


class NumericError(ArithmeticError):
    """A fitness evaluation produced a non-finite value."""

    def __init__(self, seed: int, generation: int):
        super().__init__(f"non-finite fitness in run seed={seed} at generation {generation}")
        self.seed = seed
        self.generation = generation


@dataclass(frozen=True)
class InvariantSigma:
    """Fixed per-coordinate standard deviations: a landscape-invariant generator."""

    sigma: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(float(s) for s in np.atleast_1d(self.sigma)))
        if not self.sigma or any(not (s > 0.0 and np.isfinite(s)) for s in self.sigma):
            raise EngineError(f"InvariantSigma needs positive finite sigma, got {self.sigma}")

    name = "invariant"
    code = kernels.STRAT_INVARIANT

    def sigma_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.array(self.sigma), x.shape).astype(float)

    def sigma_vector(self, dim: int) -> np.ndarray:
        s = np.array(self.sigma, dtype=float)
        if s.shape[0] == 1:
            return np.full(dim, s[0])
        if s.shape[0] != dim:
            raise EngineError(f"sigma has {s.shape[0]} entries for a {dim}-D objective")
        return s


@dataclass(frozen=True)
class AdaptiveNorm:
    """Every coordinate uses ``scale * ||x||_2``."""

    scale: float = 1.0

    def __post_init__(self):
        if not (self.scale > 0.0 and np.isfinite(self.scale)):
            raise EngineError(f"AdaptiveNorm scale must be positive, got {self.scale}")

    name = "adaptive_norm"
    code = kernels.STRAT_ADAPTIVE_NORM

    def sigma_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.full(x.shape, self.scale * np.sqrt(np.sum(x * x)))

    def sigma_vector(self, dim: int) -> np.ndarray:
        return np.ones(dim)


@dataclass(frozen=True)
class AdaptiveCoordinate:
    """Coordinate ``i`` uses ``|x_i|`` (diagonal covariance ``diag(x**2)``)."""

    name = "adaptive_coordinate"
    code = kernels.STRAT_ADAPTIVE_COORD

    def sigma_at(self, x) -> np.ndarray:
        return np.abs(np.asarray(x, dtype=float))

    def sigma_vector(self, dim: int) -> np.ndarray:
        return np.ones(dim)


MutationStrategy = Union[InvariantSigma, AdaptiveNorm, AdaptiveCoordinate]


def _scale(strategy: MutationStrategy) -> float:
    return float(getattr(strategy, "scale", 1.0))


@dataclass(frozen=True)
class EaConfig:
    objective: ObjectiveSpec
    strategy: MutationStrategy
    x0: tuple[float, ...]
    generations: int
    population_size: int = 1

    def __post_init__(self):
        x0 = tuple(float(v) for v in np.atleast_1d(self.x0))
        object.__setattr__(self, "x0", x0)
        if len(x0) != self.objective.dimension:
            raise EngineError(
                f"x0 has {len(x0)} coordinates, objective needs {self.objective.dimension}")
        if int(self.generations) < 1:
            raise EngineError("generations must be >= 1")
        if self.population_size != 1:
            raise NotImplementedError("only the (1+1) EA (population_size=1) is implemented")
        if not self.objective.contains(x0):
            raise EngineError("x0 lies outside the objective's domain")


@dataclass(frozen=True)
class RunTrajectory:
    seed: int
    best_fitness: np.ndarray

    @property
    def generations(self) -> int:
        return self.best_fitness.shape[0] - 1


def mutate(x, strategy: MutationStrategy, rng: CounterRNG) -> np.ndarray:
    """Child ``x + z`` with ``z_i ~ N(0, sigma_i(x)**2)``."""
    x = np.asarray(x, dtype=float)
    # sigma terms must match the kernel arithmetic exactly
    if isinstance(strategy, AdaptiveNorm):
        sq = x[0] * x[0]
        for v in x[1:]:
            sq = sq + v * v
        sigma = np.full(x.shape, strategy.scale * np.sqrt(sq))
    else:
        sigma = strategy.sigma_at(x)
    return x + sigma * rng.normals(x.shape[0])


def select_elitist(objective: ObjectiveSpec, parent, child):
    """Child replaces parent only if it is in the domain and strictly better."""
    if not objective.contains(child):
        return parent
    return child if evaluate(objective, child) < evaluate(objective, parent) else parent


def _evolve(config: EaConfig, seeds: Sequence[int]) -> np.ndarray:
    obj = config.objective
    lower, upper = obj.bounds()
    keys = np.array([stream_key(s) for s in seeds], dtype=np.uint64)
    F, bad = kernels.evolve(
        obj.code, config.strategy.code, config.strategy.sigma_vector(obj.dimension),
        _scale(config.strategy), np.array(config.x0, dtype=float), lower, upper,
        int(config.generations), keys)
    for i in np.flatnonzero(bad >= 0):
        raise NumericError(int(seeds[i]), int(bad[i]))
    return F


def run_ea(config: EaConfig, seed: int) -> RunTrajectory:
    return RunTrajectory(int(seed), _evolve(config, [int(seed)])[0])


def run_batch(config: EaConfig, seeds: Sequence[int], workers: int = 1) -> list[RunTrajectory]:
    """One trajectory per seed, in seed order, regardless of ``workers``."""
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise EngineError("run_batch needs at least one seed")
    if len(set(seeds)) != len(seeds):
        raise EngineError("seeds must be pairwise distinct")
    workers = max(1, min(int(workers), len(seeds)))
    if workers == 1:
        F = _evolve(config, seeds)
    else:
        chunks = np.array_split(np.arange(len(seeds)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _evolve(config, [seeds[i] for i in idx]), chunks))
        F = np.concatenate(parts, axis=0)
    return [RunTrajectory(s, F[i]) for i, s in enumerate(seeds)]


def fitness_matrix(trajectories: Sequence[RunTrajectory]) -> np.ndarray:
    return np.stack([tr.best_fitness for tr in trajectories])
