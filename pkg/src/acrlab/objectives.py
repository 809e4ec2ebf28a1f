"""Benchmark objectives and the 1-D Rastrigin landscape geometry.

The 1-D Rastrigin function ``f(x) = 10 + x**2 - 10 cos(2 pi x)`` is analysed
exactly through its stationary points. Between consecutive zeros of ``f''``
the derivative is strictly monotone, so each such piece brackets at most one
stationary point, and between consecutive stationary points ``f`` itself is
monotone. Every level-set crossing is therefore bracketed and bisected
without relying on a sampling step.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels


class ObjectiveError(ValueError):
    """Raised for arguments outside an objective's contract."""


class DomainError(ObjectiveError):
    """Raised when a point lies outside an objective's box domain."""


class UndefinedRegionError(ObjectiveError):
    """Raised when a region is requested for a global optimizer."""


class ObjectiveId(str, enum.Enum):
    SPHERE_2D = "sphere2d"
    RASTRIGIN_2D = "rastrigin2d"
    RASTRIGIN_1D = "rastrigin1d"


@dataclass(frozen=True)
class ObjectiveSpec:
    id: ObjectiveId
    dimension: int
    f_star: float
    optimizers: tuple[tuple[float, ...], ...]
    lower: tuple[float, ...] | None = None
    upper: tuple[float, ...] | None = None
    code: int = field(default=kernels.OBJ_SPHERE, repr=False)

    def __post_init__(self):
        if (self.lower is None) != (self.upper is None):
            raise ObjectiveError("domain needs both lower and upper bounds")
        if self.lower is not None:
            if len(self.lower) != self.dimension or len(self.upper) != self.dimension:
                raise ObjectiveError("domain bounds must match the dimension")
            if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
                raise ObjectiveError("domain lower bound exceeds upper bound")

    @property
    def has_domain(self) -> bool:
        return self.lower is not None

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Domain box as float arrays, infinite when no box is set."""
        if self.lower is None:
            return np.full(self.dimension, -np.inf), np.full(self.dimension, np.inf)
        return np.array(self.lower, dtype=float), np.array(self.upper, dtype=float)

    def contains(self, x) -> bool:
        if self.lower is None:
            return True
        x = np.asarray(x, dtype=float)
        lo, hi = self.bounds()
        return bool(np.all((x >= lo) & (x <= hi)))

    def with_domain(self, lower: Sequence[float], upper: Sequence[float]) -> "ObjectiveSpec":
        return ObjectiveSpec(self.id, self.dimension, self.f_star, self.optimizers,
                             tuple(map(float, lower)), tuple(map(float, upper)), self.code)

    def evaluate(self, x) -> float:
        return evaluate(self, x)


def sphere2d() -> ObjectiveSpec:
    return ObjectiveSpec(ObjectiveId.SPHERE_2D, 2, 0.0, ((0.0, 0.0),), code=kernels.OBJ_SPHERE)


def rastrigin2d() -> ObjectiveSpec:
    return ObjectiveSpec(ObjectiveId.RASTRIGIN_2D, 2, 0.0, ((0.0, 0.0),), code=kernels.OBJ_RASTRIGIN)


def rastrigin1d() -> ObjectiveSpec:
    return ObjectiveSpec(ObjectiveId.RASTRIGIN_1D, 1, 0.0, ((0.0,),), code=kernels.OBJ_RASTRIGIN)


_FACTORIES = {
    ObjectiveId.SPHERE_2D: sphere2d,
    ObjectiveId.RASTRIGIN_2D: rastrigin2d,
    ObjectiveId.RASTRIGIN_1D: rastrigin1d,
}


def get_objective(name: str | ObjectiveId) -> ObjectiveSpec:
    try:
        return _FACTORIES[ObjectiveId(name)]()
    except ValueError:
        known = ", ".join(o.value for o in ObjectiveId)
        raise ObjectiveError(f"unknown objective {name!r} (known: {known})") from None


def _as_point(spec: ObjectiveSpec, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or x.shape[0] != spec.dimension:
        raise ObjectiveError(
            f"{spec.id.value} expects {spec.dimension} coordinates, got shape {x.shape}")
    return x


def evaluate(spec: ObjectiveSpec, x) -> float:
    """Exact fitness of one point; uses the same kernel as the EA loop."""
    x = _as_point(spec, x)
    if not spec.contains(x):
        raise DomainError(f"point {x.tolist()} lies outside the domain of {spec.id.value}")
    return float(kernels.evaluate_points(spec.code, x[None, :])[0])


def rastrigin_1d(y):
    """Vectorised ``f_R1``; matches the kernel arithmetic term by term."""
    y = np.asarray(y, dtype=float)
    return (10.0 + y * y) - 10.0 * np.cos(2.0 * np.pi * y)


def rastrigin_1d_derivative(y):
    y = np.asarray(y, dtype=float)
    return 2.0 * y + 20.0 * np.pi * np.sin(2.0 * np.pi * y)


def _rastrigin_1d_curvature(y):
    return 2.0 + 40.0 * np.pi**2 * np.cos(2.0 * np.pi * y)


def _require_r1(spec: ObjectiveSpec):
    if spec.id is not ObjectiveId.RASTRIGIN_1D:
        raise ObjectiveError(f"1-D landscape analysis needs rastrigin1d, got {spec.id.value}")


def bisect_root(fun, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    """Root of ``fun`` bracketed by a sign change on ``[lo, hi]``."""
    flo = fun(lo)
    if flo == 0.0:
        return lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            break
        fm = fun(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


class StationaryPoint(NamedTuple):
    x: float
    is_minimum: bool
    is_global: bool


STATIONARY_BOUND = 10.0 * math.pi


@lru_cache(maxsize=1)
def _positive_stationary() -> tuple[np.ndarray, np.ndarray]:
    # f'' vanishes at k +- c; f' is strictly monotone between those points.
    c = math.acos(-1.0 / (20.0 * math.pi**2)) / (2.0 * math.pi)
    k_max = int(math.ceil(STATIONARY_BOUND)) + 1
    cuts = sorted({k + s * c for k in range(k_max + 1) for s in (-1, 1) if k + s * c > 0})
    deriv = lambda v: float(rastrigin_1d_derivative(v))  # noqa: E731
    roots = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if lo > STATIONARY_BOUND:
            break
        if deriv(lo) == 0.0 or (deriv(lo) < 0.0) != (deriv(hi) < 0.0):
            roots.append(bisect_root(deriv, lo, hi, tol=0.0))
    xs = np.array(roots)
    return xs, _rastrigin_1d_curvature(xs) > 0.0


def local_optima_1d(spec: ObjectiveSpec) -> list[StationaryPoint]:
    """All stationary points of ``f_R1``, sorted, with minima flagged.

    The list is exactly symmetric: the negative half mirrors the positive
    half and 0 is the global minimizer.
    """
    _require_r1(spec)
    xs, is_min = _positive_stationary()
    pos = [StationaryPoint(float(v), bool(m), False) for v, m in zip(xs, is_min)]
    neg = [StationaryPoint(-p.x, p.is_minimum, False) for p in reversed(pos)]
    return neg + [StationaryPoint(0.0, True, True)] + pos


@lru_cache(maxsize=1)
def _stationary_tables():
    xs, is_min = _positive_stationary()
    fx = rastrigin_1d(xs)
    return xs, np.maximum.accumulate(fx), xs[is_min], fx[is_min]


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint intervals; membership follows the strict level test."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        prev_hi = -math.inf
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ObjectiveError(f"empty interval ({lo}, {hi})")
            if lo < prev_hi:
                raise ObjectiveError("intervals overlap or are unsorted")
            prev_hi = hi

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def contains(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (y > lo) & (y < hi)
        return out

    def negated(self) -> "IntervalSet":
        return IntervalSet(tuple((-hi, -lo) for lo, hi in reversed(self.intervals)))

    def component_of(self, y: float) -> tuple[float, float] | None:
        for lo, hi in self.intervals:
            if lo < y < hi:
                return lo, hi
        return None


def sublevel_intervals_1d(spec: ObjectiveSpec, x: float) -> IntervalSet:
    """Decomposition of ``{y : f_R1(y) < f_R1(x)}`` into disjoint intervals."""
    _require_r1(spec)
    x = float(x)
    if not math.isfinite(x):
        raise ObjectiveError("query point must be finite")
    level = float(rastrigin_1d(x))
    if level <= spec.f_star:
        return IntervalSet()
    xs, _ = _positive_stationary()
    reach = max(abs(x) + 1.0, STATIONARY_BOUND + 1.0, math.sqrt(level) + 1.0)
    knots = np.concatenate(([0.0], xs, [reach]))
    g = rastrigin_1d(knots) - level
    gap = lambda v: float(rastrigin_1d(v)) - level  # noqa: E731
    # Walk the half-line y >= 0 piece by piece. g(0) < 0: we start inside.
    half = []
    start = 0.0
    inside = True
    for i in range(len(knots) - 1):
        a, b = knots[i], knots[i + 1]
        ga, gb = g[i], g[i + 1]
        if inside and gb >= 0.0:
            end = b if gb == 0.0 else bisect_root(gap, a, b)
            half.append((start, end))
            inside = False
        elif not inside and gb < 0.0:
            start = a if ga == 0.0 else bisect_root(gap, a, b)
            inside = True
    if inside:  # pragma: no cover - reach guarantees an exit
        raise RuntimeError("sublevel scan did not terminate")
    b0 = half[0][1]
    rest = [(lo, hi) for lo, hi in half[1:] if lo < hi]
    full = [(-hi, -lo) for lo, hi in reversed(rest)] + [(-b0, b0)] + rest
    return IntervalSet(tuple(full))


def s0_halfwidths(levels) -> np.ndarray:
    """``b0`` for each level: ``S0 = (-b0, b0)`` is the component holding 0."""
    xs, runmax, _, _ = _stationary_tables()
    return kernels.s0_halfwidth(np.ascontiguousarray(levels, dtype=float), xs, runmax)


class RegionClass(str, enum.Enum):
    OUTSIDE = "Outside"
    MULTIMODAL = "Multimodal"
    UNIMODAL = "Unimodal"


def classify_levels(levels, b0) -> np.ndarray:
    """Vectorised region tags (as strings) for positive levels with known ``b0``.

    Every bounded component of a strict sublevel set holds a local minimizer,
    so a second component exists iff some non-global minimizer beyond ``b0``
    sits below the level.
    """
    _, _, mins, fmins = _stationary_tables()
    levels = np.asarray(levels, dtype=float)[:, None]
    b0 = np.asarray(b0, dtype=float)[:, None]
    below = fmins[None, :] < levels
    multimodal = np.any(below & (mins[None, :] > b0), axis=1)
    covers_local = np.any(mins[None, :] < b0, axis=1)
    return np.where(multimodal, RegionClass.MULTIMODAL.value,
                    np.where(covers_local, RegionClass.OUTSIDE.value, RegionClass.UNIMODAL.value))


def classify_region_1d(spec: ObjectiveSpec, x: float) -> RegionClass:
    """Outside / Multimodal / Unimodal tag of a non-optimal point.

    Multimodal when the sublevel set through ``x`` has several components.
    Otherwise the single interval ``(-b0, b0)`` is Unimodal if it holds no
    non-global local minimizer and Outside if it does.
    """
    _require_r1(spec)
    level = float(rastrigin_1d(float(x)))
    if level <= spec.f_star:
        raise UndefinedRegionError(f"x={x} is a global optimizer; no region is defined")
    b0 = s0_halfwidths([level])
    return RegionClass(str(classify_levels([level], b0)[0]))
