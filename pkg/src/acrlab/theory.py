"""Transition probabilities into promising regions, analytic and sampled.

Analytic kernels (interval hits, the sphere promising-region integral, the
Rastrigin ``S0`` probability) each pair with a Monte Carlo estimator driven
by the same counter-based streams as the EA, so the two routes can be
compared directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .engine import InvariantSigma, MutationStrategy, _scale
from .objectives import (
    STATIONARY_BOUND, ObjectiveSpec, RegionClass, classify_levels, classify_region_1d,
    evaluate, rastrigin1d, rastrigin_1d, s0_halfwidths, sphere2d,
)
from .rng import stream_key

Z95 = 1.959963984540054
SQRT2 = math.sqrt(2.0)


class TheoryError(ValueError):
    pass


class PointInsideIntervalError(TheoryError):
    """The interval formula assumes the start point lies outside the interval."""


class NoInteriorMaximumError(TheoryError):
    """With ``l = 0`` the hit probability is monotone in sigma."""


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / SQRT2)


def wilson_interval(hits: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n <= 0:
        raise TheoryError("need a positive sample count")
    p = hits / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class ProbabilityEstimate:
    p_hat: float
    samples: int
    ci_half_width: float
    seed: int
    hits: int
    ci_low: float
    ci_high: float

    @classmethod
    def from_counts(cls, hits: int, n: int, seed: int) -> "ProbabilityEstimate":
        lo, hi = wilson_interval(hits, n)
        return cls(hits / n, n, 0.5 * (hi - lo), int(seed), int(hits), lo, hi)

    def standard_error(self, p: float | None = None) -> float:
        p = self.p_hat if p is None else p
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.samples)

    def z_score(self, p: float) -> float:
        """Distance to a reference probability in binomial standard errors at ``p``."""
        se = self.standard_error(p)
        if se == 0.0:
            return 0.0 if self.p_hat == p else math.inf
        return abs(self.p_hat - p) / se


def hit_probability_interval(x: float, a: float, b: float, sigma: float) -> float:
    """Probability that ``x + N(0, sigma**2)`` lands in ``[a, b]``.

    ``x`` may sit on an endpoint (the ``l = 0`` case) but not strictly inside.
    """
    if not a < b:
        raise TheoryError(f"need a < b, got [{a}, {b}]")
    if not sigma > 0.0:
        raise TheoryError("sigma must be positive")
    if a < x < b:
        raise PointInsideIntervalError(f"x={x} lies inside ({a}, {b})")
    lo, up = sorted((abs(a - x), abs(b - x)))
    # upper tails keep precision when both ratios are large
    return normal_cdf(-lo / sigma) - normal_cdf(-up / sigma)


def optimal_sigma(l: float, u: float) -> float:
    """Closed-form maximiser over sigma of the interval hit probability."""
    if l == 0.0:
        raise NoInteriorMaximumError("l = 0: probability decreases in sigma, no interior maximum")
    if not 0.0 < l < u:
        raise TheoryError(f"need 0 < l < u, got l={l}, u={u}")
    return math.sqrt((u * u - l * l) / (2.0 * (math.log(u) - math.log(l))))


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(fun: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-9) -> float:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def adaptive_simpson(fun: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 40) -> float:
    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fun(lm), fun(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb, fm = fun(a), fun(b), fun(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, max_depth)


def sphere_promising_probability(r: float, sigma: float) -> float:
    """Probability that an isotropic 2-D Gaussian step from radius ``r`` lands in the disc of radius ``r``."""
    if not (r > 0.0 and sigma > 0.0):
        raise TheoryError("r and sigma must be positive")
    a = 2.0 * (r / sigma) ** 2
    # 1/2 - exp(-a) * int exp(a sin^2) / pi, folded into one bounded integrand
    integral = adaptive_simpson(lambda th: -math.expm1(-a * math.cos(th) ** 2),
                                0.0, 0.5 * math.pi, tol=1e-10 * min(1.0, a))
    return integral / math.pi


def sphere_lower_bound(r: float, sigma: float) -> float:
    return 0.25 * (1.0 - math.exp(-(r / sigma) ** 2))


@dataclass(frozen=True)
class PromisingRegionQuery:
    objective: ObjectiveSpec
    x: tuple[float, ...]
    rho: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in np.atleast_1d(self.x)))
        if not 0.0 < self.rho <= 1.0:
            raise TheoryError(f"rho must lie in (0, 1], got {self.rho}")

    @property
    def error(self) -> float:
        return abs(evaluate(self.objective, self.x) - self.objective.f_star)


def mc_promising_probability(query: PromisingRegionQuery, strategy: MutationStrategy,
                             n: int, seed: int) -> ProbabilityEstimate:
    """Fraction of mutants ``y`` with ``e(y) < rho * e(x)``."""
    if n < 1000:
        raise TheoryError("use at least 1000 samples")
    err = query.error
    if err <= 0.0:
        raise TheoryError("x is optimal; its promising region is empty")
    obj = query.objective
    hits = kernels.count_promising_hits(
        obj.code, strategy.code, strategy.sigma_vector(obj.dimension), _scale(strategy),
        np.array(query.x, dtype=float), float(obj.f_star), query.rho * err, int(n),
        stream_key(seed))
    return ProbabilityEstimate.from_counts(int(hits), int(n), seed)


def mc_interval_probability(x: float, sigma: float, a: float, b: float, n: int,
                            seed: int) -> ProbabilityEstimate:
    """Fraction of ``x + N(0, sigma**2)`` draws strictly inside ``(a, b)``."""
    hits = kernels.count_interval_hits(float(x), float(sigma), float(a), float(b), int(n),
                                       stream_key(seed))
    return ProbabilityEstimate.from_counts(int(hits), int(n), seed)


def s0_bounds(x: float) -> tuple[float, float]:
    """``(l0, u0)``: distances from ``x`` to the two ends of ``S0 = (-b0, b0)``."""
    ax = abs(float(x))
    b0 = float(s0_halfwidths([float(rastrigin_1d(ax))])[0])
    return abs(ax - b0), ax + b0


def rastrigin_s0_probability(x: float, mode: str = "sigma_equals_x") -> float:
    """Probability that a 1-D Gaussian step with ``sigma = |x|`` lands in ``S0``.

    Outside and Unimodal points have ``S0 = (-|x|, |x|)`` and give
    ``Phi(2) - 1/2``; Multimodal points give ``Phi(1 + h/x) - Phi(1 - h/x)``
    with ``h`` the half-width of ``S0``.
    """
    if mode != "sigma_equals_x":
        raise TheoryError(f"unsupported mode {mode!r}")
    spec = rastrigin1d()
    classify_region_1d(spec, x)  # raises for the optimum
    l0, u0 = s0_bounds(x)
    sigma = abs(float(x))
    return normal_cdf(-l0 / sigma) - normal_cdf(-u0 / sigma)


def multimodal_lower_bound(h_over_x: float) -> float:
    return normal_cdf(1.0 + h_over_x) - normal_cdf(1.0 - h_over_x)


@dataclass(frozen=True)
class MultimodalBound:
    h0_over_x0: float
    x0: float
    C0: float
    C: float


def _multimodal_ratios(xs: np.ndarray) -> np.ndarray:
    levels = rastrigin_1d(xs)
    b0 = s0_halfwidths(levels)
    tags = classify_levels(levels, b0)
    ratio = np.minimum(b0, xs) / xs
    return np.where(tags == RegionClass.MULTIMODAL.value, ratio, np.inf)


def multimodal_bound(spec: ObjectiveSpec | None = None, step: float = 1e-3,
                     refine: bool = True) -> MultimodalBound:
    """Smallest ``h/|x|`` over the Multimodal region and the implied constants.

    A grid scan over ``(0, 10 pi + 2]`` locates the minimum; ``refine`` then
    zooms in with finer grids around it. The region is symmetric, so only
    ``x > 0`` is scanned.
    """
    if spec is not None and spec.dimension != 1:
        raise TheoryError("multimodal bound is defined for the 1-D Rastrigin function")
    xs = np.arange(1, int(math.ceil((STATIONARY_BOUND + 2.0) / step)) + 1) * step
    ratios = _multimodal_ratios(xs)
    k = int(np.argmin(ratios))
    best_x, best = float(xs[k]), float(ratios[k])
    if not np.isfinite(best):  # pragma: no cover
        raise RuntimeError("scan found no multimodal point")
    if refine:
        width = step
        for _ in range(4):
            zoom = np.linspace(max(best_x - width, step * 1e-3), best_x + width, 2001)
            zr = _multimodal_ratios(zoom)
            j = int(np.argmin(zr))
            if zr[j] < best:
                best_x, best = float(zoom[j]), float(zr[j])
            width = 2.0 * width / 2000.0
    c0 = multimodal_lower_bound(best) ** 2
    return MultimodalBound(best, best_x, c0, 0.5 * c0)


@dataclass(frozen=True)
class AdaptiveBound:
    rho0: float
    C_rho: float
    C: float

    @property
    def rate_bound(self) -> float:
        """Limit lower bound ``(1 - rho0) * C_rho`` on the rate."""
        return (1.0 - self.rho0) * self.C_rho


def sphere_adaptive_bound(C0_ratio: float, n: int = 200_000, seed: int = 0,
                          iterations: int = 40) -> AdaptiveBound:
    """Positive-adaptive constants for a sphere generator with ``r / sigma >= C0_ratio``.

    ``C`` is the closed form ``(1 - exp(-C0**2)) / 8``. ``rho0`` is built from
    the continuity argument: bisect for the smallest ``rho`` whose sampled
    probability still exceeds ``P(1) - eps`` (``eps = C``), call the gap to 1
    ``delta`` and take ``rho0 = 1 - delta / 2``. All rho share one sample set,
    so the sampled probability is monotone in rho.
    """
    if not C0_ratio > 0.0:
        raise TheoryError("C0_ratio must be positive")
    C = 0.125 * (1.0 - math.exp(-C0_ratio * C0_ratio))
    sigma = 1.0 / C0_ratio
    target = sphere_promising_probability(1.0, sigma) - C
    spec_x = np.array([1.0, 0.0])
    strat = InvariantSigma((sigma, sigma))
    obj = sphere2d()

    def p_at(rho):
        hits = kernels.count_promising_hits(
            obj.code, strat.code, strat.sigma_vector(2), 1.0, spec_x, 0.0, rho * 1.0, n,
            stream_key(seed))
        return hits / n

    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if p_at(mid) > target:
            hi = mid
        else:
            lo = mid
    delta = 1.0 - hi
    rho0 = 1.0 - 0.5 * delta
    return AdaptiveBound(rho0, p_at(rho0), C)


def adaptive_norm_probability(r: float, scale: float = 1.0) -> float:
    """Promising-region probability on the sphere under ``sigma = scale * ||x||``."""
    return sphere_promising_probability(r, scale * r)
