"""Numerical verification battery behind ``acrlab verify``.

Each check returns one :class:`CheckResult`; ``verify_all`` runs the fixed
list in ``CHECK_IDS`` order. Rate checks are trend assertions over a run
budget with stated thresholds, never limit claims.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import theory
from .engine import AdaptiveCoordinate, AdaptiveNorm, EaConfig, InvariantSigma, run_batch
from .metrics import AcrSeries, ErrorSeries, acr_series, error_series
from .objectives import rastrigin1d, rastrigin2d, rastrigin_1d, s0_halfwidths, sphere2d
from .rng import derive_seeds

TABLE_CHECKPOINTS = (1, 101, 201, 301, 401)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    value: float
    bound: float
    ci: str = ""

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass(frozen=True)
class TrendReport:
    check_id: str
    passed: bool
    checkpoints: tuple[int, ...]
    rates: tuple[float, ...]
    bound: float

    def as_result(self) -> CheckResult:
        return CheckResult(self.check_id, self.passed, self.rates[-1], self.bound,
                           " ".join(f"R{t}={r:.4f}" for t, r in zip(self.checkpoints, self.rates)))


def batch_rates(config: EaConfig, runs: int, seed: int) -> AcrSeries:
    trajectories = run_batch(config, derive_seeds(seed, runs))
    return acr_series(error_series(trajectories, config.objective.f_star))


def verify_invariant_decay(config: EaConfig, runs: int = 100, seed: int = 0,
                    checkpoints: Sequence[int] = TABLE_CHECKPOINTS, threshold: float = 0.10,
                    check_id: str = "invariant_decay") -> TrendReport:
    """Invariant generator: the rate falls over the budget and ends below ``threshold``."""
    if not isinstance(config.strategy, InvariantSigma):
        raise theory.TheoryError("the decay check needs a landscape-invariant strategy")
    R = batch_rates(config, runs, seed)
    rates = tuple(R.at(t) for t in checkpoints)
    ok = rates[-1] < rates[0] and rates[-1] <= threshold
    return TrendReport(check_id, ok, tuple(checkpoints), rates, threshold)


def verify_adaptive_floor(config: EaConfig, C: float, runs: int = 100, seed: int = 0,
                    checkpoints: Sequence[int] = TABLE_CHECKPOINTS, burn_in: int = 1,
                    band: float = 0.10, check_id: str = "adaptive_floor") -> TrendReport:
    """Adaptive generator: the rate stays at or above ``C`` after burn-in and settles.

    Settling means the last two checkpoints are within ``band`` of each other,
    or the error hit exactly zero (rate 1).
    """
    if isinstance(config.strategy, InvariantSigma):
        raise theory.TheoryError("the floor check needs an adaptive strategy")
    R = batch_rates(config, runs, seed)
    rates = tuple(R.at(t) for t in checkpoints)
    late = [r for t, r in zip(checkpoints, rates) if t >= burn_in]
    settled = rates[-1] == 1.0 or abs(rates[-1] - rates[-2]) <= band
    return TrendReport(check_id, all(r >= C for r in late) and settled, tuple(checkpoints),
                       rates, C)


# names used in the public operation list
verify_theorem1 = verify_invariant_decay
verify_theorem2 = verify_adaptive_floor


def stalled_rate(ratio: float = 0.5, until: int = 10_000) -> float:
    """Rate at ``until`` for a series frozen at ``ratio * e0`` after one step."""
    e = np.full(until + 1, ratio)
    e[0] = 1.0
    return acr_series(ErrorSeries(e)).at(until)


def rastrigin_hits_zero(runs: int = 100, generations: int = 500, seed: int = 0,
                        checkpoints: Sequence[int] = TABLE_CHECKPOINTS,
                        first: int = 201) -> tuple[bool, tuple[float, ...]]:
    config = EaConfig(rastrigin2d(), AdaptiveCoordinate(), (10.0, 10.0), generations)
    R = batch_rates(config, runs, seed)
    rates = tuple(R.at(t) for t in checkpoints)
    return any(r == 1.0 for t, r in zip(checkpoints, rates) if t >= first), rates


# Monte Carlo sample size used by the battery.
MC_SAMPLES = 1_000_000
MC_SIGMAS = 4.0

INTERVAL_CASES = (
    (2.0, 0.0, 1.0, 1.0),
    (2.0, 0.0, 1.0, 0.5),
    (1.0, 1.0, 3.0, 1.0),
    (-1.5, 0.0, 2.0, 2.0),
    (5.0, -1.0, 1.0, 3.0),
)


def _seeds(seed: int):
    counter = [0]

    def next_seed():
        counter[0] += 1
        return derive_seeds(seed, counter[0])[-1]

    return next_seed


def _mc_check(check_id, est: theory.ProbabilityEstimate, p: float) -> CheckResult:
    z = est.z_score(p)
    return CheckResult(check_id, z <= MC_SIGMAS, est.p_hat, p,
                       f"[{est.ci_low:.6g};{est.ci_high:.6g}] z={z:.3f}")


def _check_normal_cdf(seed) -> CheckResult:
    reference = 0.97724986805182079  # Phi(2), Taylor series at high precision
    value = theory.normal_cdf(2.0)
    return CheckResult("normal_cdf_reference", abs(value - reference) <= 1e-12, value, reference)


def _check_interval_mc(next_seed) -> CheckResult:
    worst, worst_est, worst_p = -1.0, None, 0.0
    for x, a, b, s in INTERVAL_CASES:
        p = theory.hit_probability_interval(x, a, b, s)
        est = theory.mc_interval_probability(x, s, a, b, MC_SAMPLES, next_seed())
        z = est.z_score(p)
        if z > worst:
            worst, worst_est, worst_p = z, est, p
    return _mc_check("interval_prob_mc", worst_est, worst_p)


def _check_interval_monotone(_) -> CheckResult:
    grid = (0.25, 0.5, 1.0, 2.0, 4.0)
    vals = [theory.hit_probability_interval(1.0, 1.0, 3.0, s) for s in grid]
    steps = np.diff(vals)
    return CheckResult("interval_prob_monotone_l0", bool(np.all(steps < 0)), float(steps.max()), 0.0)


def _check_optimal_sigma(_) -> CheckResult:
    worst = 0.0
    for l, u in ((1.0, 2.0), (0.5, 3.0), (2.0, 2.5), (0.1, 1.0)):
        s0 = theory.optimal_sigma(l, u)
        g = theory.golden_section_max(
            lambda s: theory.normal_cdf(u / s) - theory.normal_cdf(l / s), 0.01, 10.0)
        worst = max(worst, abs(g - s0))
    return CheckResult("optimal_sigma_argmax", worst <= 1e-3, worst, 1e-3)


def _check_sigma0_le_xc(_) -> CheckResult:
    gaps = [0.5 * (u + l) - theory.optimal_sigma(l, u)
            for l, u in ((1.0, 2.0), (0.5, 3.0), (2.0, 2.5), (0.1, 1.0))]
    return CheckResult("optimal_sigma_below_midpoint", min(gaps) >= 0.0, min(gaps), 0.0)


def _check_sphere_mc(next_seed) -> CheckResult:
    r = 10.0
    p = theory.sphere_promising_probability(r, 1.0)
    q = theory.PromisingRegionQuery(sphere2d(), (r, 0.0), 1.0)
    est = theory.mc_promising_probability(q, InvariantSigma((1.0, 1.0)), MC_SAMPLES, next_seed())
    return _mc_check("sphere_integral_mc", est, p)


def _check_sphere_lower_bound(_) -> CheckResult:
    grid = np.logspace(-1.5, 1.5, 20)
    margin = min(theory.sphere_promising_probability(r, s) - theory.sphere_lower_bound(r, s)
                 for r in grid for s in grid)
    return CheckResult("sphere_lower_bound_grid", margin > 0.0, margin, 0.0)


def _check_small_radius(_) -> CheckResult:
    p = theory.sphere_promising_probability(1e-3, 1.0)
    return CheckResult("small_radius_witness", p < 1e-5, p, 1e-5)


def _check_sphere_adaptive_bound(next_seed) -> CheckResult:
    b = theory.sphere_adaptive_bound(1.0, seed=next_seed())
    ok = 0.0 < b.C < 0.125 and 0.0 < b.rho0 < 1.0 and b.C_rho > b.C
    return CheckResult("sphere_adaptive_bound", ok, b.C, 0.125, f"rho0={b.rho0:.6f} C_rho={b.C_rho:.6f}")


def _check_scale_invariance(next_seed) -> CheckResult:
    strat = AdaptiveNorm(1.0)
    a = theory.mc_promising_probability(
        theory.PromisingRegionQuery(sphere2d(), (10.0, 0.0)), strat, MC_SAMPLES, next_seed())
    b = theory.mc_promising_probability(
        theory.PromisingRegionQuery(sphere2d(), (0.1, 0.0)), strat, MC_SAMPLES, next_seed())
    se = math.hypot(a.standard_error(), b.standard_error())
    z = abs(a.p_hat - b.p_hat) / se
    return CheckResult("adaptive_scale_invariance", z <= MC_SIGMAS, a.p_hat, b.p_hat, f"z={z:.3f}")


def _s0_mc(x: float, seed: int) -> tuple[theory.ProbabilityEstimate, float]:
    ax = abs(x)
    b0 = float(s0_halfwidths([float(rastrigin_1d(ax))])[0])
    est = theory.mc_interval_probability(x, ax, -b0, b0, MC_SAMPLES, seed)
    return est, theory.rastrigin_s0_probability(x)


def _check_ploc(next_seed) -> CheckResult:
    est, p = _s0_mc(40.0, next_seed())
    ok = abs(p - (theory.normal_cdf(2.0) - 0.5)) <= 1e-9 and est.z_score(p) <= MC_SIGMAS
    return CheckResult("rastrigin_ploc", ok, est.p_hat, p, f"z={est.z_score(p):.3f}")


def _check_pglo(next_seed) -> CheckResult:
    est, p = _s0_mc(0.7, next_seed())
    return _mc_check("rastrigin_pglo", est, p)


def _check_multimodal_bound(_) -> CheckResult:
    mb = theory.multimodal_bound(rastrigin1d())
    ok = (mb.C > 0.0 and 0.0 < mb.h0_over_x0 <= 1.0
          and theory.normal_cdf(2.0) - 0.5 >= theory.multimodal_lower_bound(mb.h0_over_x0))
    return CheckResult("multimodal_bound", ok, mb.C, 0.0, f"h0/x0={mb.h0_over_x0:.8f}")


def _check_containment(next_seed) -> CheckResult:
    """Full promising-region mass with diag(x**2) steps dominates the product of the 1-D S0 masses."""
    x = (0.7, 2.2)
    strat = AdaptiveCoordinate()
    est = theory.mc_promising_probability(
        theory.PromisingRegionQuery(rastrigin2d(), x), strat, MC_SAMPLES, next_seed())
    prod = theory.rastrigin_s0_probability(x[0]) * theory.rastrigin_s0_probability(x[1])
    ok = est.p_hat >= prod - MC_SIGMAS * est.standard_error(prod)
    return CheckResult("rastrigin2d_containment", ok, est.p_hat, prod,
                       f"[{est.ci_low:.6g};{est.ci_high:.6g}]")


def _check_invariant_decay_sphere(seed) -> CheckResult:
    cfg = EaConfig(sphere2d(), InvariantSigma((1.0,)), (10.0, 10.0), 500)
    return verify_invariant_decay(cfg, seed=seed, threshold=0.10,
                                  check_id="invariant_decay_sphere").as_result()


def _check_invariant_decay_rastrigin(seed) -> CheckResult:
    cfg = EaConfig(rastrigin2d(), InvariantSigma((1.0,)), (10.0, 10.0), 500)
    return verify_invariant_decay(cfg, seed=seed, threshold=0.05,
                                  check_id="invariant_decay_rastrigin").as_result()


def _check_adaptive_floor_sphere(seed) -> CheckResult:
    cfg = EaConfig(sphere2d(), AdaptiveNorm(1.0), (10.0, 10.0), 500)
    C = theory.sphere_adaptive_bound(1.0, seed=seed).C
    return verify_adaptive_floor(cfg, C, seed=seed, check_id="adaptive_floor_sphere").as_result()


def _check_adaptive_floor_rastrigin(seed) -> CheckResult:
    replications = 10
    hits = 0
    root = derive_seeds(seed, replications)
    for s in root:
        hit, _ = rastrigin_hits_zero(seed=s)
        hits += hit
    C = theory.multimodal_bound().C
    cfg = EaConfig(rastrigin2d(), AdaptiveCoordinate(), (10.0, 10.0), 500)
    report = verify_adaptive_floor(cfg, C, seed=seed, check_id="adaptive_floor_rastrigin")
    ok = report.passed and hits > replications // 2
    return CheckResult("adaptive_floor_rastrigin", ok, hits / replications, 0.5,
                       report.as_result().ci)


def _check_stalled_rate(_) -> CheckResult:
    r = stalled_rate(0.5, 10_000)
    return CheckResult("stalled_rate_decay", r < 1e-3, r, 1e-3)


def _check_zero_adaptive_stall(seed) -> CheckResult:
    """Every child leaves a degenerate box around x0, so the rate stays 0."""
    obj = sphere2d().with_domain((10.0, 10.0), (10.0, 10.0))
    cfg = EaConfig(obj, InvariantSigma((1.0,)), (10.0, 10.0), 200)
    R = batch_rates(cfg, 10, seed)
    worst = float(np.max(np.abs(R.R[1:])))
    return CheckResult("zero_adaptive_stall", worst == 0.0, worst, 0.0)


_CHECKS: tuple[tuple[str, Callable, str], ...] = (
    ("normal_cdf_reference", _check_normal_cdf, "seed"),
    ("interval_prob_mc", _check_interval_mc, "stream"),
    ("interval_prob_monotone_l0", _check_interval_monotone, "seed"),
    ("optimal_sigma_argmax", _check_optimal_sigma, "seed"),
    ("optimal_sigma_below_midpoint", _check_sigma0_le_xc, "seed"),
    ("sphere_integral_mc", _check_sphere_mc, "stream"),
    ("sphere_lower_bound_grid", _check_sphere_lower_bound, "seed"),
    ("small_radius_witness", _check_small_radius, "seed"),
    ("sphere_adaptive_bound", _check_sphere_adaptive_bound, "stream"),
    ("adaptive_scale_invariance", _check_scale_invariance, "stream"),
    ("rastrigin_ploc", _check_ploc, "stream"),
    ("rastrigin_pglo", _check_pglo, "stream"),
    ("multimodal_bound", _check_multimodal_bound, "seed"),
    ("rastrigin2d_containment", _check_containment, "stream"),
    ("invariant_decay_sphere", _check_invariant_decay_sphere, "seed"),
    ("invariant_decay_rastrigin", _check_invariant_decay_rastrigin, "seed"),
    ("adaptive_floor_sphere", _check_adaptive_floor_sphere, "seed"),
    ("adaptive_floor_rastrigin", _check_adaptive_floor_rastrigin, "seed"),
    ("stalled_rate_decay", _check_stalled_rate, "seed"),
    ("zero_adaptive_stall", _check_zero_adaptive_stall, "seed"),
)

CHECK_IDS = tuple(c[0] for c in _CHECKS)


def verify_all(seed: int = 0) -> list[CheckResult]:
    next_seed = _seeds(seed)
    results = []
    for check_id, fn, arg in _CHECKS:
        res = fn(next_seed if arg == "stream" else seed)
        assert res.check_id == check_id
        results.append(res)
    return results
