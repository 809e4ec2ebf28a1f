import math

import numpy as np
import pytest

from acrlab import checks, theory
from acrlab.engine import AdaptiveCoordinate, EaConfig, InvariantSigma
from acrlab.objectives import sphere2d


@pytest.fixture(scope="module")
def report():
    return checks.verify_all(seed=0)


def test_all_checks_pass(report):
    failed = [(r.check_id, r.value, r.bound, r.ci) for r in report if not r.passed]
    assert not failed


def test_one_row_per_documented_check(report):
    assert [r.check_id for r in report] == list(checks.CHECK_IDS)
    assert len(report) == 20


def test_broken_cdf_is_caught(monkeypatch):
    # a cdf with the wrong scale still looks like a cdf, but not the normal one
    monkeypatch.setattr(theory, "normal_cdf", lambda x: 0.5 * math.erfc(-x / 2.0))
    result = dict((r.check_id, r) for r in checks.verify_all(seed=0))
    assert not result["interval_prob_mc"].passed


def test_stalled_rate_decays():
    assert checks.stalled_rate(0.5, 10_000) < 1e-3
    assert checks.stalled_rate(0.5, 10) > checks.stalled_rate(0.5, 100)


def test_invariant_trend_report():
    cfg = EaConfig(sphere2d(), InvariantSigma((1.0,)), (10.0, 10.0), 500)
    rep = checks.verify_invariant_decay(cfg, runs=100, seed=0)
    assert rep.passed
    assert rep.rates[-1] < rep.rates[0]


def test_adaptive_floor_report():
    cfg = EaConfig(sphere2d(), AdaptiveCoordinate(), (10.0, 10.0), 500)
    rep = checks.verify_adaptive_floor(cfg, C=0.079, runs=50, seed=1)
    assert rep.passed
    assert np.all(np.asarray(rep.rates) >= 0.079)
