"""The numba and numpy kernels must agree; streams exactly, floats to rounding."""
import numpy as np
import pytest

from acrlab.kernels import _np
from acrlab.kernels._common import OBJ_RASTRIGIN, OBJ_SPHERE, STRAT_ADAPTIVE_COORD, \
    STRAT_ADAPTIVE_NORM, STRAT_INVARIANT
from acrlab.rng import stream_key

_nb = pytest.importorskip("acrlab.kernels._nb")

KEYS = np.array([stream_key(s) for s in range(7)], dtype=np.uint64)
INF = np.full(2, np.inf)


def test_uniform_streams_identical():
    c = np.arange(5000, dtype=np.uint64)
    for key in KEYS[:3]:
        assert np.array_equal(_np.uniforms(key, c), [_nb._uniform(key, int(i)) for i in c])


def test_normal_blocks_agree_to_rounding():
    # numpy's vectorised log/cos and libm can differ in the last bit
    for key in KEYS[:3]:
        a = _np.normal_block(key, 10, 1001)
        b = _nb.normal_block(key, 10, 1001)
        np.testing.assert_allclose(a, b, rtol=1e-15, atol=1e-15)


@pytest.mark.parametrize("obj", [OBJ_SPHERE, OBJ_RASTRIGIN])
def test_evaluate_points_agree(obj):
    X = np.random.default_rng(1).normal(0, 20, size=(500, 2))
    assert np.allclose(_np.evaluate_points(obj, X), _nb.evaluate_points(obj, X),
                       rtol=1e-14, atol=0)


@pytest.mark.parametrize("strat,obj", [(STRAT_INVARIANT, OBJ_SPHERE),
                                       (STRAT_ADAPTIVE_NORM, OBJ_SPHERE),
                                       (STRAT_ADAPTIVE_COORD, OBJ_RASTRIGIN),
                                       (STRAT_INVARIANT, OBJ_RASTRIGIN)])
def test_evolve_agrees(strat, obj):
    args = (obj, strat, np.ones(2), 1.0, np.array([10.0, 10.0]), -INF, INF, 300, KEYS)
    Fa, ba = _np.evolve(*args)
    Fb, bb = _nb.evolve(*args)
    assert np.array_equal(ba, bb)
    assert np.allclose(Fa, Fb, rtol=1e-8, atol=1e-300)


def test_promising_hits_agree():
    args = (OBJ_RASTRIGIN, STRAT_ADAPTIVE_COORD, np.ones(2), 1.0, np.array([0.7, 2.2]), 0.0,
            float(_np.evaluate_points(OBJ_RASTRIGIN, np.array([[0.7, 2.2]]))[0]),
            300_000, KEYS[0])
    assert _np.count_promising_hits(*args) == _nb.count_promising_hits(*args)


def test_interval_hits_agree():
    args = (0.7, 0.7, -0.3, 0.3, 300_000, KEYS[1])
    assert _np.count_interval_hits(*args) == _nb.count_interval_hits(*args)


def test_s0_halfwidth_agrees():
    from acrlab.objectives import _stationary_tables

    xs, runmax, _, _ = _stationary_tables()
    levels = np.linspace(0.01, 1500.0, 997)
    assert np.allclose(_np.s0_halfwidth(levels, xs, runmax), _nb.s0_halfwidth(levels, xs, runmax),
                       rtol=0, atol=1e-12)
