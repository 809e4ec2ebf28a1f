import numpy as np
from hypothesis import given, strategies as st
from scipy import stats

from acrlab.rng import CounterRNG, derive_seeds, stream_key


def test_stream_is_counter_addressable():
    seq = CounterRNG(5)
    first = seq.uniforms(100)
    jumped = CounterRNG(5, counter=40).uniforms(60)
    assert np.array_equal(first[40:], jumped)


def test_normals_consume_even_blocks():
    r = CounterRNG(3)
    r.normals(3)
    assert r.counter == 4
    a = CounterRNG(3).normals(4)
    b = CounterRNG(3).normals(3)
    assert np.array_equal(a[:3], b)


def test_derived_seeds_prefix_and_distinct():
    s10 = derive_seeds(0, 10)
    assert derive_seeds(0, 4) == s10[:4]
    assert len(set(derive_seeds(0, 5000))) == 5000
    assert derive_seeds(1, 4) != s10[:4]


@given(st.integers(0, 2**64 - 1))
def test_uniforms_in_open_unit_interval(seed):
    u = CounterRNG(seed).uniforms(64)
    assert np.all((u > 0.0) & (u < 1.0))


def test_normal_distribution():
    z = CounterRNG(11).normals(200_000)
    assert abs(z.mean()) < 4 / np.sqrt(z.size)
    assert abs(z.var() - 1.0) < 0.02
    assert stats.kstest(z, "norm").pvalue > 1e-3


def test_nearby_seeds_decorrelated():
    a = CounterRNG(0).uniforms(50_000)
    b = CounterRNG(1).uniforms(50_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.02
    assert stream_key(0) != stream_key(1)
