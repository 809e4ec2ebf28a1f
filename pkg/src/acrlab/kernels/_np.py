"""Pure-numpy kernels. Vectorised over runs or samples instead of looping."""
from __future__ import annotations

import numpy as np

from ._common import (
    GAMMA, MIX1, MIX2, OBJ_RASTRIGIN, OBJ_SPHERE, SH11, SH27, SH30, SH31,
    STRAT_ADAPTIVE_COORD, STRAT_ADAPTIVE_NORM, TWO_M53, TWO_PI, draws_per_point,
)

MC_CHUNK = 1 << 18


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> SH30)) * MIX1
        z = (z ^ (z >> SH27)) * MIX2
    return z ^ (z >> SH31)


def raw_draws(key, counters):
    """SplitMix64 output number ``counter`` of the stream keyed by ``key``."""
    key = np.asarray(key, dtype=np.uint64)
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(key + GAMMA * (c + np.uint64(1)))


def uniforms(key, counters):
    return ((raw_draws(key, counters) >> SH11).astype(np.float64) + 0.5) * TWO_M53


def _box_muller(u):
    # u has an even trailing axis: (u1, u2) pairs.
    u1 = u[..., 0::2]
    u2 = u[..., 1::2]
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = TWO_PI * u2
    out = np.empty(u.shape, dtype=np.float64)
    out[..., 0::2] = rad * np.cos(ang)
    out[..., 1::2] = rad * np.sin(ang)
    return out


def normal_block(key, counter0, n):
    m = draws_per_point(n)
    c = np.uint64(counter0) + np.arange(m, dtype=np.uint64)
    return _box_muller(uniforms(np.uint64(key), c))[:n]


def evaluate_points(obj, X):
    X = np.asarray(X, dtype=np.float64)
    if obj == OBJ_SPHERE:
        out = X[..., 0] * X[..., 0]
        for i in range(1, X.shape[-1]):
            out = out + X[..., i] * X[..., i]
        return out
    if obj == OBJ_RASTRIGIN:
        def r1(v):
            return (10.0 + v * v) - 10.0 * np.cos(TWO_PI * v)
        out = r1(X[..., 0])
        for i in range(1, X.shape[-1]):
            out = out + r1(X[..., i])
        return out
    raise ValueError(f"unknown objective code {obj}")


def _sigmas(strat, sigma, scale, X):
    if strat == STRAT_ADAPTIVE_NORM:
        sq = X[:, 0] * X[:, 0]
        for i in range(1, X.shape[1]):
            sq = sq + X[:, i] * X[:, i]
        return np.repeat((scale * np.sqrt(sq))[:, None], X.shape[1], axis=1)
    if strat == STRAT_ADAPTIVE_COORD:
        return np.abs(X)
    return np.broadcast_to(sigma, X.shape)


def _inside(Y, lower, upper):
    return np.all((Y >= lower) & (Y <= upper), axis=1)


def evolve(obj, strat, sigma, scale, x0, lower, upper, generations, keys):
    keys = np.asarray(keys, dtype=np.uint64)
    T = keys.shape[0]
    d = x0.shape[0]
    D = draws_per_point(d)
    F = np.full((T, generations + 1), np.nan)
    bad = np.full(T, -1, dtype=np.int64)
    X = np.tile(np.asarray(x0, dtype=np.float64), (T, 1))
    fx = evaluate_points(obj, X)
    alive = np.isfinite(fx)
    bad[~alive] = 0
    F[:, 0] = np.where(alive, fx, np.nan)
    offs = np.arange(D, dtype=np.uint64)
    for t in range(generations):
        c = np.uint64(t * D) + offs
        Z = _box_muller(uniforms(keys[:, None], c[None, :]))[:, :d]
        Y = X + _sigmas(strat, sigma, scale, X) * Z
        fy = evaluate_points(obj, Y)
        nonfinite = alive & ~np.isfinite(fy)
        bad[nonfinite] = t + 1
        alive = alive & ~nonfinite
        acc = alive & _inside(Y, lower, upper) & (fy < fx)
        X[acc] = Y[acc]
        fx = np.where(acc, fy, fx)
        F[:, t + 1] = np.where(alive, fx, np.nan)
    return F, bad


def count_promising_hits(obj, strat, sigma, scale, x, fstar, threshold, n, key):
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    D = draws_per_point(d)
    sig = _sigmas(strat, sigma, scale, x[None, :])[0]
    key = np.uint64(key)
    hits = 0
    for start in range(0, n, MC_CHUNK):
        m = min(MC_CHUNK, n - start)
        c = (np.uint64(start * D) + np.arange(m * D, dtype=np.uint64)).reshape(m, D)
        Z = _box_muller(uniforms(key, c))[:, :d]
        Y = x + sig * Z
        hits += int(np.count_nonzero(np.abs(evaluate_points(obj, Y) - fstar) < threshold))
    return hits


def count_interval_hits(x, sigma, a, b, n, key):
    key = np.uint64(key)
    hits = 0
    for start in range(0, n, MC_CHUNK):
        m = min(MC_CHUNK, n - start)
        c = np.uint64(2 * start) + np.arange(2 * m, dtype=np.uint64)
        z = _box_muller(uniforms(key, c).reshape(m, 2))[:, 0]
        y = x + sigma * z
        hits += int(np.count_nonzero((y > a) & (y < b)))
    return hits


def _r1(v):
    return (10.0 + v * v) - 10.0 * np.cos(TWO_PI * v)


def s0_halfwidth(levels, stat_x, stat_runmax):
    """Right end of the component of ``{f_R1 < level}`` containing 0.

    ``stat_x`` are the positive stationary points in increasing order and
    ``stat_runmax`` the running maximum of ``f_R1`` over them.
    """
    levels = np.asarray(levels, dtype=np.float64)
    j = np.searchsorted(stat_runmax, levels, side="left")
    padded = np.concatenate(([0.0], stat_x))
    lo = padded[j]
    tail = j >= stat_x.shape[0]
    hi = np.where(tail, np.maximum(np.sqrt(levels), stat_x[-1]) + 1.0,
                  stat_x[np.minimum(j, stat_x.shape[0] - 1)])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        done = (mid <= lo) | (mid >= hi)
        if np.all(done):
            break
        below = _r1(mid) < levels
        lo = np.where(~done & below, mid, lo)
        hi = np.where(~done & ~below, mid, hi)
    return hi
