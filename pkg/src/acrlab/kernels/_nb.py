"""numba kernels. Same contracts and draw order as ``_np``."""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._common import (
    GAMMA, MIX1, MIX2, OBJ_SPHERE, SH11, SH27, SH30, SH31,
    STRAT_ADAPTIVE_COORD, STRAT_ADAPTIVE_NORM, TWO_M53, TWO_PI,
)

_ONE = np.uint64(1)
_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _mix64(z):
    z = (z ^ (z >> SH30)) * MIX1
    z = (z ^ (z >> SH27)) * MIX2
    return z ^ (z >> SH31)


@njit(**_JIT)
def _uniform(key, counter):
    z = _mix64(key + GAMMA * (np.uint64(counter) + _ONE))
    return (np.float64(z >> SH11) + 0.5) * TWO_M53


@njit(**_JIT)
def raw_draws(key, counters):
    out = np.empty(counters.shape[0], dtype=np.uint64)
    for i in range(counters.shape[0]):
        out[i] = _mix64(key + GAMMA * (np.uint64(counters[i]) + _ONE))
    return out


@njit(**_JIT)
def _fill_normals(key, counter0, npairs, z):
    for j in range(npairs):
        u1 = _uniform(key, counter0 + 2 * j)
        u2 = _uniform(key, counter0 + 2 * j + 1)
        rad = math.sqrt(-2.0 * math.log(u1))
        ang = TWO_PI * u2
        z[2 * j] = rad * math.cos(ang)
        z[2 * j + 1] = rad * math.sin(ang)


@njit(**_JIT)
def normal_block(key, counter0, n):
    npairs = (n + 1) // 2
    z = np.empty(2 * npairs)
    _fill_normals(np.uint64(key), counter0, npairs, z)
    return z[:n]


@njit(**_JIT)
def _evaluate(obj, x):
    acc = 0.0
    if obj == OBJ_SPHERE:
        acc = x[0] * x[0]
        for i in range(1, x.shape[0]):
            acc = acc + x[i] * x[i]
    else:
        v = x[0]
        acc = (10.0 + v * v) - 10.0 * math.cos(TWO_PI * v)
        for i in range(1, x.shape[0]):
            v = x[i]
            acc = acc + ((10.0 + v * v) - 10.0 * math.cos(TWO_PI * v))
    return acc


@njit(**_JIT)
def evaluate_points(obj, X):
    out = np.empty(X.shape[0])
    for r in range(X.shape[0]):
        out[r] = _evaluate(obj, X[r])
    return out


@njit(**_JIT)
def _set_sigmas(strat, sigma, scale, x, out):
    d = x.shape[0]
    if strat == STRAT_ADAPTIVE_NORM:
        sq = x[0] * x[0]
        for i in range(1, d):
            sq = sq + x[i] * x[i]
        s = scale * math.sqrt(sq)
        for i in range(d):
            out[i] = s
    elif strat == STRAT_ADAPTIVE_COORD:
        for i in range(d):
            out[i] = abs(x[i])
    else:
        for i in range(d):
            out[i] = sigma[i]


@njit(**_JIT)
def evolve(obj, strat, sigma, scale, x0, lower, upper, generations, keys):
    T = keys.shape[0]
    d = x0.shape[0]
    npairs = (d + 1) // 2
    D = 2 * npairs
    F = np.full((T, generations + 1), np.nan)
    bad = np.full(T, -1, dtype=np.int64)
    x = np.empty(d)
    y = np.empty(d)
    s = np.empty(d)
    z = np.empty(D)
    for r in range(T):
        key = keys[r]
        for i in range(d):
            x[i] = x0[i]
        fx = _evaluate(obj, x)
        if not np.isfinite(fx):
            bad[r] = 0
            continue
        F[r, 0] = fx
        for t in range(generations):
            _fill_normals(key, t * D, npairs, z)
            _set_sigmas(strat, sigma, scale, x, s)
            inside = True
            for i in range(d):
                y[i] = x[i] + s[i] * z[i]
                if y[i] < lower[i] or y[i] > upper[i]:
                    inside = False
            fy = _evaluate(obj, y)
            if not np.isfinite(fy):
                bad[r] = t + 1
                break
            if inside and fy < fx:
                for i in range(d):
                    x[i] = y[i]
                fx = fy
            F[r, t + 1] = fx
    return F, bad


@njit(**_JIT)
def count_promising_hits(obj, strat, sigma, scale, x, fstar, threshold, n, key):
    d = x.shape[0]
    npairs = (d + 1) // 2
    D = 2 * npairs
    s = np.empty(d)
    y = np.empty(d)
    z = np.empty(D)
    _set_sigmas(strat, sigma, scale, x, s)
    key = np.uint64(key)
    hits = 0
    for k in range(n):
        _fill_normals(key, k * D, npairs, z)
        for i in range(d):
            y[i] = x[i] + s[i] * z[i]
        if abs(_evaluate(obj, y) - fstar) < threshold:
            hits += 1
    return hits


@njit(**_JIT)
def count_interval_hits(x, sigma, a, b, n, key):
    key = np.uint64(key)
    z = np.empty(2)
    hits = 0
    for k in range(n):
        _fill_normals(key, 2 * k, 1, z)
        y = x + sigma * z[0]
        if y > a and y < b:
            hits += 1
    return hits


@njit(**_JIT)
def _r1(v):
    return (10.0 + v * v) - 10.0 * math.cos(TWO_PI * v)


@njit(**_JIT)
def s0_halfwidth(levels, stat_x, stat_runmax):
    m = stat_x.shape[0]
    out = np.empty(levels.shape[0])
    for k in range(levels.shape[0]):
        level = levels[k]
        j = 0
        while j < m and stat_runmax[j] < level:
            j += 1
        lo = 0.0 if j == 0 else stat_x[j - 1]
        if j < m:
            hi = stat_x[j]
        else:
            hi = max(math.sqrt(level), stat_x[m - 1]) + 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _r1(mid) < level:
                lo = mid
            else:
                hi = mid
        out[k] = hi
    return out
