"""Counter-based random streams.

A stream is a 64-bit key plus a draw counter. Draw ``c`` is a pure function
of ``(key, c)`` (see :mod:`acrlab.kernels` for the layout), so any run or
Monte Carlo sample can be regenerated without replaying earlier draws, and
splitting work across workers never changes a result.
"""
from __future__ import annotations

import numpy as np

from . import kernels

SEED_MASK = (1 << 64) - 1


def stream_key(seed: int) -> np.uint64:
    """Key of the stream owned by ``seed``; the mix decorrelates nearby seeds."""
    return np.uint64(kernels.mix64(np.uint64(int(seed) & SEED_MASK)))


def derive_seeds(root_seed: int, count: int) -> list[int]:
    """``count`` child seeds expanded from one root seed.

    Child ``i`` is draw ``i`` of the root's stream, so the list for a larger
    ``count`` extends the list for a smaller one.
    """
    draws = kernels.raw_draws(stream_key(root_seed), np.arange(count, dtype=np.uint64))
    seeds = [int(v) for v in draws]
    if len(set(seeds)) != len(seeds):  # pragma: no cover - 2**-64 collision odds
        raise ValueError("seed expansion produced a duplicate; choose another root seed")
    return seeds


class CounterRNG:
    """Sequential view over one counter-based stream."""

    def __init__(self, seed: int, counter: int = 0):
        self.seed = int(seed) & SEED_MASK
        self.key = stream_key(self.seed)
        self.counter = int(counter)

    def uniforms(self, n: int) -> np.ndarray:
        c = np.uint64(self.counter) + np.arange(n, dtype=np.uint64)
        self.counter += n
        return kernels.uniforms(self.key, c)

    def normals(self, n: int) -> np.ndarray:
        """``n`` standard normals; consumes ``2 * ceil(n / 2)`` draws."""
        z = np.asarray(kernels.normal_block(self.key, self.counter, n), dtype=float)
        self.counter += kernels.draws_per_point(n)
        return z
