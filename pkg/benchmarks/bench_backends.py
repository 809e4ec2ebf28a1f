"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 3]

The first numba call per kernel compiles (or loads the on-disk cache); it is
reported separately and excluded from the steady-state timings.
"""
import argparse
import time

import numpy as np

from acrlab.kernels import _np
from acrlab.kernels._common import OBJ_RASTRIGIN, OBJ_SPHERE, STRAT_ADAPTIVE_COORD, \
    STRAT_ADAPTIVE_NORM, STRAT_INVARIANT
from acrlab.rng import derive_seeds, stream_key

try:
    from acrlab.kernels import _nb
except ImportError:  # numba missing
    _nb = None


def cases():
    keys = np.array([stream_key(s) for s in derive_seeds(0, 100)], dtype=np.uint64)
    inf = np.full(2, np.inf)
    x0 = np.array([10.0, 10.0])
    yield ("evolve sphere invariant 100x500", "evolve",
           (OBJ_SPHERE, STRAT_INVARIANT, np.ones(2), 1.0, x0, -inf, inf, 500, keys))
    yield ("evolve sphere adaptive_norm 100x500", "evolve",
           (OBJ_SPHERE, STRAT_ADAPTIVE_NORM, np.ones(2), 1.0, x0, -inf, inf, 500, keys))
    yield ("evolve rastrigin adaptive_coord 100x500", "evolve",
           (OBJ_RASTRIGIN, STRAT_ADAPTIVE_COORD, np.ones(2), 1.0, x0, -inf, inf, 500, keys))
    x = np.array([0.7, 2.2])
    level = float(_np.evaluate_points(OBJ_RASTRIGIN, x[None, :])[0])
    yield ("promising hits rastrigin 1e6", "count_promising_hits",
           (OBJ_RASTRIGIN, STRAT_ADAPTIVE_COORD, np.ones(2), 1.0, x, 0.0, level, 1_000_000,
            stream_key(1)))
    yield ("interval hits 1e7", "count_interval_hits",
           (0.0, 1.0, 0.5, 1.5, 10_000_000, stream_key(2)))


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'case':42s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s} {'first call s':>13s}")
    for label, name, fargs in cases():
        t_np = best_of(getattr(_np, name), fargs, args.repeat)
        if _nb is None:
            print(f"{label:42s} {t_np:10.4f} {'-':>10s} {'-':>8s} {'-':>13s}")
            continue
        t0 = time.perf_counter()
        getattr(_nb, name)(*fargs)
        first = time.perf_counter() - t0
        t_nb = best_of(getattr(_nb, name), fargs, args.repeat)
        print(f"{label:42s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f} {first:13.3f}")


if __name__ == "__main__":
    main()
