"""Hot numeric kernels, dispatched to numba or numpy by ``ACRLAB_BACKEND``.

Both backends share one random stream layout. Draw number ``c`` of the
stream keyed by ``k`` is ``splitmix64_mix(k + GAMMA * (c + 1))``, turned
into a uniform on (0, 1) as ``((bits >> 11) + 0.5) * 2**-53``. Gaussians come
from Box-Muller on consecutive uniform pairs ``(u1, u2)``: the even slot gets
the cosine branch, the odd slot the sine branch. A ``d``-dimensional mutation
consumes ``2 * ceil(d / 2)`` draws, so generation ``t`` of a run reads draws
``[t * D, (t + 1) * D)`` and Monte Carlo sample ``i`` reads
``[i * D, (i + 1) * D)``. Integer streams are identical across backends;
floating-point results agree to libm rounding.
"""
from .._accel import BACKEND
from ._common import (  # noqa: F401
    OBJ_RASTRIGIN, OBJ_SPHERE, STRAT_ADAPTIVE_COORD, STRAT_ADAPTIVE_NORM,
    STRAT_INVARIANT, draws_per_point,
)
from ._np import mix64, uniforms  # noqa: F401

if BACKEND == "numba":
    from ._nb import (  # noqa: F401
        count_interval_hits, count_promising_hits, evaluate_points, evolve,
        normal_block, raw_draws, s0_halfwidth,
    )
else:
    from ._np import (  # noqa: F401
        count_interval_hits, count_promising_hits, evaluate_points, evolve,
        normal_block, raw_draws, s0_halfwidth,
    )
