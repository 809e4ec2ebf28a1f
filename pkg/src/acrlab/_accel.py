"""Backend selection for the numeric kernels.

Set ``ACRLAB_BACKEND=numpy`` to force the pure-numpy path. The default is
``numba`` whenever numba imports cleanly.
"""
from __future__ import annotations

import logging
import os

log = logging.getLogger(__name__)

_requested = os.environ.get("ACRLAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"ACRLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

NUMBA_AVAILABLE = False
try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba ships with the dev environment
    pass

BACKEND = "numba" if (_requested == "numba" and NUMBA_AVAILABLE) else "numpy"
if _requested == "numba" and not NUMBA_AVAILABLE:  # pragma: no cover
    log.warning("numba unavailable, falling back to the numpy kernels")
