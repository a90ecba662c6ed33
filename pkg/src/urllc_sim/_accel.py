"""Optional numba acceleration for the hot simulation kernels.

Kernels are written in nopython-compatible numpy style so the same source
runs both interpreted (pure numpy fallback) and JIT-compiled.  Selection
happens once at import time:

* ``URLLC_SIM_NUMBA=0`` (or ``false``/``off``) forces the numpy fallback,
* otherwise numba is used whenever it imports cleanly.

Both paths consume identical pre-drawn random arrays and perform the same
floating-point operations in the same order, so results are bit-exact
regardless of which path is active (``fastmath`` stays off for this reason).
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via URLLC_SIM_NUMBA=0 runs
    numba = None
    HAVE_NUMBA = False


def _flag_enabled() -> bool:
    value = os.environ.get("URLLC_SIM_NUMBA", "1").strip().lower()
    return value not in {"0", "false", "off", "no"}


NUMBA_ENABLED = HAVE_NUMBA and _flag_enabled()


def accelerated(py_func):
    """Return ``njit(cache=True)(py_func)`` when numba is active, else ``py_func``."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(py_func)
    return py_func
