"""Numba switch.

Set ``SPECTRAL_SKETCH_NUMBA=0`` to run the pure-numpy kernels instead of the
compiled ones. The flag is read once at import time.
"""

import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("SPECTRAL_SKETCH_NUMBA", "1").lower() not in (
    "0",
    "false",
    "no",
    "off",
)


def njit(fn):
    """``numba.njit(cache=True, nogil=True)`` when numba is importable, identity otherwise."""
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
