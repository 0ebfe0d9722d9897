"""Numba switch shared by all kernels.

Set ``DTWMEAN_DISABLE_NUMBA=1`` to force the pure-numpy code paths.  The
numba kernels are still defined (and compiled lazily on first call) so that
tests and benchmarks can compare both paths inside one process.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("DTWMEAN_DISABLE_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)


def njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
