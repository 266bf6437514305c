"""JIT selection.

Kernels are written once as plain loops and compiled with numba unless
``SKLAB_DISABLE_NUMBA`` is set (or numba is missing), in which case the
vectorised numpy variants in :mod:`sklab.kernels` are used where they exist
and the loop bodies run interpreted otherwise.
"""
import os

_FLAG = os.environ.get("SKLAB_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def jit(func):
    """Compile ``func`` in nopython mode when acceleration is enabled."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def compile_always(func):
    """Compile regardless of the env flag (used by the benchmark)."""
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True, nogil=True)(func)
