"""Kernel backend selection.

Set ``TOPOFORMS_NO_JIT=1`` to force the pure-numpy kernels even when numba is
importable. ``TOPOFORMS_THREADS`` caps the numba thread pool.
"""
import os

_flag = os.environ.get("TOPOFORMS_NO_JIT", "").strip().lower()
JIT_REQUESTED = _flag not in ("1", "true", "yes", "on")

try:
    import numba as nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is normally present
    nb = None
    HAVE_NUMBA = False

if HAVE_NUMBA and not os.environ.get("NUMBA_THREADING_LAYER"):
    # try OpenMP before TBB; numba warns when it probes an old system TBB
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

USE_JIT = JIT_REQUESTED and HAVE_NUMBA
BACKEND = "numba" if USE_JIT else "numpy"

if HAVE_NUMBA and os.environ.get("TOPOFORMS_THREADS"):
    try:
        nb.set_num_threads(max(1, min(int(os.environ["TOPOFORMS_THREADS"]),
                                      nb.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return nb.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda func: func


prange = nb.prange if HAVE_NUMBA else range
