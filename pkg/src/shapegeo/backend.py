"""Numba/numpy backend selection for the hot kernels.

The environment variable SHAPEGEO_BACKEND picks the implementation:

* ``auto`` (default): numba if importable, else plain numpy/python;
* ``numba``: require numba, raise if missing;
* ``numpy``: force the pure-numpy paths (useful for debugging and as the
  reference in ``benchmarks/bench_backends.py``).

SHAPEGEO_THREADS caps the numba thread pool.
"""

import os

_choice = os.environ.get("SHAPEGEO_BACKEND", "auto").lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(f"SHAPEGEO_BACKEND must be auto|numba|numpy, got {_choice!r}")

_numba = None
if _choice in ("auto", "numba"):
    try:
        import numba as _numba
    except ImportError:
        if _choice == "numba":
            raise
        _numba = None

if _numba is not None:
    _threads = os.environ.get("SHAPEGEO_THREADS")
    if _threads:
        _numba.set_num_threads(max(1, min(int(_threads), _numba.config.NUMBA_NUM_THREADS)))


def using_numba() -> bool:
    return _numba is not None


def njit(*args, **kwargs):
    """numba.njit when available, identity decorator otherwise."""
    if _numba is not None:
        return _numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn


# numba only recognizes prange when the name resolves to numba.prange itself.
if _numba is not None:
    prange = _numba.prange
else:
    prange = range
