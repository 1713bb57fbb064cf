"""Kernel backend selection.

Hot loops exist twice: a numba version and a vectorised numpy version.
``UTAUT_BACKEND=numpy`` (or a missing numba) selects the numpy path.
"""
from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
else:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old for numba; OpenMP is always present
        numba.config.THREADING_LAYER = "omp"

_VALID = ("numba", "numpy")

_backend = os.environ.get("UTAUT_BACKEND", "numba").strip().lower() or "numba"
if _backend not in _VALID:
    raise ValueError(f"UTAUT_BACKEND must be one of {_VALID}, got {_backend!r}")
if numba is None:
    _backend = "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    name = name.lower()
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    _backend = name


def use_numba() -> bool:
    return _backend == "numba"


def set_threads(n: int) -> int:
    """Set the numba worker count (clamped to what numba was started with)."""
    if numba is None:
        return 1
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


if numba is not None:
    njit = numba.njit
    prange = numba.prange
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range
