"""Selects the numba or pure-numpy implementation of the hot kernels.

The environment variable ``KRAMERS_BACKEND`` picks the lane:

* ``numba``  -- require the jitted kernels (ImportError if numba missing),
* ``numpy``  -- force the pure-numpy twins,
* unset     -- numba when importable, numpy otherwise.

Both lanes produce the same tables to rounding; ``benchmarks/bench_backend.py``
times them side by side.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_numpy

BACKEND_ENV = "KRAMERS_BACKEND"

_impl: ModuleType
_name: str


def _load(requested: str | None) -> tuple[ModuleType, str]:
    if requested == "numpy":
        return _kernels_numpy, "numpy"
    try:
        from . import _kernels_numba
    except ImportError:
        if requested == "numba":
            raise
        return _kernels_numpy, "numpy"
    return _kernels_numba, "numba"


def select(name: str | None = None) -> str:
    """Switch the active backend; returns the name actually selected."""
    global _impl, _name, log1p_exp, moment_tables, fifth_moment_matrix
    if name is not None and name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    _impl, _name = _load(name)
    log1p_exp = _impl.log1p_exp
    moment_tables = _impl.moment_tables
    fifth_moment_matrix = _impl.fifth_moment_matrix
    return _name


def active_backend() -> str:
    """Name of the backend currently wired in ('numba' or 'numpy')."""
    return _name


select(os.environ.get(BACKEND_ENV, "").lower() or None)
