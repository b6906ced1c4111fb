"""Kernel backend selection.

The compiled core is used when importable; otherwise the NumPy fallback.
KPLANE_AUDIT_BACKEND={auto,cython,numpy} forces the choice.  Both backends
expose the same four kernels; `pairwise_sum` is bit-compatible between them,
the rest agree to rounding.
"""

from __future__ import annotations

import os

from . import _numpy

_requested = os.environ.get("KPLANE_AUDIT_BACKEND", "auto").lower()

if _requested not in ("auto", "cython", "numpy"):
    raise RuntimeError(f"KPLANE_AUDIT_BACKEND must be auto|cython|numpy, got {_requested!r}")

_backend = None
if _requested in ("auto", "cython"):
    try:
        from . import _cython as _backend  # type: ignore[no-redef]
    except ImportError:
        if _requested == "cython":
            raise RuntimeError("compiled kernel backend requested but not built")
        _backend = None
if _backend is None:
    _backend = _numpy

pairwise_sum = _backend.pairwise_sum
trace_quadratic_batch = _backend.trace_quadratic_batch
eigen_trace_batch = _backend.eigen_trace_batch
sinogram_project = _backend.sinogram_project


def backend_name() -> str:
    return _backend.NAME


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        from . import _cython  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names
