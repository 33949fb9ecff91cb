"""Backend selection for the hot spectral loops.

The compiled module ``realitykit._kernels`` is used when it was built;
otherwise the NumPy fallback ``realitykit._kernels_py`` is loaded. Setting
``REALITYKIT_PURE_PYTHON=1`` forces the fallback.

The wrappers below coerce arguments to contiguous float64/complex128 arrays
so both backends receive identical inputs.
"""
import importlib
import os

import numpy as np

from . import _kernels_py


def _load_compiled():
    try:
        return importlib.import_module("realitykit._kernels")
    except ImportError:
        return None


_compiled = None if os.environ.get("REALITYKIT_PURE_PYTHON") else _load_compiled()
_impl = _compiled if _compiled is not None else _kernels_py

BACKEND = "cython" if _compiled is not None else "python"


def available_backends():
    """Names of the backends importable in this environment."""
    names = ["python"]
    if _load_compiled() is not None:
        names.append("cython")
    return names


def backend_module(name):
    if name == "python":
        return _kernels_py
    if name == "cython":
        mod = _load_compiled()
        if mod is None:
            raise ImportError("compiled kernels are not built")
        return mod
    raise ValueError(f"unknown backend {name!r}")


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def _c128(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def expm1_overlap_sum(r, log_r, log_s, w, beta, impl=None):
    impl = impl or _impl
    return impl.expm1_overlap_sum(_f64(r), _f64(log_r), _f64(log_s), _f64(w), float(beta))


def log_ratio_sum(r, log_r, log_s, w, impl=None):
    impl = impl or _impl
    return impl.log_ratio_sum(_f64(r), _f64(log_r), _f64(log_s), _f64(w))


def pinch(m, stride, d, impl=None):
    impl = impl or _impl
    return impl.pinch(_c128(m), int(stride), int(d))


def trace_middle(m, left, mid, right, impl=None):
    impl = impl or _impl
    return impl.trace_middle(_c128(m), int(left), int(mid), int(right))
