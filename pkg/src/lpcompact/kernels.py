"""Kernel dispatch: the compiled extension when it imports, numpy otherwise.

Set ``LPCOMPACT_PURE_PYTHON=1`` to force the numpy fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("LPCOMPACT_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


# exponents the compiled loops evaluate by multiplication; any other p
# would go through scalar libm pow, which loses to numpy's vectorized power
_CHEAP_P = (1.0, 2.0, 3.0, 4.0)


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def tail_powers(mod, p: float) -> np.ndarray:
    mod = np.ascontiguousarray(mod, dtype=np.float64)
    if _impl is not _kernels_py and float(p) not in _CHEAP_P:
        # vectorized powers first, then the compiled compensated sums
        return _impl.tail_powers(np.ascontiguousarray(mod ** float(p)), 1.0)
    return _impl.tail_powers(mod, float(p))


def pnorm_dist_to(X, x, p: float, is_inf: bool) -> np.ndarray:
    impl = _impl if is_inf or float(p) in _CHEAP_P else _kernels_py
    return impl.pnorm_dist_to(_c(X), _c(x), float(p), bool(is_inf))


def joint_obj_grad(T, x, p: float):
    return _impl.joint_obj_grad(_c(T), _c(x), float(p))


def pair_obj_grad(T, x, y, p: float):
    return _impl.pair_obj_grad(_c(T), _c(x), _c(y), float(p))


def grid_radius_d2(T, p, t_lo, t_hi, nt, f_lo, f_hi, nf):
    return _impl.grid_radius_d2(_c(T), float(p), float(t_lo), float(t_hi), int(nt),
                                float(f_lo), float(f_hi), int(nf))


def grid_pairnorm_d2(T, p, lo, hi, n):
    impl = _impl if float(p) in _CHEAP_P else _kernels_py
    return impl.grid_pairnorm_d2(_c(T), float(p), np.ascontiguousarray(lo, dtype=np.float64),
                                  np.ascontiguousarray(hi, dtype=np.float64),
                                  np.ascontiguousarray(n, dtype=np.intp))


def implementation(name: str):
    """Return the raw kernel module by name ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(name)
