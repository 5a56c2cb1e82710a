"""Backend selection for the Chebyshev evaluation kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation. Setting ``SLOSHING_PURE_PYTHON=1`` forces the fallback.
``BACKEND`` names the active choice.
"""
import os

import numpy as np

from . import _kernels_py as python_impl

compiled_impl = None
if os.environ.get("SLOSHING_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_impl
    except ImportError:  # extension not built
        compiled_impl = None

_impl = compiled_impl if compiled_impl is not None else python_impl
BACKEND = "cython" if compiled_impl is not None else "python"



def _c2(a):
    return np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)


def _c1(a):
    return np.ascontiguousarray(np.ravel(a), dtype=np.float64)


def clenshaw_t(coeffs, x):
    """``out[i, j] = sum_k coeffs[i, k] T_k(x[j])``; shape (m, p)."""
    return np.asarray(_impl.clenshaw_t(_c2(coeffs), _c1(x)))


def clenshaw_u(coeffs, x):
    """``out[i, j] = sum_k coeffs[i, k] U_k(x[j])``; shape (m, p)."""
    return np.asarray(_impl.clenshaw_u(_c2(coeffs), _c1(x)))


def vander_t(degree, x):
    """Matrix of T_0..T_degree at the points; shape (p, degree + 1)."""
    return np.asarray(_impl.vander_t(int(degree), _c1(x)))


def vander_u(degree, x):
    """Matrix of U_0..U_degree at the points; shape (p, degree + 1)."""
    return np.asarray(_impl.vander_u(int(degree), _c1(x)))

__all__ = ["BACKEND", "clenshaw_t", "clenshaw_u", "vander_t", "vander_u",
           "python_impl", "compiled_impl"]
