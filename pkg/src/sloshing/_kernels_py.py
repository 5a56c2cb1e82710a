"""Pure numpy Chebyshev evaluation kernels (fallback backend).

Every routine runs the three-term recurrence vectorized over the
evaluation points, so results agree with the compiled backend to
round-off.
"""
import numpy as np


def clenshaw_t(coeffs, x):
    """Evaluate many first-kind series at many points.

    Parameters
    ----------
    coeffs : ndarray, shape (m, n)
        Row ``i`` holds a_0..a_{n-1} of series ``i``.
    x : ndarray, shape (p,)
        Evaluation points.

    Returns
    -------
    ndarray, shape (m, p)
        ``out[i, j] = sum_k coeffs[i, k] T_k(x[j])``.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    m, n = coeffs.shape
    if n == 0:
        return np.zeros((m, x.size))
    tx = 2.0 * x[None, :]
    b1 = np.zeros((m, x.size))
    b2 = np.zeros((m, x.size))
    for k in range(n - 1, 0, -1):
        b1, b2 = coeffs[:, k:k + 1] + tx * b1 - b2, b1
    return coeffs[:, :1] + x[None, :] * b1 - b2


def clenshaw_u(coeffs, x):
    """Evaluate many second-kind series; ``out[i, j] = sum_k c[i, k] U_k(x[j])``."""
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    m, n = coeffs.shape
    if n == 0:
        return np.zeros((m, x.size))
    tx = 2.0 * x[None, :]
    b1 = np.zeros((m, x.size))
    b2 = np.zeros((m, x.size))
    for k in range(n - 1, -1, -1):
        b1, b2 = coeffs[:, k:k + 1] + tx * b1 - b2, b1
    return b1


def _vander(degree, x, first):
    x = np.ascontiguousarray(x, dtype=float)
    out = np.empty((x.size, degree + 1))
    out[:, 0] = 1.0
    if degree >= 1:
        out[:, 1] = first * x
    for k in range(2, degree + 1):
        out[:, k] = 2.0 * x * out[:, k - 1] - out[:, k - 2]
    return out


def vander_t(degree, x):
    """Rows ``[T_0(x_j), ..., T_degree(x_j)]``."""
    return _vander(degree, x, 1.0)


def vander_u(degree, x):
    """Rows ``[U_0(x_j), ..., U_degree(x_j)]``."""
    return _vander(degree, x, 2.0)
