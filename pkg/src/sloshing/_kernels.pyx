# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Chebyshev evaluation kernels.

Same signatures and results as ``_kernels_py``; see that module for docs.
"""
import numpy as np


def clenshaw_t(const double[:, ::1] coeffs, const double[::1] x):
    cdef Py_ssize_t m = coeffs.shape[0], n = coeffs.shape[1], p = x.shape[0]
    out = np.zeros((m, p))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double b0, b1, b2, xx, tx
    if n == 0:
        return out
    for i in range(m):
        for j in range(p):
            xx = x[j]
            tx = 2.0 * xx
            b1 = 0.0
            b2 = 0.0
            for k in range(n - 1, 0, -1):
                b0 = coeffs[i, k] + tx * b1 - b2
                b2 = b1
                b1 = b0
            o[i, j] = coeffs[i, 0] + xx * b1 - b2
    return out


def clenshaw_u(const double[:, ::1] coeffs, const double[::1] x):
    cdef Py_ssize_t m = coeffs.shape[0], n = coeffs.shape[1], p = x.shape[0]
    out = np.zeros((m, p))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double b0, b1, b2, tx
    if n == 0:
        return out
    for i in range(m):
        for j in range(p):
            tx = 2.0 * x[j]
            b1 = 0.0
            b2 = 0.0
            for k in range(n - 1, -1, -1):
                b0 = coeffs[i, k] + tx * b1 - b2
                b2 = b1
                b1 = b0
            o[i, j] = b1
    return out


def vander_t(Py_ssize_t degree, const double[::1] x):
    cdef Py_ssize_t p = x.shape[0], j, k
    out = np.empty((p, degree + 1))
    cdef double[:, ::1] o = out
    cdef double xx
    for j in range(p):
        xx = x[j]
        o[j, 0] = 1.0
        if degree >= 1:
            o[j, 1] = xx
        for k in range(2, degree + 1):
            o[j, k] = 2.0 * xx * o[j, k - 1] - o[j, k - 2]
    return out


def vander_u(Py_ssize_t degree, const double[::1] x):
    cdef Py_ssize_t p = x.shape[0], j, k
    out = np.empty((p, degree + 1))
    cdef double[:, ::1] o = out
    cdef double xx
    for j in range(p):
        xx = x[j]
        o[j, 0] = 1.0
        if degree >= 1:
            o[j, 1] = 2.0 * xx
        for k in range(2, degree + 1):
            o[j, k] = 2.0 * xx * o[j, k - 1] - o[j, k - 2]
    return out
