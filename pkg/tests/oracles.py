"""Independent reference computations for the test suite.

Principal values use QUADPACK's Cauchy-weighted rule (QAWC) after the
substitution ``s = cos(phi)``; the half-disk spectrum uses a Ritz method
with harmonic polynomials on the physical domain. Neither shares code
with the Chebyshev coefficient algebra under test.
"""
from __future__ import annotations

import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad
from scipy.linalg import eigh


def pv_theta(f_phi, x: float) -> float:
    """``PV int_0^pi f(phi) / (x - cos phi) dphi`` for ``|x| < 1``.

    Writes ``x - cos phi = 2 sin((phi + phi0)/2) sin((phi - phi0)/2)`` so
    the integrand handed to QAWC is smooth and free of cancellation.
    """
    phi0 = float(np.arccos(x))

    def g(phi):
        d = phi - phi0
        return f_phi(phi) / (np.sin(0.5 * (phi + phi0)) * np.sinc(d / (2 * np.pi)))

    # QAWC flags roundoff once it reaches machine precision; the value is still good
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(g, 0.0, np.pi, weight="cauchy", wvar=phi0, epsabs=1e-14, epsrel=1e-13,
                      limit=400)
    return float(val)


def pv_first_kind(f, x: float) -> float:
    """``(1/pi) PV int f(s) / (sqrt(1 - s^2) (x - s)) ds``."""
    return pv_theta(lambda p: f(np.cos(p)), x) / np.pi


def pv_second_kind(f, x: float) -> float:
    """``(1/pi) PV int sqrt(1 - s^2) f(s) / (x - s) ds``."""
    return pv_theta(lambda p: np.sin(p) ** 2 * f(np.cos(p)), x) / np.pi


def kernel_G_quad(x: float) -> float:
    """``PV int sqrt(1 - s^2) / (s - x) ds`` by quadrature."""
    if abs(x) < 1:
        return -pv_theta(lambda p: np.sin(p) ** 2, x)
    val, _ = quad(lambda s: 1.0 / (s - x), -1.0, 1.0, weight="alg", wvar=(0.5, 0.5),
                  epsabs=1e-14, epsrel=1e-13)
    return float(val)


def ritz_half_disk(parity: str, degree: int = 30, count: int = 4) -> np.ndarray:
    """Sloshing eigenvalues of the unit half-disk by the Ritz method.

    Trial functions are ``Re z^n`` and ``Im z^n`` restricted by parity in
    ``x``. The stiffness ``int |grad u|^2`` is integrated over the disk
    in polar coordinates, the mass ``int u^2`` over the free surface.
    For the even family the surface mean is removed from every trial
    function (volume conservation). Solving for ``1/lambda`` keeps the
    singular surface mass on the right-hand side harmless.
    """
    funcs = []  # (kind, n): kind 0 -> Re z^n, 1 -> Im z^n
    for n in range(1, degree + 1):
        re_odd = n % 2 == 1
        if parity == "odd":
            funcs.append((0, n) if re_odd else (1, n))
        else:
            funcs.append((1, n) if re_odd else (0, n))

    rr, rw = leggauss(degree + 4)
    r = 0.5 * (rr + 1)
    rw = 0.5 * rw
    tt, tw = leggauss(4 * degree + 40)
    t = -0.5 * np.pi * (tt + 1)
    tw = 0.5 * np.pi * tw
    R, TH = np.meshgrid(r, t, indexing="ij")
    W = np.outer(rw * r, tw)
    Z = R * np.exp(1j * TH)

    grads = []
    for kind, n in funcs:
        d = n * Z ** (n - 1)  # derivative of z^n; grad Re = (Re d, -Im d), grad Im = (Im d, Re d)
        grads.append((d.real, -d.imag) if kind == 0 else (d.imag, d.real))
    K = np.array([[np.sum(W * (gi[0] * gj[0] + gi[1] * gj[1])) for gj in grads] for gi in grads])

    xs, xw = leggauss(degree + 4)
    U = np.array([(xs ** n) if kind == 0 else np.zeros_like(xs) for kind, n in funcs])
    M = (U * xw) @ U.T
    if parity == "even":
        g = U @ xw
        M = M - np.outer(g, g) / 2.0
    mu = eigh(0.5 * (M + M.T), 0.5 * (K + K.T), eigvals_only=True)
    mu = np.sort(mu[mu > 1e-12])[::-1]
    return 1.0 / mu[:count]
