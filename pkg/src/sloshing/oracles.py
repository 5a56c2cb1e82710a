"""Slow reference computations used to audit the closed forms.

These integrate the modal oscillators numerically (adaptive Runge-Kutta,
adaptive quadrature) and share no algebra with the closed-form routines.
The CLI runs them under ``--check-oracle``.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import quad, solve_ivp

__all__ = ["ode_terminal", "time_quadrature_lhs"]


def ode_terminal(c0, cd0, thetas, forcing, T: float, rtol: float = 1e-12, atol: float = 1e-14):
    """Integrate ``c'' + theta^2 c = h(t)`` mode by mode with DOP853.

    Parameters
    ----------
    forcing : callable or None
        ``forcing(t)`` returning the full vector ``h(t)``.

    Returns
    -------
    c, c_dot : ndarray
        State at ``T``.
    """
    th = np.asarray(thetas, dtype=float)
    c = np.empty(th.size)
    cd = np.empty(th.size)
    for n, w in enumerate(th):
        def rhs(t, y, n=n, w=w):
            h = 0.0 if forcing is None else float(np.asarray(forcing(t))[n])
            return [y[1], h - w * w * y[0]]
        # resolve the oscillation: at least 20 steps per period
        sol = solve_ivp(rhs, (0.0, T), [float(c0[n]), float(cd0[n])], method="DOP853",
                        rtol=rtol, atol=atol, max_step=2 * np.pi / w / 20)
        c[n], cd[n] = sol.y[0, -1], sol.y[1, -1]
    return c, cd


def time_quadrature_lhs(A, B, thetas, T: float) -> float:
    """``int_0^T sum_n (A_n cos + B_n sin)^2 dt`` by adaptive quadrature."""
    th = np.asarray(thetas, dtype=float)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)

    def f(t):
        c = A * np.cos(th * t) + B * np.sin(th * t)
        return float(np.dot(c, c))

    limit = max(200, int(T * float(np.max(th))) * 4)
    val, _ = quad(f, 0.0, T, limit=limit, epsabs=1e-14, epsrel=1e-13)
    return float(val)
