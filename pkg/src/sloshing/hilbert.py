"""Finite Hilbert transform on [-1, 1] in Chebyshev coefficient space.

Principal-value integrals of polynomial data are never computed by
singular quadrature here. They follow from the exact pairs

    (1/pi) PV int T_r(s) / (sqrt(1-s^2) (x - s)) ds = -U_{r-1}(x),
    (1/pi) PV int sqrt(1-s^2) U_k(s) / (x - s) ds   =  T_{k+1}(x).

The Dirichlet-Neumann operator ``A`` acts diagonally,
``A T_n = n T_n / sqrt(1-x^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chebyshev import ChebSeries, QuadratureRule, first_kind_rule, u_series_value
from .errors import InputError, MassConditionError, MomentConditionError

__all__ = [
    "MOMENT_TOL",
    "WeightedSeries",
    "SecondKindSeries",
    "MomentPair",
    "airfoil_transform",
    "second_kind_transform",
    "t_to_u",
    "apply_A",
    "bilinear_A",
    "moments",
    "derivative_moments",
    "moment_corrected",
    "check_grid",
    "equivalent_forms",
    "equivalent_forms_gap",
    "moment_correction",
    "invert_on_interval",
    "forward_on_interval",
]

MOMENT_TOL = 1e-10
GRID_MARGIN = 1e-3


def _sqrt_weight(x):
    return np.sqrt(1.0 - np.asarray(x, dtype=float) ** 2)


@dataclass(frozen=True, eq=False)
class WeightedSeries:
    """``u(x) = sum_n u_n T_n(x) / sqrt(1 - x^2)``, an element of L^2_w."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    def numerator(self) -> ChebSeries:
        """The polynomial ``sqrt(1-x^2) u(x)``."""
        return ChebSeries(self.coeffs)

    def __call__(self, x):
        return self.numerator()(x) / _sqrt_weight(x)

    def l2w_norm_sq(self) -> float:
        """``int sqrt(1-x^2) u^2 dx = pi u_0^2 + (pi/2) sum_{n>=1} u_n^2``."""
        c = self.coeffs
        return float(np.pi * c[0] ** 2 + 0.5 * np.pi * np.sum(c[1:] ** 2))


@dataclass(frozen=True, eq=False)
class SecondKindSeries:
    """``v(x) = sqrt(1 - x^2) sum_k c_k U_k(x)``, vanishing at the ends."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=float).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __call__(self, x):
        return _sqrt_weight(x) * u_series_value(self.coeffs, x)

    def integral(self) -> float:
        """``int_{-1}^{1} v dx = (pi/2) c_0``."""
        return float(0.5 * np.pi * self.coeffs[0])


@dataclass(frozen=True)
class MomentPair:
    """Weighted moments ``m0 = int g / w`` and ``m1 = int x g / w``."""

    m0: float
    m1: float

    def max_abs(self) -> float:
        return max(abs(self.m0), abs(self.m1))


def airfoil_transform(phi: ChebSeries) -> np.ndarray:
    """Second-kind coefficients of ``(1/pi) PV int phi / (w (x - s)) ds``.

    Returns
    -------
    ndarray
        ``c`` with ``c_k = -a_{k+1}``, so the transform is
        ``sum_k c_k U_k(x)``. ``a_0`` does not contribute.
    """
    a = phi.coeffs
    if a.size == 1:
        return np.zeros(1)
    return -a[1:].copy()


def second_kind_transform(u_coeffs) -> ChebSeries:
    """``(1/pi) PV int sqrt(1-s^2) sum_k c_k U_k(s) / (x - s) ds`` as T-series."""
    c = np.asarray(u_coeffs, dtype=float).ravel()
    out = np.zeros(c.size + 1)
    out[1:] = c
    return ChebSeries(out)


def t_to_u(coeffs) -> np.ndarray:
    """Re-expand a first-kind series in second-kind polynomials.

    Uses ``T_0 = U_0``, ``T_1 = U_1 / 2``, ``T_n = (U_n - U_{n-2}) / 2``.
    """
    a = np.asarray(coeffs, dtype=float).ravel()
    c = np.zeros(a.size)
    c[0] += a[0]
    for n in range(1, a.size):
        c[n] += 0.5 * a[n]
        if n >= 2:
            c[n - 2] -= 0.5 * a[n]
    return c


def apply_A(phi: ChebSeries) -> WeightedSeries:
    """Dirichlet-Neumann operator: ``sum_n n a_n T_n / sqrt(1-x^2)``."""
    n = np.arange(phi.coeffs.size, dtype=float)
    return WeightedSeries(n * phi.coeffs)


def bilinear_A(phi: ChebSeries, psi: ChebSeries) -> float:
    """``(A phi, psi) = (pi/2) sum_{n>=1} n a_n b_n``.

    The elementwise product is formed before weighting by ``n`` so the
    result is bitwise symmetric in its arguments.
    """
    size = max(phi.coeffs.size, psi.coeffs.size)
    a = phi.padded(size - 1).coeffs
    b = psi.padded(size - 1).coeffs
    n = np.arange(size, dtype=float)
    return float(0.5 * np.pi * np.sum(n * (a * b)))


def moments(phi_x: Callable, rule: QuadratureRule | None = None) -> MomentPair:
    """Weighted moments of a tangential derivative.

    Parameters
    ----------
    phi_x : callable
        Tangential derivative, evaluable at the quadrature nodes.
    rule : QuadratureRule, optional
        First-kind rule. When omitted a rule exact for ``phi_x`` is used
        if it is a ChebSeries, else 128 nodes.
    """
    if rule is None:
        n = phi_x.N // 2 + 2 if isinstance(phi_x, ChebSeries) else 128
        rule = first_kind_rule(max(n, 2))
    vals = np.asarray(phi_x(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise InputError("moment integrand is not finite at the quadrature nodes")
    return MomentPair(rule.integrate(vals), rule.integrate(rule.nodes * vals))


def derivative_moments(phi: ChebSeries) -> MomentPair:
    """Moments of ``phi'``, exact for the polynomial derivative."""
    return moments(phi.derivative())


def moment_corrected(phi: ChebSeries) -> ChebSeries:
    """Adjust ``a_1`` and ``a_2`` so both derivative moments vanish.

    In coefficient form ``m0 = pi sum_{n odd} n a_n`` and
    ``m1 = pi sum_{n even} n a_n``.
    """
    a = np.array(phi.padded(2).coeffs)
    n = np.arange(a.size)
    odd = (n % 2 == 1) & (n >= 3)
    even = (n % 2 == 0) & (n >= 4)
    a[1] = -np.sum(n[odd] * a[odd])
    a[2] = -np.sum(n[even] * a[even]) / 2.0
    return ChebSeries(a)


def check_grid(grid) -> np.ndarray:
    """Validate pointwise evaluation grids (interior, clear of the ends)."""
    g = np.atleast_1d(np.asarray(grid, dtype=float))
    if g.size == 0:
        raise InputError("evaluation grid is empty")
    if np.any(np.abs(g) > 1.0 - GRID_MARGIN) or not np.all(np.isfinite(g)):
        raise InputError(f"grid points must satisfy |x| <= 1 - {GRID_MARGIN}")
    return g


def moment_correction(phi: ChebSeries, grid) -> np.ndarray:
    """``(1/w)(m1/pi + x m0/pi)``: the gap between the direct and integrated forms."""
    g = check_grid(grid)
    m = derivative_moments(phi)
    return (m.m1 + g * m.m0) / (np.pi * _sqrt_weight(g))


def equivalent_forms(phi: ChebSeries, grid, check: bool = True):
    """Vertical derivative at the interface by three equivalent formulas.

    Returns ``(direct, second_kind, integrated)`` arrays on ``grid``:

    * direct: ``w (1/pi) PV int phi_s / (w (x - s)) ds``, from the
      airfoil transform of the derivative series;
    * second_kind: ``(1/w) (1/pi) PV int w phi_s / (x - s) ds``, from the
      derivative re-expanded in U_k;
    * integrated: ``d/dx (w (1/pi) PV int phi / (w (x - s)) ds) = A phi``.

    The three agree only when both derivative moments vanish.

    Raises
    ------
    MomentConditionError
        If ``check`` and a moment exceeds ``MOMENT_TOL``.
    """
    g = check_grid(grid)
    if check:
        m = derivative_moments(phi)
        if abs(m.m0) > MOMENT_TOL:
            raise MomentConditionError(
                f"moment int phi'/sqrt(1-x^2) = {m.m0:.3e} is not zero")
        if abs(m.m1) > MOMENT_TOL:
            raise MomentConditionError(
                f"moment int x phi'/sqrt(1-x^2) = {m.m1:.3e} is not zero")
    w = _sqrt_weight(g)
    dphi = phi.derivative()
    direct = w * u_series_value(airfoil_transform(dphi), g)
    second_kind = second_kind_transform(t_to_u(dphi.coeffs))(g) / w
    integrated = apply_A(phi)(g)
    return direct, second_kind, integrated


def equivalent_forms_gap(phi: ChebSeries, eval_grid, check: bool = True) -> float:
    """Largest pairwise discrepancy among the three equivalent forms."""
    f1, f2, f3 = equivalent_forms(phi, eval_grid, check=check)
    return float(max(np.max(np.abs(f1 - f2)), np.max(np.abs(f1 - f3)),
                     np.max(np.abs(f2 - f3))))


def invert_on_interval(normal_data: Callable, order: int = 64) -> ChebSeries:
    """Tangential derivative from zero-mean normal derivative data.

    Inverts ``phi_y = w (1/pi) PV int phi_x / (w (x - s)) ds`` with the
    free constant set to zero. The data are expanded as
    ``phi_y = w sum_k b_k U_k`` by a midpoint rule in ``theta = arccos x``;
    then ``phi_x = -sum_k b_k T_{k+1}``.

    Parameters
    ----------
    normal_data : callable
        Vectorized data on [-1, 1].
    order : int
        Degree of the returned series. Evaluate it on any grid.

    Raises
    ------
    MassConditionError
        If ``|int phi_y dx| > 1e-10``.
    """
    if order < 1:
        raise InputError("order must be at least 1")
    M = 2 * (order + 1)
    theta = (np.arange(M) + 0.5) * np.pi / M
    x = np.cos(theta)
    vals = np.asarray(normal_data(x), dtype=float) * np.ones(M)
    if not np.all(np.isfinite(vals)):
        raise InputError("normal data is not finite on the quadrature grid")
    mean = float(np.pi / M * np.sum(vals * np.sin(theta)))
    if abs(mean) > MOMENT_TOL:
        raise MassConditionError(
            f"normal data has nonzero integral {mean:.3e}; volume is not conserved")
    k = np.arange(1, order + 1)
    b = (2.0 / M) * (np.sin(np.outer(k, theta)) @ vals)
    out = np.zeros(order + 1)
    out[1:] = -b
    return ChebSeries(out)


def forward_on_interval(phi_x: ChebSeries) -> SecondKindSeries:
    """Normal derivative ``w (1/pi) PV int phi_x / (w (x - s)) ds``."""
    return SecondKindSeries(airfoil_transform(phi_x))
