"""Modal time evolution, energy, norms and the observability functional.

In the eigenbasis the interface problem decouples into oscillators
``c_n'' + lambda_n c_n = h_n(t)``. All trajectories live in modal
coordinates; physical fields are synthesized on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chebyshev import ChebSeries
from .domain import mass_functional
from .errors import InputError, MassConditionError

__all__ = [
    "OBSERVABILITY_CONSTANT",
    "STEPS_PER_PERIOD",
    "Frequencies",
    "ModalState",
    "ModalData",
    "TrigForcing",
    "project_data",
    "evolve_homogeneous",
    "energy",
    "energy_rate",
    "energy_rate_bound",
    "state_mass",
    "reconstruct",
    "surface_elevation",
    "duhamel_resonant",
    "forced_trajectory",
    "evolve_forced",
    "norm_Lw",
    "norm_Hhalf_tilde",
    "norm_Hminus_tilde",
    "ObservabilityReport",
    "observability_lhs",
    "observability_ratio",
    "observability_constant",
    "observability_threshold",
    "default_horizon",
]

OBSERVABILITY_CONSTANT = 2.42
HORIZON_FACTOR = 3.0
STEPS_PER_PERIOD = 64
MASS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Frequencies:
    """Bare oscillator frequencies, a stand-in for a ModeSet in modal algebra."""

    thetas: np.ndarray

    def __post_init__(self):
        th = np.atleast_1d(np.array(self.thetas, dtype=float))
        if np.any(th <= 0) or not np.all(np.isfinite(th)):
            raise InputError("frequencies must be positive and finite")
        th.setflags(write=False)
        object.__setattr__(self, "thetas", th)

    @property
    def lambdas(self) -> np.ndarray:
        return self.thetas ** 2

    @property
    def n_modes(self) -> int:
        return self.thetas.size


def _vector(values, name) -> np.ndarray:
    arr = np.atleast_1d(np.array(values, dtype=float))
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ModalState:
    """Modal coefficients ``c_n`` and their time derivatives at time ``t``."""

    c: np.ndarray
    c_dot: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        c, cd = _vector(self.c, "c"), _vector(self.c_dot, "c_dot")
        if c.shape != cd.shape:
            raise InputError("c and c_dot must have equal lengths")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "c_dot", cd)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_modes(self) -> int:
        return self.c.size

    @classmethod
    def zeros(cls, n: int) -> "ModalState":
        return cls(np.zeros(n), np.zeros(n))


@dataclass(frozen=True, eq=False)
class ModalData:
    """Initial data ``phi0 = sum A_n e_n``, ``phi1 = sum theta_n B_n e_n``."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A, B = _vector(self.A, "A"), _vector(self.B, "B")
        if A.shape != B.shape:
            raise InputError("A and B must have equal lengths")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n_modes(self) -> int:
        return self.A.size

    @classmethod
    def zeros(cls, n: int) -> "ModalData":
        return cls(np.zeros(n), np.zeros(n))

    def initial_state(self, modes) -> ModalState:
        """``c(0) = A``, ``c'(0) = theta B``."""
        _check_size(self.n_modes, modes)
        return ModalState(self.A, np.asarray(modes.thetas) * self.B)

    @classmethod
    def from_state(cls, state: ModalState, modes) -> "ModalData":
        _check_size(state.n_modes, modes)
        return cls(state.c, state.c_dot / np.asarray(modes.thetas))

    def to_dict(self) -> dict:
        return {"A": [float(v) for v in self.A], "B": [float(v) for v in self.B]}


def _check_size(n: int, modes):
    if n != len(modes.thetas):
        raise InputError(f"data has {n} modes, mode set has {len(modes.thetas)}")


@dataclass(frozen=True, eq=False)
class TrigForcing:
    """Resonant forcing ``h_n(t) = a_n cos(theta_n t) + b_n sin(theta_n t)``."""

    thetas: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        th, a, b = _vector(self.thetas, "thetas"), _vector(self.a, "a"), _vector(self.b, "b")
        if not (th.shape == a.shape == b.shape):
            raise InputError("forcing amplitude lengths differ")
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        ph = np.multiply.outer(t, self.thetas)
        return self.a * np.cos(ph) + self.b * np.sin(ph)


# -- data and homogeneous evolution -----------------------------------------

def project_data(phi0, phi1, modes, tol: float = MASS_TOL) -> ModalData:
    """Modal amplitudes of initial data.

    ``A_n = (phi0, e_n)`` and ``B_n = (phi1, e_n) / theta_n`` in L^2 with
    density ``1/|f'|``.

    Raises
    ------
    MassConditionError
        If ``|int phi1 / |f'|| > tol``; an initial velocity potential rate
        must conserve volume.
    """
    m = mass_functional(phi1, modes.weight, modes.node_count)
    if abs(m) > tol:
        raise MassConditionError(f"initial rate has volume {m:.3e}; must be zero")
    return ModalData(modes.project(phi0), modes.project(phi1) / modes.thetas)


def evolve_homogeneous(data: ModalData, modes, t: float) -> ModalState:
    """``c_n(t) = A_n cos(theta_n t) + B_n sin(theta_n t)``."""
    if t < 0:
        raise InputError("time must be nonnegative")
    _check_size(data.n_modes, modes)
    th = np.asarray(modes.thetas)
    cs, sn = np.cos(th * t), np.sin(th * t)
    return ModalState(data.A * cs + data.B * sn, th * (data.B * cs - data.A * sn), t)


def energy(state: ModalState, modes) -> float:
    """``E = (1/2) sum c_dot^2 + (1/2) sum lambda c^2``."""
    _check_size(state.n_modes, modes)
    return float(0.5 * np.sum(state.c_dot ** 2) + 0.5 * np.sum(np.asarray(modes.lambdas) * state.c ** 2))


def energy_rate(state: ModalState, h) -> float:
    """``dE/dt = sum h_n c_dot_n`` for forcing values ``h``."""
    return float(np.dot(np.asarray(h, dtype=float), state.c_dot))


def energy_rate_bound(state: ModalState, modes, h) -> float:
    """``sqrt(2) ||h|| E^(1/2)``, an upper bound for :func:`energy_rate`."""
    return float(math.sqrt(2.0) * np.linalg.norm(h) * math.sqrt(energy(state, modes)))


def reconstruct(state: ModalState, modes) -> ChebSeries:
    """Surface potential ``sum c_n e_n``."""
    return modes.synthesize(state.c)


def surface_elevation(state: ModalState, modes) -> ChebSeries:
    """Elevation ``zeta = -d phi / dt = -sum c_dot_n e_n``."""
    return modes.synthesize(-state.c_dot)


def state_mass(state: ModalState, modes) -> float:
    """Volume functional of the reconstructed surface potential."""
    return mass_functional(reconstruct(state, modes), modes.weight, modes.node_count)


# -- forced evolution ---------------------------------------------------------

def duhamel_resonant(c0, cd0, theta, a, b, t):
    """Closed-form solution of ``c'' + theta^2 c = a cos(theta t) + b sin(theta t)``.

    Returns
    -------
    c, c_dot : ndarray
        State at time ``t``.
    """
    c0, cd0, th, a, b = (np.asarray(v, dtype=float) for v in (c0, cd0, theta, a, b))
    cs, sn = np.cos(th * t), np.sin(th * t)
    c = (c0 * cs + cd0 / th * sn + a * t / (2 * th) * sn
         + b * (-t / (2 * th) * cs + sn / (2 * th * th)))
    cd = (-c0 * th * sn + cd0 * cs + a * (sn / (2 * th) + t * cs / 2)
          + b * t * sn / 2)
    return c, cd


def _step_count(modes, T, steps_per_period):
    period = 2 * math.pi / float(np.max(modes.thetas))
    return max(1, int(math.ceil(T / period * steps_per_period)))


def forced_trajectory(state0: ModalState, modes, forcing: Callable, T: float,
                      steps_per_period: int = STEPS_PER_PERIOD):
    """Piecewise-exact stepping with piecewise-linear forcing.

    Each step solves ``c'' + lambda c = h0 + s tau`` exactly, so the only
    error is the linear interpolation of the forcing.

    Returns
    -------
    times : ndarray, shape (S + 1,)
    C, Cdot : ndarray, shape (S + 1, n_modes)
    H : ndarray, shape (S + 1, n_modes)
        Forcing samples on the grid.
    """
    if T <= 0:
        raise InputError("horizon T must be positive")
    _check_size(state0.n_modes, modes)
    lam = np.asarray(modes.lambdas, dtype=float)
    th = np.sqrt(lam)
    S = _step_count(modes, T, steps_per_period)
    times = state0.t + np.linspace(0.0, T, S + 1)
    H = np.empty((S + 1, lam.size))
    for k, t in enumerate(times):
        H[k] = np.broadcast_to(np.asarray(forcing(t), dtype=float), lam.shape)
    if not np.all(np.isfinite(H)):
        raise InputError("non-finite forcing sample")
    tau = T / S
    cs, sn = np.cos(th * tau), np.sin(th * tau)
    C = np.empty_like(H)
    Cd = np.empty_like(H)
    C[0], Cd[0] = state0.c, state0.c_dot
    for k in range(S):
        h0 = H[k]
        s = (H[k + 1] - h0) / tau
        A = C[k] - h0 / lam
        B = (Cd[k] - s / lam) / th
        C[k + 1] = A * cs + B * sn + (h0 + s * tau) / lam
        Cd[k + 1] = th * (B * cs - A * sn) + s / lam
    return times, C, Cd, H


def evolve_forced(state0: ModalState, modes, forcing, T: float,
                  steps_per_period: int = STEPS_PER_PERIOD) -> ModalState:
    """State at ``t0 + T`` of ``c_n'' + lambda_n c_n = h_n(t)``.

    Parameters
    ----------
    forcing : TrigForcing, callable or None
        Resonant trig forcing at the modal frequencies is integrated in
        closed form; any other callable ``t -> h`` by piecewise-exact
        stepping; ``None`` means no forcing.
    """
    if T <= 0:
        raise InputError("horizon T must be positive")
    _check_size(state0.n_modes, modes)
    th = np.asarray(modes.thetas, dtype=float)
    if forcing is None:
        data = ModalData.from_state(state0, modes)
        out = evolve_homogeneous(data, modes, T)
        return ModalState(out.c, out.c_dot, state0.t + T)
    if isinstance(forcing, TrigForcing) and state0.t == 0.0 and np.array_equal(forcing.thetas, th):
        c, cd = duhamel_resonant(state0.c, state0.c_dot, th, forcing.a, forcing.b, T)
        return ModalState(c, cd, T)
    times, C, Cd, _ = forced_trajectory(state0, modes, forcing, T, steps_per_period)
    return ModalState(C[-1], Cd[-1], times[-1])


# -- norms ------------------------------------------------------------------------

def _coefficients(x, modes) -> np.ndarray:
    if isinstance(x, ModalData):
        return x.A
    if isinstance(x, ModalState):
        return x.c
    if callable(x):
        if modes is None:
            raise InputError("a mode set is needed to project a function")
        return modes.project(x)
    return _vector(x, "coefficients")


def norm_Lw(x, modes=None) -> float:
    """``(sum (phi, e_n)^2)^(1/2)``, the L^2 norm with density ``1/|f'|``."""
    c = _coefficients(x, modes)
    return float(math.sqrt(np.sum(c * c)))


def norm_Hhalf_tilde(x, modes) -> float:
    """``(sum lambda_n (phi, e_n)^2)^(1/2)``."""
    c = _coefficients(x, modes)
    return float(math.sqrt(np.sum(np.asarray(modes.lambdas)[: c.size] * c * c)))


def norm_Hminus_tilde(x, modes) -> float:
    """``(sum (phi, e_n)^2 / lambda_n)^(1/2)``."""
    c = _coefficients(x, modes)
    return float(math.sqrt(np.sum(c * c / np.asarray(modes.lambdas)[: c.size])))


# -- observability ---------------------------------------------------------------

@dataclass(frozen=True)
class ObservabilityReport:
    lhs: float
    rhs: float
    ratio: float
    T: float

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "T": self.T}


def observability_lhs(data: ModalData, modes, T: float) -> float:
    """``int_0^T ||phi(t)||^2 dt`` in closed form."""
    th = np.asarray(modes.thetas, dtype=float)
    A, B = data.A, data.B
    s2, c2 = np.sin(2 * th * T), np.cos(2 * th * T)
    terms = (A * A * (T / 2 + s2 / (4 * th)) + B * B * (T / 2 - s2 / (4 * th))
             + A * B * (1 - c2) / (2 * th))
    return float(np.sum(terms))


def observability_ratio(data: ModalData, modes, T: float) -> ObservabilityReport:
    """Observed energy over the horizon against the initial-data norm.

    ``lhs = int_0^T ||phi(t)||^2 dt``, ``rhs = ||phi1||^2_{-1/2} + ||phi0||^2
    = sum (A_n^2 + B_n^2)``.

    Raises
    ------
    InputError
        If ``T <= 0`` or the data are zero (ratio undefined).
    """
    if T <= 0:
        raise InputError("horizon T must be positive")
    _check_size(data.n_modes, modes)
    rhs = float(np.sum(data.A ** 2 + data.B ** 2))
    if rhs == 0.0:
        raise InputError("zero data: observability ratio is undefined")
    lhs = observability_lhs(data, modes, T)
    return ObservabilityReport(lhs, rhs, lhs / rhs, float(T))


def observability_constant(modes, T: float) -> float:
    """Sharp ``c`` with ``lhs >= c T rhs`` for all data on these modes.

    Per mode the quadratic form has smallest eigenvalue
    ``T/2 - |sin(theta T)| / (2 theta)``.
    """
    th = np.asarray(modes.thetas, dtype=float)
    return float(np.min(0.5 - np.abs(np.sin(th * T)) / (2 * th * T)))


def observability_threshold(modes) -> float:
    """``2.42 / (2 theta_1)``, the sufficient observation horizon."""
    return OBSERVABILITY_CONSTANT / (2.0 * float(np.min(modes.thetas)))


def default_horizon(modes) -> float:
    """Safety factor 3 over :func:`observability_threshold`."""
    return HORIZON_FACTOR * observability_threshold(modes)
