"""Exact control of the interface oscillators and its wall-injection realization.

The control minimizing the quadratic adjoint functional is itself an
adjoint solution, ``h_n(t) = A_n cos(theta_n t) + B_n sin(theta_n t)``.
Per mode the amplitudes solve a 2x2 system with the controllability
Gramian ``Q_n = int_0^T [cos, sin]^T [cos, sin] dt``.

An interface forcing is realized by point fluxes ``j_i(t)`` at mapped wall
points ``|x_i| > 1``; N points reproduce the first N-1 modal forcings
together with the zero-net-flux condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chebyshev import first_kind_rule
from .domain import DomainWeight, mass_rule
from .dynamics import (
    STEPS_PER_PERIOD,
    ModalData,
    ModalState,
    TrigForcing,
    duhamel_resonant,
    energy,
    observability_threshold,
    project_data,
)
from .errors import ConditioningError, InputError, NearSingularError, PlacementError, ThresholdError

__all__ = [
    "GRAMIAN_COND_MAX",
    "PLACEMENT_COND_MAX",
    "ControlSolution",
    "InjectionPlan",
    "per_mode_gramian",
    "hum_control",
    "hum_control_from_series",
    "terminal_state",
    "shooting_control",
    "duality_sides",
    "kernel_G",
    "default_injection_points",
    "injection_matrix",
    "solve_injection",
    "plan_from_control",
    "injection_to_h",
    "injection_modal_forcing",
]

GRAMIAN_COND_MAX = 1e12
PLACEMENT_COND_MAX = 1e10
NEAR_SINGULAR = 1e-9
WALL_MARGIN = 1e-6
ZERO_SUM_TOL = 1e-12


def per_mode_gramian(thetas, T: float) -> np.ndarray:
    """Gramians ``Q_n``, shape (n, 2, 2).

    ``Q = [[T/2 + sin(2 th T)/(4 th), (1 - cos(2 th T))/(4 th)],
    [same, T/2 - sin(2 th T)/(4 th)]]``.
    """
    th = np.atleast_1d(np.asarray(thetas, dtype=float))
    s2, c2 = np.sin(2 * th * T), np.cos(2 * th * T)
    Q = np.empty((th.size, 2, 2))
    Q[:, 0, 0] = T / 2 + s2 / (4 * th)
    Q[:, 1, 1] = T / 2 - s2 / (4 * th)
    Q[:, 0, 1] = Q[:, 1, 0] = (1 - c2) / (4 * th)
    return Q


@dataclass(frozen=True, eq=False)
class ControlSolution:
    """Per-mode resonant control driving the target data to rest at ``T``.

    Attributes
    ----------
    adjoint_data : ModalData
        Minimizer of the adjoint functional; also the forcing amplitudes.
    thetas : ndarray
    T : float
    target : ModalData
        Initial data being steered to rest.
    initial_energy, terminal_energy : float
        Closed-form energies at 0 and ``T``.
    functional_value : float
        Minimum of the adjoint functional, ``-(1/2) sum x^T Q x``.
    gramian_conditions : ndarray
        Condition number of each per-mode Gramian.
    unresolved_residual : float
        Relative L^2 size of the target data outside the resolved modes
        (zero when the target is given modally).
    """

    adjoint_data: ModalData
    thetas: np.ndarray
    T: float
    target: ModalData
    initial_energy: float
    terminal_energy: float
    functional_value: float
    gramian_conditions: np.ndarray
    unresolved_residual: float = 0.0

    @property
    def h_modal(self) -> TrigForcing:
        return TrigForcing(self.thetas, self.adjoint_data.A, self.adjoint_data.B)

    def sample(self, steps_per_period: int = STEPS_PER_PERIOD):
        """Uniform samples of the modal forcing; returns ``(t, H)``."""
        if self.thetas.size == 0:
            return np.array([0.0, self.T]), np.zeros((2, 0))
        period = 2 * math.pi / float(np.max(self.thetas))
        S = max(1, int(math.ceil(self.T / period * steps_per_period)))
        t = np.linspace(0.0, self.T, S + 1)
        return t, self.h_modal(t)

    def h_field(self, modes, t: float, x):
        """Interface forcing ``sum_n h_n(t) e_n(x)``."""
        return self.h_modal(t) @ modes.evaluate(x)

    def to_dict(self) -> dict:
        return {
            "T": float(self.T),
            "thetas": [float(v) for v in self.thetas],
            "modes": [{"n": i + 1, "A": float(a), "B": float(b)}
                      for i, (a, b) in enumerate(zip(self.adjoint_data.A, self.adjoint_data.B))],
            "target": self.target.to_dict(),
            "initial_energy": float(self.initial_energy),
            "terminal_energy": float(self.terminal_energy),
            "functional_value": float(self.functional_value),
            "gramian_conditions": [float(v) for v in self.gramian_conditions],
            "unresolved_residual": float(self.unresolved_residual),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ControlSolution":
        try:
            A = [m["A"] for m in d["modes"]]
            B = [m["B"] for m in d["modes"]]
            return cls(ModalData(A, B), np.asarray(d["thetas"], dtype=float), float(d["T"]),
                       ModalData(d["target"]["A"], d["target"]["B"]),
                       float(d["initial_energy"]), float(d["terminal_energy"]),
                       float(d["functional_value"]), np.asarray(d["gramian_conditions"], dtype=float),
                       float(d.get("unresolved_residual", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed control solution: {exc}") from exc


def terminal_state(target: ModalData, thetas, amplitudes: ModalData, T: float) -> ModalState:
    """State at ``T`` from the target data under resonant forcing."""
    th = np.asarray(thetas, dtype=float)
    c, cd = duhamel_resonant(target.A, th * target.B, th, amplitudes.A, amplitudes.B, T)
    return ModalState(c, cd, T)


def hum_control(target: ModalData, modes, T: float) -> ControlSolution:
    """Minimal-norm control steering ``target`` to rest at time ``T``.

    Per mode solves ``Q_n (A_n, B_n) = (-psi1_n, theta_n psi0_n)`` where
    ``psi0_n = target.A_n`` and ``psi1_n = theta_n target.B_n``.

    Raises
    ------
    ThresholdError
        If ``T < 2.42 / (2 theta_1)``.
    ConditioningError
        If a Gramian condition number exceeds 1e12.
    """
    th = np.asarray(modes.thetas, dtype=float)
    if target.n_modes != th.size:
        raise InputError(f"target has {target.n_modes} modes, mode set has {th.size}")
    threshold = observability_threshold(modes)
    if not T >= threshold:
        raise ThresholdError(
            f"horizon T={T:.6g} is below the observability threshold "
            f"2.42/(2 theta_1) = {threshold:.6g}")
    Q = per_mode_gramian(th, T)
    conds = np.linalg.cond(Q)
    worst = int(np.argmax(conds))
    if conds[worst] > GRAMIAN_COND_MAX:
        raise ConditioningError(
            f"Gramian of mode {worst + 1} has condition {conds[worst]:.3e}; use a larger T")
    psi0, psi1 = target.A, th * target.B
    rhs = np.stack([-psi1, th * psi0], axis=1)
    x = np.linalg.solve(Q, rhs[:, :, None])[:, :, 0]
    amplitudes = ModalData(x[:, 0], x[:, 1])
    state0 = target.initial_state(modes)
    final = terminal_state(target, th, amplitudes, T)
    quad = np.einsum("ni,nij,nj->", x, Q, x)
    return ControlSolution(amplitudes, th.copy(), float(T), target,
                           energy(state0, modes), energy(final, modes),
                           float(-0.5 * quad), conds)


def hum_control_from_series(psi0, psi1, modes, T: float) -> ControlSolution:
    """HUM control for initial data given as functions or Chebyshev series.

    The resolved modal subsystem is controlled exactly; the relative
    weighted-L^2 part of ``(psi0, psi1)`` outside the span of the modes is
    reported as ``unresolved_residual``.
    """
    target = project_data(psi0, psi1, modes)
    sol = hum_control(target, modes, T)
    x, W = mass_rule(modes.weight, modes.node_count)
    total = 0.0
    missed = 0.0
    for f, coeffs in ((psi0, target.A), (psi1, target.B * modes.thetas)):
        vals = np.asarray(f(x), dtype=float)
        resid = vals - coeffs @ modes.evaluate(x)
        total += float(np.dot(W, vals * vals))
        missed += float(np.dot(W, resid * resid))
    rel = math.sqrt(missed / total) if total > 0 else 0.0
    return ControlSolution(sol.adjoint_data, sol.thetas, sol.T, sol.target, sol.initial_energy,
                           sol.terminal_energy, sol.functional_value, sol.gramian_conditions, rel)


def shooting_control(target: ModalData, thetas, T: float) -> ModalData:
    """Resonant amplitudes from the terminal conditions directly.

    Solves ``c_n(T) = c_n'(T) = 0`` as a linear system in ``(a_n, b_n)``
    built from unit-forcing Duhamel responses. Independent of the Gramian
    route and used to cross-check it.
    """
    th = np.asarray(thetas, dtype=float)
    zero = np.zeros_like(th)
    free = duhamel_resonant(target.A, th * target.B, th, zero, zero, T)
    ra = duhamel_resonant(zero, zero, th, np.ones_like(th), zero, T)
    rb = duhamel_resonant(zero, zero, th, zero, np.ones_like(th), T)
    S = np.empty((th.size, 2, 2))
    S[:, 0, 0], S[:, 0, 1] = ra[0], rb[0]
    S[:, 1, 0], S[:, 1, 1] = ra[1], rb[1]
    rhs = -np.stack([free[0], free[1]], axis=1)
    x = np.linalg.solve(S, rhs[:, :, None])[:, :, 0]
    return ModalData(x[:, 0], x[:, 1])


def duality_sides(adjoint: ModalData, forcing: ModalData, target: ModalData, thetas, T: float):
    """Both sides of the duality identity for resonant forcing.

    Returns ``(int_0^T sum_n h_n phi_n dt, -(psi1, phi0) + (psi0, phi1))``
    for the adjoint solution ``phi`` with data ``adjoint``. They agree when
    the forcing drives ``target`` to rest at ``T``.
    """
    th = np.asarray(thetas, dtype=float)
    Q = per_mode_gramian(th, T)
    p = np.stack([adjoint.A, adjoint.B], axis=1)
    h = np.stack([forcing.A, forcing.B], axis=1)
    lhs = float(np.einsum("ni,nij,nj->", p, Q, h))
    psi0, psi1 = target.A, th * target.B
    phi0, phi1 = adjoint.A, th * adjoint.B
    rhs = float(-np.dot(psi1, phi0) + np.dot(psi0, phi1))
    return lhs, rhs


# -- wall injection ---------------------------------------------------------------

def kernel_G(x):
    """``PV int_{-1}^{1} sqrt(1 - s^2) / (s - x) ds``.

    Equals ``-pi x`` inside the interval and ``pi (sign(x) sqrt(x^2 - 1) - x)``
    outside.

    Raises
    ------
    NearSingularError
        If ``| |x| - 1 | < 1e-9``.
    """
    x_arr = np.asarray(x, dtype=float)
    ax = np.abs(x_arr)
    if np.any(np.abs(ax - 1.0) < NEAR_SINGULAR) or not np.all(np.isfinite(x_arr)):
        raise NearSingularError("kernel evaluated within 1e-9 of the contact points")
    outer = np.pi * (np.sign(x_arr) * np.sqrt(np.where(ax > 1, x_arr * x_arr - 1.0, 0.0)) - x_arr)
    out = np.where(ax < 1.0, -np.pi * x_arr, outer)
    return float(out) if x_arr.ndim == 0 else out


def _validate_points(points, wall_weights):
    p = np.atleast_1d(np.asarray(points, dtype=float))
    ww = np.atleast_1d(np.asarray(wall_weights, dtype=float))
    if p.shape != ww.shape or p.ndim != 1:
        raise InputError("points and wall weights must be 1-D of equal length")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(ww))):
        raise InputError("points and wall weights must be finite")
    if np.any(np.abs(p) < 1.0 + WALL_MARGIN):
        raise ConditioningError("injection points must satisfy |x| >= 1 + 1e-6")
    if np.any(ww <= 0):
        raise InputError("wall weights must be positive")
    if np.unique(p).size != p.size:
        raise InputError("injection points must be distinct")
    return p, ww


@dataclass(frozen=True, eq=False)
class InjectionPlan:
    """Point fluxes ``j_i(t)`` at mapped wall points with zero net flux.

    Attributes
    ----------
    points : ndarray, shape (N,)
    wall_weights : ndarray, shape (N,)
        ``|f'|`` at the wall points.
    times : ndarray, shape (S,)
    rates : ndarray, shape (S, N)
    """

    points: np.ndarray
    wall_weights: np.ndarray
    times: np.ndarray
    rates: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        p, ww = _validate_points(self.points, self.wall_weights)
        t = np.atleast_1d(np.asarray(self.times, dtype=float))
        r = np.asarray(self.rates, dtype=float).reshape(t.size, p.size)
        if not np.all(np.isfinite(r)):
            raise InputError("rates must be finite")
        sums = np.abs(r.sum(axis=1))
        scale = np.max(np.abs(r), axis=1)
        if np.any(sums > ZERO_SUM_TOL * scale + 1e-300):
            raise InputError("rates violate zero net flux")
        for name, arr in (("points", p), ("wall_weights", ww), ("times", t), ("rates", r)):
            arr = np.array(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_points(self) -> int:
        return self.points.size

    def to_dict(self) -> dict:
        return {"points": [float(v) for v in self.points],
                "wall_weights": [float(v) for v in self.wall_weights],
                "meta": self.meta}


def default_injection_points(n: int) -> np.ndarray:
    """``+1.5, -1.5, +2.0, -2.0, ...``: the first ``n`` of ``+-(1 + 0.5 k)``."""
    if n < 2:
        raise InputError("at least two injection points are needed")
    k = np.arange(n) // 2 + 1
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return sign * (1.0 + 0.5 * k)


def _kernel_factor(points, x):
    """``(G(x_j) - G(x)) / (x - x_j)`` for interface ``x``; shape (len(x), N)."""
    Gp = kernel_G(points)
    Gx = -np.pi * x
    return (Gp[None, :] - Gx[:, None]) / (x[:, None] - points[None, :])


def _default_nodes(modes) -> int:
    return modes.coeffs.shape[1] + 128


def injection_matrix(points, wall_weights, modes, node_count: Optional[int] = None) -> np.ndarray:
    """``m_ij = (1/(pi^2 |f'(x_j)|)) int (G(x_j) - G(x)) e_i(x) / (w(x)(x - x_j)) dx``.

    Rows are the first N-1 modes, columns the N points. The ``1/w`` factor
    is the first-kind quadrature weight; the rest is smooth because every
    ``x_j`` lies outside [-1, 1].
    """
    p, ww = _validate_points(points, wall_weights)
    N = p.size
    if modes.n_modes < N - 1:
        raise InputError(f"{N} points need at least {N - 1} modes")
    rule = first_kind_rule(node_count or _default_nodes(modes))
    x = rule.nodes
    F = _kernel_factor(p, x)
    E = modes.evaluate(x)[: N - 1]
    return (E * rule.weights) @ F / (np.pi ** 2 * ww[None, :])


def solve_injection(h_targets, points, wall_weights, modes, times=None,
                    node_count: Optional[int] = None) -> InjectionPlan:
    """Fluxes reproducing N-1 modal forcings with zero net flux.

    Parameters
    ----------
    h_targets : array_like, shape (S, N-1)
        Modal forcing samples ``h_i(t_k)``.
    points, wall_weights : array_like, shape (N,)
    modes : ModeSet
    times : array_like, shape (S,), optional

    Raises
    ------
    PlacementError
        If ``[m; 1 ... 1]`` has condition number above 1e10.
    """
    p, ww = _validate_points(points, wall_weights)
    N = p.size
    H = np.atleast_2d(np.asarray(h_targets, dtype=float))
    if H.shape[1] != N - 1:
        raise InputError(f"{N} points control exactly {N - 1} modes; got {H.shape[1]} targets")
    if not np.all(np.isfinite(H)):
        raise InputError("modal targets must be finite")
    t = np.arange(H.shape[0], dtype=float) if times is None else np.asarray(times, dtype=float)
    if t.shape != (H.shape[0],):
        raise InputError("times and targets disagree in length")
    m = injection_matrix(p, ww, modes, node_count)
    full = np.vstack([m, np.ones((1, N))])
    cond = float(np.linalg.cond(full))
    if not cond <= PLACEMENT_COND_MAX:
        raise PlacementError(
            f"injection system condition {cond:.3e} exceeds {PLACEMENT_COND_MAX:.0e}; "
            "choose different wall points")
    # eliminate j_N = -sum_{i<N} j_i so the zero-sum row holds exactly
    reduced = m[:, : N - 1] - m[:, N - 1:N]
    J = np.empty((H.shape[0], N))
    J[:, : N - 1] = np.linalg.solve(reduced, H.T).T
    J[:, N - 1] = -J[:, : N - 1].sum(axis=1)
    return InjectionPlan(p, ww, t, J, {"condition": cond})


def plan_from_control(solution, modes, points=None, wall_weights=None,
                      steps_per_period: int = STEPS_PER_PERIOD) -> InjectionPlan:
    """Realize the first N-1 modal forcings of a control by N wall fluxes.

    Defaults to ``n_modes + 1`` points at :func:`default_injection_points`
    with wall weights from the container map.
    """
    if points is None:
        points = default_injection_points(modes.n_modes + 1)
    p = np.asarray(points, dtype=float)
    if wall_weights is None:
        if modes.weight.wall_weight is None:
            raise InputError(
                f"container '{modes.weight.label}' has no wall map; supply wall weights")
        wall_weights = modes.weight.wall_weight(p)
    t, H = solution.sample(steps_per_period)
    return solve_injection(H[:, : p.size - 1], p, wall_weights, modes, t)


def injection_to_h(plan: InjectionPlan, w: DomainWeight, x, rates=None):
    """Interface forcing induced by the wall fluxes.

    ``h(x) = (|f'(x)| / w(x)) sum_i j_i (G(x_i) - G(x)) / (pi^2 |f'(x_i)| (x - x_i))``

    Parameters
    ----------
    rates : array_like, optional
        Flux vector ``j`` (shape (N,)) or samples (shape (S, N)); defaults
        to all plan samples.

    Returns
    -------
    ndarray
        Shape (S, len(x)) for sampled rates, (len(x),) for a single vector.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) >= 1):
        raise InputError("interface points must satisfy |x| < 1")
    J = plan.rates if rates is None else np.asarray(rates, dtype=float)
    F = _kernel_factor(plan.points, x) / (np.pi ** 2 * plan.wall_weights[None, :])
    pref = w(x) / np.sqrt(1.0 - x * x)
    return (J @ F.T) * pref


def injection_modal_forcing(plan: InjectionPlan, modes, method: str = "first-kind",
                            node_count: Optional[int] = None) -> np.ndarray:
    """Modal projections ``(h, e_n)`` of the injected forcing, shape (S, n_modes).

    ``method="first-kind"`` cancels ``|f'|`` analytically and integrates with
    the first-kind rule. ``method="mass-rule"`` evaluates ``h`` pointwise and
    projects with the weight's Gauss-Jacobi mass rule, an independent
    quadrature.
    """
    if method == "first-kind":
        rule = first_kind_rule(node_count or _default_nodes(modes))
        x = rule.nodes
        F = _kernel_factor(plan.points, x) / (np.pi ** 2 * plan.wall_weights[None, :])
        E = modes.evaluate(x)
        return plan.rates @ (F.T @ (E * rule.weights).T)
    if method == "mass-rule":
        x, W = mass_rule(modes.weight, node_count or modes.node_count)
        h = injection_to_h(plan, modes.weight, x)
        return (h * W) @ modes.evaluate(x).T
    raise InputError(f"unknown projection method '{method}'")
