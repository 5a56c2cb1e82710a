"""Interface weights ``|f'(x)|`` from the container's conformal map.

A :class:`DomainWeight` carries the weight, its endpoint exponent
``beta`` (weight ~ c (1 - x^2)^beta near the contact points) and an
optional wall-weight map for points ``|x| > 1`` on the mapped walls.

Weighted integrals ``int g / weight dx`` use Gauss-Jacobi quadrature in
``theta = arccos x``. The endpoint factor ``sin(theta)^(1 - 2 beta)`` is
the Jacobi weight; the remaining integrand is smooth, so the rule
converges spectrally for every admissible ``beta``.
"""
from __future__ import annotations

import csv
import functools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import roots_jacobi

from .errors import AdmissibilityError, InputError

__all__ = [
    "DomainWeight",
    "half_disk_weight",
    "half_disk_inverse_map",
    "half_disk_map_derivative",
    "chebyshev_weight",
    "flat_weight",
    "custom_weight",
    "load_custom_weight",
    "weight_from_label",
    "admissibility_constant",
    "mass_rule",
    "mass_functional",
    "weighted_inner",
]

BETA_MAX = 0.5
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class DomainWeight:
    """Interface weight ``x -> |f'(f^{-1}(x))|`` on (-1, 1).

    Parameters
    ----------
    function : callable
        Vectorized weight, positive on (-1, 1).
    endpoint_exponent : float
        ``beta`` with weight ~ c (1 - x^2)^beta at the ends; must be <= 1/2.
    label : str
        Name used in serialized outputs.
    symmetric : bool
        Container is mirror symmetric, ``weight(x) == weight(-x)``.
    wall_weight : callable, optional
        ``|f'|`` at mapped wall points ``|x| > 1``. Only containers with a
        closed-form map provide it.
    """

    function: Callable = field(repr=False)
    endpoint_exponent: float
    label: str
    symmetric: bool = False
    wall_weight: Optional[Callable] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.endpoint_exponent > BETA_MAX:
            raise AdmissibilityError(
                f"endpoint exponent {self.endpoint_exponent} > 1/2: contact angle "
                "below pi/2, weight is not bounded below by C sqrt(1-x^2)")
        if self.symmetric:
            probe = np.linspace(0.0, 0.999, 257)
            left, right = self(probe), self(-probe)
            if np.max(np.abs(left - right)) > SYMMETRY_TOL * np.max(np.abs(left)):
                raise InputError(f"weight '{self.label}' flagged symmetric but is not even")

    def __call__(self, x):
        return self.function(np.asarray(x, dtype=float))

    @property
    def beta(self) -> float:
        return self.endpoint_exponent

    def reduced(self, x):
        """Smooth factor ``weight(x) / (1 - x^2)^beta``."""
        x = np.asarray(x, dtype=float)
        return self(x) / (1.0 - x * x) ** self.beta

    def mass_rule(self, node_count: int):
        """Nodes and weights with ``sum W_k g(x_k) ~ int g(x) / weight(x) dx``."""
        return mass_rule(self, node_count)


# -- half-disk container ---------------------------------------------------

def half_disk_inverse_map(x):
    """Preimage ``z = (1 - sqrt(1 - x^2)) / x`` inside the unit disk, |x| <= 1.

    Evaluated in the cancellation-free form ``x / (1 + sqrt(1 - x^2))``,
    which also gives the limit 0 at x = 0.
    """
    x = np.asarray(x, dtype=float)
    return x / (1.0 + np.sqrt(1.0 - x * x))


def half_disk_map_derivative(z):
    """``f'(z) = 2 (1 - z^2) / (1 + z^2)^2`` for ``f(z) = 2 z / (z^2 + 1)``."""
    z = np.asarray(z)
    return 2.0 * (1.0 - z * z) / (1.0 + z * z) ** 2


def _half_disk(x):
    return np.abs(half_disk_map_derivative(half_disk_inverse_map(x)))


def _half_disk_wall(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) <= 1.0):
        raise InputError("wall points must satisfy |x| > 1")
    # preimage on the lower unit circle: z = (1 - i sqrt(x^2 - 1)) / x
    z = (1.0 - 1j * np.sqrt(x * x - 1.0)) / x
    return np.abs(half_disk_map_derivative(z))


def half_disk_weight() -> DomainWeight:
    """Weight of the semicircular container (contact angles pi/2).

    Equals ``s (1 + s)`` with ``s = sqrt(1 - x^2)`` in closed form; it is
    computed here by composing the map derivative with its inverse.
    """
    return DomainWeight(_half_disk, 0.5, "half-disk", symmetric=True,
                        wall_weight=_half_disk_wall)


def _cheb(x):
    return np.sqrt(1.0 - x * x)


def chebyshev_weight() -> DomainWeight:
    """Synthetic weight ``sqrt(1 - x^2)``; makes ``A e = lambda e / w`` diagonal in T_n."""
    return DomainWeight(_cheb, 0.5, "cheb-fixture", symmetric=True)


def _flat(x):
    return np.ones_like(x, dtype=float)


def flat_weight() -> DomainWeight:
    """Unit weight (rigid-lid rectangle limit)."""
    return DomainWeight(_flat, 0.0, "flat", symmetric=True)


# -- custom containers ------------------------------------------------------

@dataclass(frozen=True)
class _SplineWeight:
    spline: CubicSpline
    beta: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        theta = np.arccos(np.clip(x, -1.0, 1.0))
        return self.spline(theta) * (1.0 - x * x) ** self.beta


def custom_weight(samples, endpoint_exponent: float, label: str = "custom",
                  wall_weight: Optional[Callable] = None) -> DomainWeight:
    """Interpolated weight from tabulated ``(x, value)`` samples.

    The endpoint factor ``(1 - x^2)^beta`` is divided out and the smooth
    remainder is interpolated by a cubic spline in ``theta = arccos x``,
    which resolves the square-root behaviour at the ends.

    Raises
    ------
    AdmissibilityError
        If ``endpoint_exponent > 1/2``.
    InputError
        For nonpositive values, fewer than 4 samples, repeated or
        out-of-range abscissae.
    """
    beta = float(endpoint_exponent)
    if beta > BETA_MAX:
        raise AdmissibilityError(
            f"endpoint exponent {beta} > 1/2 violates the contact-angle condition")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 4:
        raise InputError("samples must be at least 4 (x, value) pairs")
    x, v = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise InputError("samples must be finite")
    if np.any(v <= 0):
        raise InputError("weight samples must be positive")
    if np.any(np.abs(x) > 1):
        raise InputError("sample abscissae must lie in [-1, 1]")
    if beta != 0 and np.any(np.abs(x) == 1):
        raise InputError("samples at x = +-1 are singular for beta != 0")
    theta = np.arccos(x)
    order = np.argsort(theta)
    theta, red = theta[order], (v / (1.0 - x * x) ** beta)[order]
    if np.any(np.diff(theta) <= 0):
        raise InputError("sample abscissae must be distinct")
    fn = _SplineWeight(CubicSpline(theta, red), beta)
    probe = np.linspace(0.0, 0.999, 257)
    sym = bool(np.max(np.abs(fn(probe) - fn(-probe))) <= SYMMETRY_TOL * np.max(fn(probe)))
    return DomainWeight(fn, beta, label, symmetric=sym, wall_weight=wall_weight)


def load_custom_weight(path) -> DomainWeight:
    """Load a CSV with header ``x,weight`` and a JSON sidecar ``{beta, label}``.

    The sidecar is ``<path>.json`` or the CSV path with suffix ``.json``.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"custom weight file not found: {path}")
    sidecars = [path.with_suffix(path.suffix + ".json"), path.with_suffix(".json")]
    sidecar = next((p for p in sidecars if p.is_file()), None)
    if sidecar is None:
        raise InputError(f"missing JSON sidecar for {path}")
    try:
        meta = json.loads(sidecar.read_text())
        beta = float(meta["beta"])
        label = str(meta.get("label", path.stem))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed sidecar {sidecar}: {exc}") from exc
    try:
        with path.open(newline="") as fh:
            reader = csv.DictReader(row for row in fh if not row.startswith("#"))
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["x", "weight"]:
                raise InputError(f"{path} must have header 'x,weight'")
            rows = [(float(r["x"]), float(r["weight"])) for r in reader]
    except (ValueError, TypeError) as exc:
        raise InputError(f"malformed custom weight CSV {path}: {exc}") from exc
    return custom_weight(rows, beta, label)


def weight_from_label(label: str) -> DomainWeight:
    """Built-in weight by label, or ``custom:<path>``."""
    builtins = {"half-disk": half_disk_weight, "cheb-fixture": chebyshev_weight,
                "flat": flat_weight}
    if label in builtins:
        return builtins[label]()
    if label.startswith("custom:"):
        return load_custom_weight(label[len("custom:"):])
    raise InputError(f"unknown container '{label}'")


# -- functionals ------------------------------------------------------------

def admissibility_constant(w: DomainWeight, grid) -> float:
    """``min weight(x) / sqrt(1 - x^2)`` over interior grid points."""
    g = np.atleast_1d(np.asarray(grid, dtype=float))
    if g.size == 0 or np.any(np.abs(g) >= 1):
        raise InputError("grid must be nonempty and interior")
    return float(np.min(w(g) / np.sqrt(1.0 - g * g)))


@functools.lru_cache(maxsize=64)
def _jacobi_theta_rule(node_count: int, alpha: float):
    t, wq = roots_jacobi(node_count, alpha, alpha)
    theta = 0.5 * np.pi * (t + 1.0)
    # sin(theta)^alpha = (1 - t^2)^alpha * (cos(pi t / 2) / (1 - t^2))^alpha
    fac = (np.cos(0.5 * np.pi * t) / (1.0 - t * t)) ** alpha
    return theta, 0.5 * np.pi * wq * fac


@functools.lru_cache(maxsize=64)
def _mass_rule_cached(w: DomainWeight, node_count: int):
    theta, base = _jacobi_theta_rule(node_count, 1.0 - 2.0 * w.beta)
    x = np.cos(theta)
    red = w(x) / np.sin(theta) ** (2.0 * w.beta)
    weights = base / red
    x.setflags(write=False)
    weights.setflags(write=False)
    return x, weights


def mass_rule(w: DomainWeight, node_count: int):
    """Quadrature for ``int g(x) / weight(x) dx``.

    Parameters
    ----------
    w : DomainWeight
    node_count : int

    Returns
    -------
    nodes, weights : ndarray
        ``sum weights * g(nodes)`` approximates the integral.
    """
    if int(node_count) != node_count or node_count < 1:
        raise InputError("node_count must be a positive integer")
    return _mass_rule_cached(w, int(node_count))


def mass_functional(phi, w: DomainWeight, node_count: int = 256) -> float:
    """Volume functional ``int phi(x) / weight(x) dx``."""
    x, W = mass_rule(w, node_count)
    return float(np.dot(W, np.asarray(phi(x), dtype=float)))


def weighted_inner(f, g, w: DomainWeight, node_count: int = 256) -> float:
    """``(f, g)`` in L^2 with density ``1 / weight``."""
    x, W = mass_rule(w, node_count)
    return float(np.dot(W, np.asarray(f(x), dtype=float) * np.asarray(g(x), dtype=float)))
