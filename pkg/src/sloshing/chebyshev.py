"""Chebyshev polynomials, Gauss-Chebyshev quadrature and projection.

All function representations in the package are truncated first-kind
Chebyshev series on [-1, 1].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError, InputError

__all__ = [
    "ChebSeries",
    "QuadratureRule",
    "eval_T",
    "eval_U",
    "first_kind_rule",
    "project",
    "project_many",
    "u_series_value",
]


def _as_coeffs(values) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        arr = np.zeros(1)
    return arr


@dataclass(frozen=True, eq=False)
class ChebSeries:
    """Truncated series ``sum_n a_n T_n(x)``.

    Parameters
    ----------
    coeffs : array_like
        Coefficients a_0..a_N, index equal to degree. An empty input is
        read as the zero series.

    Notes
    -----
    Equality is exact after zero-padding to a common length, so series of
    different truncation order compare equal when they represent the same
    polynomial coefficient-wise.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        arr = _as_coeffs(self.coeffs)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def basis(cls, n: int, scale: float = 1.0) -> "ChebSeries":
        """The single term ``scale * T_n``."""
        c = np.zeros(n + 1)
        c[n] = scale
        return cls(c)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        vals = kernels.clenshaw_t(self.coeffs, x_arr.ravel())[0]
        if x_arr.ndim == 0:
            return float(vals[0])
        return vals.reshape(x_arr.shape)

    def padded(self, N: int) -> "ChebSeries":
        """Zero-pad (never truncate) to order at least ``N``."""
        if N <= self.N:
            return self
        c = np.zeros(N + 1)
        c[: self.coeffs.size] = self.coeffs
        return ChebSeries(c)

    def truncated(self, N: int) -> "ChebSeries":
        return ChebSeries(self.coeffs[: N + 1])

    def derivative(self) -> "ChebSeries":
        """Series of d/dx, exact in coefficient space."""
        if self.N == 0:
            return ChebSeries([0.0])
        return ChebSeries(np.polynomial.chebyshev.chebder(self.coeffs))

    def _binary(self, other, op):
        if not isinstance(other, ChebSeries):
            return NotImplemented
        n = max(self.N, other.N)
        return ChebSeries(op(self.padded(n).coeffs, other.padded(n).coeffs))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, ChebSeries):
            return ChebSeries(np.polynomial.chebyshev.chebmul(self.coeffs, scalar.coeffs))
        return ChebSeries(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return ChebSeries(-self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, ChebSeries):
            return NotImplemented
        n = max(self.N, other.N)
        return bool(np.array_equal(self.padded(n).coeffs, other.padded(n).coeffs))

    __hash__ = None

    def __repr__(self):
        return f"ChebSeries({self.coeffs.tolist()!r})"

    def to_list(self) -> list[float]:
        return [float(v) for v in self.coeffs]

    def to_json(self) -> str:
        """JSON array of coefficients, index = degree."""
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> "ChebSeries":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"ChebSeries JSON is not valid JSON: {exc}") from exc
        return cls.from_list(data)

    @classmethod
    def from_list(cls, data) -> "ChebSeries":
        if not isinstance(data, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in data
        ):
            raise InputError("ChebSeries must be a JSON array of numbers")
        arr = np.array(data, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise InputError("ChebSeries coefficients must be finite")
        return cls(arr)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for integrals against ``1/sqrt(1 - x^2)``."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "first-kind"

    def integrate(self, values) -> float:
        """``sum_k w_k values_k`` for values sampled at the nodes."""
        return float(np.dot(self.weights, values))

    def __len__(self):
        return self.nodes.size


def _check_domain(x: np.ndarray):
    if np.any(np.abs(x) > 1.0) or not np.all(np.isfinite(x)):
        raise DomainError("Chebyshev polynomials are evaluated only for |x| <= 1")


def _eval_single(n: int, x, vander):
    if int(n) != n or n < 0:
        raise InputError(f"degree must be a nonnegative integer, got {n!r}")
    x_arr = np.asarray(x, dtype=float)
    _check_domain(x_arr)
    vals = vander(int(n), x_arr.ravel())[:, int(n)]
    if x_arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(x_arr.shape)


def eval_T(n: int, x):
    """First-kind polynomial T_n(x) by the three-term recurrence.

    Raises
    ------
    DomainError
        If any ``|x| > 1``.
    """
    return _eval_single(n, x, kernels.vander_t)


def eval_U(n: int, x):
    """Second-kind polynomial U_n(x) by the three-term recurrence."""
    return _eval_single(n, x, kernels.vander_u)


def u_series_value(coeffs, x):
    """Evaluate ``sum_k c_k U_k(x)``."""
    x_arr = np.asarray(x, dtype=float)
    vals = kernels.clenshaw_u(np.asarray(coeffs, dtype=float), x_arr.ravel())[0]
    if x_arr.ndim == 0:
        return float(vals[0])
    return vals.reshape(x_arr.shape)


def first_kind_rule(node_count: int) -> QuadratureRule:
    """Gauss-Chebyshev rule of the first kind.

    Nodes ``cos((2k+1) pi / (2n))`` with equal weights ``pi / n``; exact for
    ``int p(x) / sqrt(1-x^2) dx`` with ``deg p <= 2n - 1``.
    """
    if int(node_count) != node_count or node_count < 1:
        raise InputError("node_count must be a positive integer")
    n = int(node_count)
    k = np.arange(n)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * n))
    weights = np.full(n, np.pi / n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights)


def project(g: Callable, N: int) -> ChebSeries:
    """Chebyshev coefficients of ``g`` up to degree ``N``.

    Uses ``2(N+1)`` first-kind nodes, so polynomials of degree <= N are
    reproduced to round-off and aliasing of smooth inputs is suppressed.

    Parameters
    ----------
    g : callable
        Vectorized function on [-1, 1].
    N : int
        Truncation order.
    """
    return project_many([g], N)[0]


def project_many(gs, N: int) -> list[ChebSeries]:
    """Project several functions at once, sharing nodes and Vandermonde matrix."""
    if int(N) != N or N < 0:
        raise InputError("truncation order must be a nonnegative integer")
    rule = first_kind_rule(2 * (int(N) + 1))
    samples = np.empty((len(gs), rule.nodes.size))
    for i, g in enumerate(gs):
        samples[i] = np.broadcast_to(np.asarray(g(rule.nodes), dtype=float), rule.nodes.shape)
    if not np.all(np.isfinite(samples)):
        raise InputError("non-finite sample value in projection")
    V = kernels.vander_t(int(N), rule.nodes)
    coeffs = (2.0 / np.pi) * ((samples * rule.weights) @ V)
    coeffs[:, 0] *= 0.5
    return [ChebSeries(c) for c in coeffs]
