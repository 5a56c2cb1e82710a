"""Galerkin solution of the sloshing eigenproblem ``A e = lambda e / |f'|``.

The weak form pairs the Dirichlet-Neumann stiffness
``K_ij = (pi/2) sum_n n a_n^i a_n^j`` with the mass matrix
``M_ij = int psi_i psi_j / |f'| dx`` over a trigonometric or Chebyshev
basis. Symmetric families carry the volume constraint
``int phi / |f'| dx = 0``, imposed by restricting to its null space.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from . import kernels
from .chebyshev import ChebSeries, project_many
from .domain import DomainWeight, mass_rule, weight_from_label
from .errors import InputError, ResolutionError
from .hilbert import airfoil_transform
from .chebyshev import u_series_value

__all__ = [
    "FAMILIES",
    "BasisSpec",
    "ModeSet",
    "basis_series",
    "default_n_cheb",
    "default_node_count",
    "assemble_stiffness",
    "assemble_mass",
    "mass_vector",
    "solve_modes",
    "family_for",
    "rayleigh_quotient",
    "collocation_eigenvalues",
]

TRAILING_TOL = 1e-12
TRAILING_COUNT = 4
RESIDUAL_TOL = 1e-8
CLUSTER_TOL = 1e-10

# family -> (end condition, parity, needs volume constraint)
FAMILIES = {
    "pinned-antisymmetric": ("pinned", "odd", False),
    "pinned-symmetric": ("pinned", "even", True),
    "pinned-full": ("pinned", "full", True),
    "free-antisymmetric": ("free", "odd", False),
    "free-symmetric": ("free", "even", True),
    "free-full": ("free", "full", True),
    "chebyshev": ("none", "full", True),
    "chebyshev-odd": ("none", "odd", False),
    "chebyshev-even": ("none", "even", True),
}

_TRIG_REQUIRED = {"pinned-symmetric", "free-symmetric", "pinned-full", "free-full"}


def family_for(end_condition: str, symmetry: str, chebyshev: bool = False) -> str:
    """Family name from an end condition and a symmetry class."""
    suffix = {"antisymmetric": "antisymmetric", "symmetric": "symmetric", "full": "full"}
    if symmetry not in suffix:
        raise InputError(f"unknown symmetry '{symmetry}'")
    if chebyshev:
        return {"antisymmetric": "chebyshev-odd", "symmetric": "chebyshev-even",
                "full": "chebyshev"}[symmetry]
    if end_condition not in ("pinned", "free"):
        raise InputError(f"unknown end condition '{end_condition}'")
    return f"{end_condition}-{suffix[symmetry]}"


@dataclass(frozen=True)
class BasisSpec:
    """Approximation basis for the weak eigenproblem.

    Trigonometric families, by frequency ``k pi / 2``:

    * pinned-antisymmetric ``sin(n pi x)``, n >= 1
    * pinned-symmetric ``cos((n + 1/2) pi x)``, n >= 0
    * free-antisymmetric ``sin((n + 1/2) pi x)``, n >= 0
    * free-symmetric ``cos(n pi x)``, n >= 1
    * pinned-full / free-full: union of the two, ordered by frequency

    Chebyshev families use ``T_n`` with n >= 1 (all, odd or even n).
    Constrained non-pinned families also carry the constant, whose
    coefficient the volume constraint then determines.

    Parameters
    ----------
    family : str
    count : int
        Number of basis functions.
    mass_constraint : bool, optional
        Impose ``int phi / |f'| = 0``. Defaults per family; cannot be
        switched off for trigonometric families with symmetric members.
    """

    family: str
    count: int
    mass_constraint: Optional[bool] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown basis family '{self.family}'")
        if int(self.count) != self.count or self.count < 1:
            raise InputError("basis count must be a positive integer")
        default = FAMILIES[self.family][2]
        if self.mass_constraint is None:
            object.__setattr__(self, "mass_constraint", default)
        elif not self.mass_constraint and self.family in _TRIG_REQUIRED:
            raise InputError(f"family '{self.family}' requires the volume constraint")

    @property
    def end_condition(self) -> str:
        return FAMILIES[self.family][0]

    @property
    def parity(self) -> str:
        return FAMILIES[self.family][1]

    def half_frequencies(self) -> np.ndarray:
        """Integers k with basis frequency ``k pi / 2`` (trig families)."""
        c = self.count
        if self.family == "pinned-antisymmetric":
            return 2 * np.arange(1, c + 1)
        if self.family == "pinned-symmetric":
            return 2 * np.arange(c) + 1
        if self.family == "free-antisymmetric":
            return 2 * np.arange(c) + 1
        if self.family == "free-symmetric":
            return 2 * np.arange(1, c + 1)
        if self.family in ("pinned-full", "free-full"):
            return np.arange(1, c + 1)
        raise InputError(f"family '{self.family}' is not trigonometric")

    def degrees(self) -> np.ndarray:
        """Chebyshev degrees of the basis (Chebyshev families)."""
        c = self.count
        if self.family == "chebyshev":
            return np.arange(1, c + 1)
        if self.family == "chebyshev-odd":
            return 2 * np.arange(c) + 1
        if self.family == "chebyshev-even":
            return 2 * np.arange(1, c + 1)
        raise InputError(f"family '{self.family}' is not a Chebyshev family")

    @property
    def is_chebyshev(self) -> bool:
        return self.family.startswith("chebyshev")

    @property
    def carries_constant(self) -> bool:
        """Constant term prepended so the volume constraint can fix ``a_0``.

        Pinned families are complete in the constrained subspace without it.
        """
        return bool(self.mass_constraint) and self.end_condition != "pinned"

    def functions(self):
        """Basis functions as vectorized callables."""
        head = [ChebSeries([1.0])] if self.carries_constant else []
        if self.is_chebyshev:
            return head + [ChebSeries.basis(int(n)) for n in self.degrees()]
        out = head
        pinned = self.end_condition == "pinned"
        for k in self.half_frequencies():
            omega = 0.5 * np.pi * k
            # pinned: cos for odd k, sin for even k; free: the reverse
            use_cos = (k % 2 == 1) == pinned
            out.append(_Trig(omega, bool(use_cos)))
        return out

    def max_frequency(self) -> float:
        if self.is_chebyshev:
            return float(np.max(self.degrees()))
        return float(0.5 * np.pi * np.max(self.half_frequencies()))

    def to_dict(self) -> dict:
        return {"family": self.family, "count": int(self.count),
                "mass_constraint": bool(self.mass_constraint)}

    @classmethod
    def from_dict(cls, d: dict) -> "BasisSpec":
        return cls(d["family"], int(d["count"]), bool(d["mass_constraint"]))


@dataclass(frozen=True)
class _Trig:
    omega: float
    cosine: bool

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.cos(self.omega * x) if self.cosine else np.sin(self.omega * x)


def default_n_cheb(spec: BasisSpec) -> int:
    """Chebyshev truncation resolving every basis function to round-off."""
    if spec.is_chebyshev:
        return int(np.max(spec.degrees()))
    return max(4 * spec.count, int(math.ceil(1.5 * spec.max_frequency())) + 40)


def default_node_count(n_cheb: int) -> int:
    """Mass-quadrature nodes for products of degree-``n_cheb`` series."""
    return 2 * n_cheb + 64


def basis_series(spec: BasisSpec, n_cheb: Optional[int] = None) -> list[ChebSeries]:
    """Basis functions as Chebyshev series of order ``n_cheb``.

    Raises
    ------
    ResolutionError
        If a trailing coefficient exceeds 1e-12 (trigonometric families).
    """
    if spec.is_chebyshev:
        deg = int(np.max(spec.degrees()))
        n = deg if n_cheb is None else int(n_cheb)
        if n < deg:
            raise ResolutionError(f"n_cheb={n} below basis degree {deg}")
        return [s.padded(n) for s in spec.functions()]
    n = default_n_cheb(spec) if n_cheb is None else int(n_cheb)
    series = project_many(spec.functions(), n)
    tails = [float(np.max(np.abs(s.coeffs[-TRAILING_COUNT:]))) for s in series]
    worst = max(tails)
    if worst >= TRAILING_TOL:
        raise ResolutionError(
            f"n_cheb={n} under-resolves the basis: worst trailing coefficient {worst:.3e}")
    return series


def _coeff_matrix(basis) -> np.ndarray:
    n = max(s.N for s in basis)
    return np.vstack([s.padded(n).coeffs for s in basis])


def assemble_stiffness(basis) -> np.ndarray:
    """``K_ij = (pi/2) sum_n n a_n^i a_n^j``, symmetric by construction."""
    if len(basis) == 0:
        raise InputError("basis is empty")
    C = _coeff_matrix(basis)
    n = np.arange(C.shape[1], dtype=float)
    K = 0.5 * np.pi * ((C * n) @ C.T)
    return 0.5 * (K + K.T)


def assemble_mass(basis, w: DomainWeight, node_count: Optional[int] = None) -> np.ndarray:
    """``M_ij = int psi_i psi_j / |f'| dx`` by the weight's mass rule.

    Raises
    ------
    ResolutionError
        If ``M`` is not numerically positive definite.
    """
    if len(basis) == 0:
        raise InputError("basis is empty")
    C = _coeff_matrix(basis)
    nodes = default_node_count(C.shape[1] - 1) if node_count is None else node_count
    x, W = mass_rule(w, nodes)
    V = kernels.clenshaw_t(C, x)
    M = (V * W) @ V.T
    M = 0.5 * (M + M.T)
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise ResolutionError("mass matrix is not positive definite; raise node count") from exc
    return M


def mass_vector(basis, w: DomainWeight, node_count: Optional[int] = None) -> np.ndarray:
    """``g_i = int psi_i / |f'| dx``."""
    C = _coeff_matrix(basis)
    nodes = default_node_count(C.shape[1] - 1) if node_count is None else node_count
    x, W = mass_rule(w, nodes)
    return kernels.clenshaw_t(C, x) @ W


@dataclass(frozen=True, eq=False)
class ModeSet:
    """Eigenpairs orthonormal in L^2 with density ``1/|f'|``.

    Attributes
    ----------
    lambdas : ndarray
        Ascending positive eigenvalues.
    thetas : ndarray
        Frequencies ``sqrt(lambda)``.
    coeffs : ndarray, shape (n_modes, N + 1)
        Chebyshev coefficients of each mode.
    weight : DomainWeight
    basis : BasisSpec
    node_count : int
        Mass-quadrature nodes used for orthonormalization.
    """

    lambdas: np.ndarray
    thetas: np.ndarray
    coeffs: np.ndarray
    weight: DomainWeight
    basis: BasisSpec
    node_count: int

    def __post_init__(self):
        for name in ("lambdas", "thetas", "coeffs"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return self.lambdas.size

    def __len__(self):
        return self.n_modes

    @property
    def modes(self) -> list[ChebSeries]:
        return [ChebSeries(c) for c in self.coeffs]

    def evaluate(self, x) -> np.ndarray:
        """Mode values, shape (n_modes, len(x))."""
        return kernels.clenshaw_t(self.coeffs, np.atleast_1d(np.asarray(x, dtype=float)))

    def mass_rule(self):
        return mass_rule(self.weight, self.node_count)

    def gram(self) -> np.ndarray:
        """``(e_i, e_j)`` in L^2 with density ``1/|f'|``."""
        x, W = self.mass_rule()
        V = self.evaluate(x)
        return (V * W) @ V.T

    def project(self, phi) -> np.ndarray:
        """Modal coefficients ``(phi, e_n)`` of a function or series."""
        x, W = self.mass_rule()
        vals = np.asarray(phi(x), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InputError("function is not finite at the quadrature nodes")
        return self.evaluate(x) @ (W * vals)

    def synthesize(self, c) -> ChebSeries:
        """``sum_n c_n e_n`` as a Chebyshev series."""
        c = np.asarray(c, dtype=float)
        if c.shape != (self.n_modes,):
            raise InputError(f"expected {self.n_modes} modal coefficients, got {c.shape}")
        return ChebSeries(c @ self.coeffs)

    def truncated(self, n: int) -> "ModeSet":
        """First ``n`` modes."""
        if n < 1 or n > self.n_modes:
            raise InputError(f"cannot take {n} of {self.n_modes} modes")
        return ModeSet(self.lambdas[:n], self.thetas[:n], self.coeffs[:n],
                       self.weight, self.basis, self.node_count)

    def to_dict(self) -> dict:
        return {
            "lambdas": [float(v) for v in self.lambdas],
            "thetas": [float(v) for v in self.thetas],
            "basis": self.basis.to_dict(),
            "weight": self.weight.label,
            "node_count": int(self.node_count),
            "modes": [[float(v) for v in row] for row in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict, weight: Optional[DomainWeight] = None) -> "ModeSet":
        """Rebuild from ``to_dict`` output; custom weights must be passed in."""
        try:
            w = weight if weight is not None else weight_from_label(d["weight"])
            return cls(np.asarray(d["lambdas"], dtype=float), np.asarray(d["thetas"], dtype=float),
                       np.asarray(d["modes"], dtype=float), w, BasisSpec.from_dict(d["basis"]),
                       int(d["node_count"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed ModeSet: {exc}") from exc

    def table_rows(self):
        """Rows ``(n, lambda, theta)`` with n starting at 1."""
        return [(i + 1, float(l), float(t)) for i, (l, t) in enumerate(zip(self.lambdas, self.thetas))]


def _constraint_basis(g: np.ndarray, M: np.ndarray):
    scale = math.sqrt(float(np.max(np.diag(M))))
    if np.linalg.norm(g) <= 1e-13 * scale * math.sqrt(g.size):
        return None
    return sla.null_space(g[None, :])


def _reorthonormalize(lams, V, M):
    """Re-orthonormalize eigenvectors inside numerically multiple clusters."""
    i = 0
    n = lams.size
    while i < n:
        j = i + 1
        while j < n and abs(lams[j] - lams[i]) <= CLUSTER_TOL * max(abs(lams[i]), 1.0):
            j += 1
        if j - i > 1:
            block = V[:, i:j]
            G = block.T @ M @ block
            L = np.linalg.cholesky(0.5 * (G + G.T))
            V[:, i:j] = sla.solve_triangular(L, block.T, lower=True).T
        i = j
    return V


def solve_modes(spec: BasisSpec, w: DomainWeight, n_modes: int,
                n_cheb: Optional[int] = None, node_count: Optional[int] = None) -> ModeSet:
    """Smallest ``n_modes`` eigenpairs of ``K v = lambda M v``.

    Parameters
    ----------
    spec : BasisSpec
        Basis; ``spec.count >= n_modes + 4``.
    w : DomainWeight
    n_modes : int
    n_cheb, node_count : int, optional
        Chebyshev order of the basis and mass-quadrature nodes.

    Raises
    ------
    InputError
        Count too small, or a symmetry-split family on an asymmetric weight.
    ResolutionError
        Fewer than ``n_modes`` accepted positive eigenvalues.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise InputError("n_modes must be a positive integer")
    if spec.count < n_modes + 4:
        raise InputError(f"basis count {spec.count} < n_modes + 4 = {n_modes + 4}")
    if spec.parity != "full" and not w.symmetric:
        raise InputError(f"family '{spec.family}' assumes a symmetric container")
    basis = basis_series(spec, n_cheb)
    N = basis[0].N
    nodes = default_node_count(N) if node_count is None else int(node_count)
    K = assemble_stiffness(basis)
    M = assemble_mass(basis, w, nodes)

    Z = None
    if spec.mass_constraint:
        Z = _constraint_basis(mass_vector(basis, w, nodes), M)
    if Z is not None:
        Kr, Mr = Z.T @ K @ Z, Z.T @ M @ Z
        Kr, Mr = 0.5 * (Kr + Kr.T), 0.5 * (Mr + Mr.T)
    else:
        Kr, Mr = K, M

    lams, Y = sla.eigh(Kr, Mr)
    keep = lams > 1e-9 * max(float(np.max(np.abs(lams))), 1.0)
    lams, Y = lams[keep], Y[:, keep]
    if lams.size < n_modes:
        raise ResolutionError(
            f"only {lams.size} positive eigenvalues resolved, {n_modes} requested")
    lams, Y = lams[:n_modes], np.array(Y[:, :n_modes])
    Y = _reorthonormalize(lams, Y, Mr)

    for k in range(n_modes):
        v = Y[:, k]
        Kv, Mv = Kr @ v, Mr @ v
        res = np.linalg.norm(Kv - lams[k] * Mv)
        if res > RESIDUAL_TOL * (np.linalg.norm(Kv) + lams[k] * np.linalg.norm(Mv)):
            raise ResolutionError(f"eigenpair {k + 1} residual {res:.3e} above tolerance")

    V = Z @ Y if Z is not None else Y
    C = V.T @ _coeff_matrix(basis)
    for k in range(n_modes):
        if C[k, np.argmax(np.abs(C[k]))] < 0:
            C[k] = -C[k]
    return ModeSet(lams, np.sqrt(lams), C, w, spec, nodes)


def rayleigh_quotient(phi: ChebSeries, w: DomainWeight, node_count: int = 512) -> float:
    """``(A phi, phi) / (phi, phi)`` with density ``1/|f'|``."""
    from .hilbert import bilinear_A

    x, W = mass_rule(w, node_count)
    vals = phi(x)
    return bilinear_A(phi, phi) / float(np.dot(W, vals * vals))


def collocation_eigenvalues(w: DomainWeight, parity: str, count: int) -> np.ndarray:
    """Eigenvalues from collocating the direct (airfoil) form of ``A``.

    Solves ``w * D[phi](x_k) = lambda phi(x_k) w(x_k) / |f'(x_k)|`` at
    Chebyshev points, where ``D[phi] = w (1/pi) PV int phi' / (w (x - s))``
    is evaluated through the airfoil transform of ``phi'``. The unknowns are
    Chebyshev coefficients of the given parity. This form does not depend
    on the moment conditions, so it is an independent discretization.

    Returns
    -------
    ndarray
        Positive real eigenvalues, ascending.
    """
    if parity == "odd":
        degrees = 2 * np.arange(count) + 1
        x = np.cos((2 * np.arange(count) + 1) * np.pi / (4 * count))
    elif parity == "even":
        degrees = 2 * np.arange(count)
        x = np.cos((2 * np.arange(count) + 1) * np.pi / (4 * count))
    elif parity == "full":
        degrees = np.arange(count)
        x = np.cos((2 * np.arange(count) + 1) * np.pi / (2 * count))
    else:
        raise InputError(f"unknown parity '{parity}'")
    one_minus = 1.0 - x * x
    ratio = np.sqrt(one_minus) / w(x)
    L = np.empty((count, count))
    R = np.empty((count, count))
    for j, n in enumerate(degrees):
        t = ChebSeries.basis(int(n))
        L[:, j] = one_minus * u_series_value(airfoil_transform(t.derivative()), x)
        R[:, j] = t(x) * ratio
    vals = sla.eig(L, R, right=False)
    vals = vals[np.isfinite(vals)]
    real = vals[np.abs(vals.imag) <= 1e-8 * np.maximum(np.abs(vals.real), 1.0)].real
    return np.sort(real[real > 1e-8])
