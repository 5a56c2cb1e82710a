"""Acceptance suite: one pass/fail line per criterion in the terminal summary.

Tolerances are the project's acceptance tolerances. Oracles are
independent of the code under test (QUADPACK principal values, DOP853
integration, adaptive time quadrature, physical-domain Ritz method).
"""
import numpy as np
import pytest
from scipy.special import eval_chebyu

from oracles import kernel_G_quad, pv_first_kind, ritz_half_disk
from sloshing.chebyshev import ChebSeries
from sloshing.control import (default_injection_points, duality_sides, hum_control,
                              injection_modal_forcing, kernel_G, solve_injection)
from sloshing.domain import chebyshev_weight, half_disk_weight, mass_functional
from sloshing.dynamics import (ModalData, ModalState, energy, evolve_homogeneous,
                               observability_lhs, observability_ratio, observability_threshold,
                               reconstruct, Frequencies)
from sloshing.hilbert import airfoil_transform, bilinear_A, equivalent_forms_gap, moment_corrected
from sloshing.chebyshev import u_series_value
from sloshing.oracles import ode_terminal, time_quadrature_lhs
from sloshing.spectrum import BasisSpec, collocation_eigenvalues, solve_modes


@pytest.fixture(scope="module")
def half_disk_modes16():
    return solve_modes(BasisSpec("chebyshev", 48), half_disk_weight(), 16)


@pytest.fixture(scope="module")
def fixture_modes16():
    return solve_modes(BasisSpec("chebyshev", 24, False), chebyshev_weight(), 16)


def test_c01_airfoil_identities(acceptance):
    xs = np.linspace(-0.98, 0.98, 50)
    worst = 0.0
    for r in range(1, 31):
        coeffs = airfoil_transform(ChebSeries.basis(r))
        fast = u_series_value(coeffs, xs)
        for x, v in zip(xs, fast):
            ref = pv_first_kind(lambda s: np.cos(r * np.arccos(s)), x)
            worst = max(worst, abs(v - ref), abs(v + eval_chebyu(r - 1, x)))
    ok = worst <= 1e-10
    acceptance(1, "airfoil identities r<=30, 50 points", ok, f"max error {worst:.2e} (tol 1e-10)")
    assert ok


def test_c02_self_adjoint_positive(acceptance):
    rng = np.random.default_rng(2)
    asym = 0.0
    min_diag = np.inf
    for _ in range(1000):
        a = ChebSeries(rng.normal(size=rng.integers(1, 32)))
        b = ChebSeries(rng.normal(size=rng.integers(1, 32)))
        asym = max(asym, abs(bilinear_A(a, b) - bilinear_A(b, a)))
        min_diag = min(min_diag, bilinear_A(a, a))
    ok = asym == 0.0 and min_diag >= 0.0
    acceptance(2, "bilinear form symmetric and nonnegative", ok,
               f"max asymmetry {asym:.1e}, min (A phi, phi) {min_diag:.3e}")
    assert ok


def test_c03_equivalent_forms(acceptance):
    rng = np.random.default_rng(3)
    grid = np.linspace(-0.999, 0.999, 401)
    worst = 0.0
    for deg in range(3, 31):
        for _ in range(5):
            phi = moment_corrected(ChebSeries(rng.normal(size=deg + 1) / np.arange(1, deg + 2)))
            worst = max(worst, equivalent_forms_gap(phi, grid))
    ok = worst <= 1e-8
    acceptance(3, "three interface-derivative forms agree", ok, f"max gap {worst:.2e} (tol 1e-8)")
    assert ok


def test_c04_fixture_spectrum(acceptance):
    modes = solve_modes(BasisSpec("chebyshev", 16, False), chebyshev_weight(), 8)
    err = float(np.max(np.abs(modes.lambdas - np.arange(1, 9))))
    ok = err <= 1e-10
    acceptance(4, "fixture spectrum lambda_n = n, n<=8", ok, f"max error {err:.2e} (tol 1e-10)")
    assert ok


def test_c05_half_disk_convergence(acceptance):
    w = half_disk_weight()
    coarse = solve_modes(BasisSpec("pinned-antisymmetric", 16), w, 4).lambdas
    fine = solve_modes(BasisSpec("pinned-antisymmetric", 32), w, 4).lambdas
    drift = float(np.max(np.abs(fine - coarse) / fine))
    colloc = collocation_eigenvalues(w, "odd", 32)[:4]
    cross = float(np.max(np.abs(colloc - fine) / fine))
    ritz = ritz_half_disk("odd")
    ok = drift < 1e-6 and cross <= 1e-5
    acceptance(5, "pinned-antisymmetric doubling and collocation cross-check", ok,
               f"doubling drift {drift:.2e} (tol 1e-6), collocation gap {cross:.2e} (tol 1e-5); "
               f"Galerkin 32 {np.round(fine, 6).tolist()}, Ritz {np.round(ritz, 6).tolist()}")
    assert ok


def test_c06_conservation(acceptance, half_disk_modes16):
    modes = half_disk_modes16
    rng = np.random.default_rng(6)
    data = ModalData(rng.normal(size=16), rng.normal(size=16))
    e0 = energy(data.initial_state(modes), modes)
    de = dm = 0.0
    for t in np.linspace(0.0, 10.0 / modes.thetas[0], 41):
        st = evolve_homogeneous(data, modes, t)
        de = max(de, abs(energy(st, modes) - e0))
        dm = max(dm, abs(mass_functional(reconstruct(st, modes), modes.weight, modes.node_count)))
    ok = de <= 1e-12 * e0 and dm <= 1e-10
    acceptance(6, "energy and mass conserved on [0, 10/theta_1]", ok,
               f"energy drift {de:.2e} (E0={e0:.3f}), max |mass| {dm:.2e}")
    assert ok


def test_c07_observability(acceptance, half_disk_modes16, fixture_modes16):
    rng = np.random.default_rng(7)
    modes8 = half_disk_modes16.truncated(8)
    T = 3 * 2.42 / (2 * modes8.thetas[0])
    data = ModalData(rng.normal(size=8), rng.normal(size=8))
    closed = observability_lhs(data, modes8, T)
    quadr = time_quadrature_lhs(data.A, data.B, modes8.thetas, T)
    quad_err = abs(closed - quadr) / quadr

    single = observability_ratio(ModalData([1.0], [0.0]), Frequencies([1.0]), 2 * np.pi).ratio
    single_err = abs(single - np.pi)

    measured = {}
    for name, ms in (("half-disk", modes8), ("cheb-fixture", fixture_modes16.truncated(8))):
        T = 3 * 2.42 / (2 * ms.thetas[0])
        ratios = [observability_ratio(ModalData(rng.normal(size=8), rng.normal(size=8)), ms, T).ratio / T
                  for _ in range(100)]
        measured[name] = min(ratios)
    ok = quad_err <= 1e-8 and single_err <= 1e-12 and all(c > 0 for c in measured.values())
    acceptance(7, "observability closed form, single mode, measured c>0", ok,
               f"quadrature rel err {quad_err:.1e}, |ratio-pi| {single_err:.1e}, "
               + ", ".join(f"c[{k}]={v:.4f}" for k, v in measured.items()))
    assert ok


def test_c08_exact_controllability(acceptance, half_disk_modes16, fixture_modes16):
    rng = np.random.default_rng(8)
    worst = 0.0
    for modes in (fixture_modes16, half_disk_modes16):
        T = 3 * observability_threshold(modes)
        for _ in range(3):
            target = ModalData(rng.normal(size=16), rng.normal(size=16))
            sol = hum_control(target, modes, T)
            th = modes.thetas
            c, cd = ode_terminal(target.A, th * target.B, th, sol.h_modal, T)
            worst = max(worst, energy(ModalState(c, cd), modes) / sol.initial_energy)
    sol = hum_control(ModalData([1.0], [0.0]), Frequencies([1.0]), 2 * np.pi)
    ab_err = max(abs(sol.adjoint_data.A[0]), abs(sol.adjoint_data.B[0] - 1 / np.pi))
    ok = worst <= 1e-9 and ab_err <= 1e-12
    acceptance(8, "HUM drives 16 modes to rest (ODE-verified)", ok,
               f"max E(T)/E(0) by DOP853 {worst:.1e} (tol 1e-9), (A,B) error {ab_err:.1e}")
    assert ok


def test_c09_injection(acceptance):
    pts = [-3.0, -2.0, -1.5, -1.1, 1.1, 1.5, 2.0, 3.0, 0.0, 0.5, -0.5, 0.99]
    g_err = max(abs(kernel_G(x) - kernel_G_quad(x)) for x in pts)

    w = half_disk_weight()
    modes = solve_modes(BasisSpec("chebyshev", 40), w, 8)
    xs = np.linspace(0, 6, 25)
    rt_err = flux = 0.0
    for N in (3, 5, 9):
        p = default_injection_points(N)
        th = modes.thetas[: N - 1]
        H = np.cos(np.outer(xs, th)) + 0.3 * np.sin(np.outer(xs, 2 * th))
        plan = solve_injection(H, p, w.wall_weight(p), modes, xs)
        realized = injection_modal_forcing(plan, modes, "mass-rule")[:, : N - 1]
        rt_err = max(rt_err, float(np.max(np.abs(realized - H))) / float(np.max(np.abs(H))))
        flux = max(flux, float(np.max(np.abs(plan.rates.sum(axis=1)))))
    ok = g_err <= 1e-10 and rt_err <= 1e-8 and flux <= 1e-12
    acceptance(9, "injection kernel and round trip, N in {3,5,9}", ok,
               f"kernel error {g_err:.1e}, round-trip rel error {rt_err:.1e}, max net flux {flux:.1e}")
    assert ok


def test_c10_duality(acceptance, half_disk_modes16):
    rng = np.random.default_rng(10)
    modes = half_disk_modes16
    T = 3 * observability_threshold(modes)
    worst = 0.0
    for _ in range(20):
        target = ModalData(rng.normal(size=16), rng.normal(size=16))
        sol = hum_control(target, modes, T)
        adjoint = ModalData(rng.normal(size=16), rng.normal(size=16))
        lhs, rhs = duality_sides(adjoint, sol.adjoint_data, target, modes.thetas, T)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    ok = worst <= 1e-8
    acceptance(10, "duality identity on controlled instances", ok, f"max rel gap {worst:.1e} (tol 1e-8)")
    assert ok
