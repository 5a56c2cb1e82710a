import json
from pathlib import Path

import numpy as np
import pytest

from oracles import ritz_half_disk
from sloshing.domain import chebyshev_weight, custom_weight, flat_weight, half_disk_weight
from sloshing.errors import InputError
from sloshing.spectrum import (BasisSpec, ModeSet, basis_series, collocation_eigenvalues,
                               family_for, rayleigh_quotient, solve_modes)

FIXTURE = json.loads((Path(__file__).parent / "fixtures" / "half_disk_eigenvalues.json").read_text())


@pytest.fixture(scope="module")
def hd():
    return half_disk_weight()


def test_fixture_weight_diagonal():
    modes = solve_modes(BasisSpec("chebyshev", 20, False), chebyshev_weight(), 10)
    np.testing.assert_allclose(modes.lambdas, np.arange(1, 11), atol=1e-10)
    # modes are multiples of single T_n
    for k, row in enumerate(modes.coeffs):
        big = np.abs(row) > 1e-8
        assert big.sum() == 1 and np.argmax(np.abs(row)) == k + 1


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_half_disk_matches_ritz_oracle(hd, parity):
    fam = "chebyshev-odd" if parity == "odd" else "chebyshev-even"
    lam = solve_modes(BasisSpec(fam, 32), hd, 4).lambdas
    np.testing.assert_allclose(lam, ritz_half_disk(parity), rtol=1e-6)


def test_half_disk_regression_fixture(hd):
    odd = solve_modes(BasisSpec("chebyshev-odd", FIXTURE["basis_count"]), hd, 4).lambdas
    even = solve_modes(BasisSpec("chebyshev-even", FIXTURE["basis_count"]), hd, 4).lambdas
    np.testing.assert_allclose(odd, FIXTURE["antisymmetric"], rtol=1e-9)
    np.testing.assert_allclose(even, FIXTURE["symmetric"], rtol=1e-9)


def test_chebyshev_basis_converges_under_doubling(hd):
    a = solve_modes(BasisSpec("chebyshev-odd", 16), hd, 4).lambdas
    b = solve_modes(BasisSpec("chebyshev-odd", 32), hd, 4).lambdas
    assert np.max(np.abs(a - b) / b) < 1e-5


def test_full_family_is_union_of_parities(hd):
    full = solve_modes(BasisSpec("chebyshev", 48), hd, 6).lambdas
    odd = solve_modes(BasisSpec("chebyshev-odd", 32), hd, 4).lambdas
    even = solve_modes(BasisSpec("chebyshev-even", 32), hd, 4).lambdas
    np.testing.assert_allclose(full, np.sort(np.concatenate([odd, even]))[:6], rtol=1e-6)


def test_orthonormal_and_mass_free(hd):
    modes = solve_modes(BasisSpec("free-full", 24), hd, 8)
    np.testing.assert_allclose(modes.gram(), np.eye(8), atol=1e-11)
    x, W = modes.mass_rule()
    np.testing.assert_allclose(modes.evaluate(x) @ W, 0.0, atol=1e-10)


def test_rayleigh_quotient_of_modes(hd):
    modes = solve_modes(BasisSpec("chebyshev", 40), hd, 4)
    for lam, m in zip(modes.lambdas, modes.modes):
        assert rayleigh_quotient(m, hd) == pytest.approx(lam, rel=1e-9)


def test_trig_basis_satisfies_end_conditions():
    x = np.array([-1.0, 1.0])
    for s in basis_series(BasisSpec("pinned-full", 8)):
        if s.N > 0:
            np.testing.assert_allclose(s(x), 0.0, atol=1e-12)
    for s in basis_series(BasisSpec("free-full", 8)):
        np.testing.assert_allclose(s.derivative()(x), 0.0, atol=1e-9)


def test_flat_weight_runs():
    modes = solve_modes(BasisSpec("chebyshev", 24), flat_weight(), 4)
    assert np.all(np.diff(modes.lambdas) > 0)


def test_project_synthesize_round_trip(hd):
    modes = solve_modes(BasisSpec("chebyshev", 32), hd, 6)
    c = np.array([1.0, -0.5, 0.25, 0.0, 2.0, 0.1])
    np.testing.assert_allclose(modes.project(modes.synthesize(c)), c, atol=1e-11)


def test_serialization_round_trip(hd):
    modes = solve_modes(BasisSpec("chebyshev-odd", 16), hd, 4)
    back = ModeSet.from_dict(json.loads(modes.to_json()))
    np.testing.assert_array_equal(back.lambdas, modes.lambdas)
    np.testing.assert_array_equal(back.coeffs, modes.coeffs)
    assert back.basis == modes.basis
    with pytest.raises(InputError):
        ModeSet.from_dict({"lambdas": [1.0]})


def test_validation(hd):
    with pytest.raises(InputError):
        BasisSpec("wavelets", 8)
    with pytest.raises(InputError):
        BasisSpec("pinned-symmetric", 8, False)
    with pytest.raises(InputError):
        solve_modes(BasisSpec("chebyshev", 6), hd, 4)
    lopsided = custom_weight([[x, 1.0 + 0.2 * x] for x in np.linspace(-0.9, 0.9, 9)], 0.0)
    with pytest.raises(InputError):
        solve_modes(BasisSpec("chebyshev-odd", 12), lopsided, 4)
    assert family_for("free", "symmetric") == "free-symmetric"
    assert family_for("pinned", "full", chebyshev=True) == "chebyshev"


def test_collocation_direct_form_on_fixture():
    # the direct form annihilates T_1 and differs from A on functions with
    # nonzero derivative moments, so its odd spectrum starts at 3
    np.testing.assert_allclose(collocation_eigenvalues(chebyshev_weight(), "odd", 8)[:3], [3, 5, 7],
                               atol=1e-10)
