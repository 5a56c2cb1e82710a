import json

import numpy as np
import pytest
from scipy.integrate import quad

from sloshing.chebyshev import ChebSeries
from sloshing.domain import (DomainWeight, admissibility_constant, chebyshev_weight, custom_weight,
                             flat_weight, half_disk_inverse_map, half_disk_map_derivative,
                             half_disk_weight, load_custom_weight, mass_functional, mass_rule,
                             weight_from_label, weighted_inner)
from sloshing.errors import AdmissibilityError, InputError


def test_half_disk_weight_closed_form():
    w = half_disk_weight()
    x = np.linspace(-0.999, 0.999, 101)
    s = np.sqrt(1 - x * x)
    np.testing.assert_allclose(w(x), s * (1 + s), rtol=1e-13)
    assert w(0.0) == pytest.approx(2.0)
    assert w(0.6) == pytest.approx(1.44)


def test_half_disk_map_inverse():
    x = np.linspace(-0.99, 0.99, 21)
    z = half_disk_inverse_map(x)
    np.testing.assert_allclose(2 * z / (z * z + 1), x, atol=1e-15)
    assert np.all(np.abs(z) < 1)
    assert half_disk_map_derivative(0.0) == 2.0


def test_half_disk_wall_weight():
    ww = half_disk_weight().wall_weight
    assert ww(2.0) == pytest.approx(2 * np.sqrt(3))
    x = np.array([1.5, -3.0])
    np.testing.assert_allclose(ww(x), np.abs(x) * np.sqrt(x * x - 1))
    with pytest.raises(InputError):
        ww(0.5)


def test_mass_rule_vs_quadrature():
    for w in (half_disk_weight(), chebyshev_weight(), flat_weight()):
        f = ChebSeries([0.3, 0.2, -0.7, 0.1])
        ref, _ = quad(lambda x: f(x) / w(x), -1, 1, limit=200, epsabs=1e-13)
        assert mass_functional(f, w) == pytest.approx(ref, rel=1e-9)


def test_mass_rule_spectral_accuracy():
    w = half_disk_weight()
    assert mass_functional(lambda x: np.ones_like(x), w) == pytest.approx(2.0, rel=1e-13)
    f = ChebSeries.basis(2)
    assert abs(mass_functional(f, w, 128) - mass_functional(f, w, 256)) < 1e-12
    with pytest.raises(InputError):
        mass_rule(w, 0)


def test_weighted_inner_symmetric():
    w = half_disk_weight()
    f, g = np.sin, np.cos
    assert weighted_inner(f, g, w) == pytest.approx(weighted_inner(g, f, w))


def test_admissibility():
    grid = np.linspace(-0.99, 0.99, 99)
    assert admissibility_constant(half_disk_weight(), grid) >= 1.0
    with pytest.raises(AdmissibilityError):
        DomainWeight(lambda x: (1 - x * x) ** 0.75, 0.75, "steep")
    with pytest.raises(InputError):
        DomainWeight(lambda x: 1 + x, 0.0, "lopsided", symmetric=True)


def test_custom_weight_spline_accuracy():
    x = np.cos(np.linspace(0.02, np.pi - 0.02, 60))
    s = np.sqrt(1 - x * x)
    w = custom_weight(np.column_stack([x, s * (1 + s)]), 0.5)
    g = np.linspace(-0.95, 0.95, 50)
    sg = np.sqrt(1 - g * g)
    np.testing.assert_allclose(w(g), sg * (1 + sg), atol=1e-6)
    assert w.symmetric


def test_custom_weight_validation():
    good = np.array([[-0.9, 1.0], [-0.3, 1.0], [0.3, 1.0], [0.9, 1.0]])
    with pytest.raises(AdmissibilityError):
        custom_weight(good, 0.6)
    with pytest.raises(InputError):
        custom_weight(good[:3], 0.0)
    with pytest.raises(InputError):
        custom_weight(np.where(good == 1.0, -1.0, good), 0.0)
    with pytest.raises(InputError):
        custom_weight(np.vstack([good, good[:1]]), 0.0)


def test_load_custom_weight(tmp_path):
    x = np.linspace(-0.95, 0.95, 21)
    csv = tmp_path / "tank.csv"
    csv.write_text("x,weight\n" + "".join(f"{float(a)!r},{float(1 + 0.1 * a * a)!r}\n" for a in x))
    (tmp_path / "tank.json").write_text(json.dumps({"beta": 0.0, "label": "tank"}))
    w = load_custom_weight(csv)
    assert w.label == "tank"
    assert w(0.5) == pytest.approx(1.025, rel=1e-6)
    assert weight_from_label(f"custom:{csv}").label == "tank"
    (tmp_path / "tank.json").unlink()
    with pytest.raises(InputError):
        load_custom_weight(csv)


def test_weight_from_label():
    assert weight_from_label("half-disk").label == "half-disk"
    with pytest.raises(InputError):
        weight_from_label("cube")
