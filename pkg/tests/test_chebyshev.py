import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from sloshing.chebyshev import (ChebSeries, eval_T, eval_U, first_kind_rule, project,
                                project_many, u_series_value)
from sloshing.errors import DomainError, InputError

coeff_lists = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=20)


def test_recurrences_match_trig_forms():
    th = np.linspace(0.01, np.pi - 0.01, 200)
    x = np.cos(th)
    for n in (0, 1, 2, 7, 30):
        np.testing.assert_allclose(eval_T(n, x), np.cos(n * th), atol=1e-13)
        np.testing.assert_allclose(eval_U(n, x), np.sin((n + 1) * th) / np.sin(th), atol=1e-11)


def test_scalar_and_endpoints():
    assert eval_T(5, 1.0) == 1.0
    assert eval_U(4, -1.0) == pytest.approx(5.0)
    assert isinstance(eval_T(3, 0.2), float)


def test_domain_error():
    with pytest.raises(DomainError):
        eval_T(2, [0.0, 1.5])
    with pytest.raises(DomainError):
        eval_U(2, -1.01)


def test_first_kind_rule_exactness():
    rule = first_kind_rule(10)
    # exact up to degree 19
    val = rule.integrate(rule.nodes ** 18)
    ref, _ = quad(lambda t: np.cos(t) ** 18, 0, np.pi, epsabs=1e-14)
    assert val == pytest.approx(ref, rel=1e-13)
    with pytest.raises(InputError):
        first_kind_rule(0)


def test_project_reproduces_polynomials_and_smooth_functions():
    s = ChebSeries([0.5, -1.0, 0.25, 2.0])
    np.testing.assert_allclose(project(s, 6).coeffs, s.padded(6).coeffs, atol=1e-14)
    f = project(np.exp, 20)
    x = np.linspace(-1, 1, 33)
    np.testing.assert_allclose(f(x), np.exp(x), atol=1e-14)
    a, b = project_many([np.sin, np.cos], 15)
    np.testing.assert_allclose(a(x), np.sin(x), atol=1e-13)
    np.testing.assert_allclose(b(x), np.cos(x), atol=1e-13)


def test_project_rejects_nonfinite():
    with pytest.raises(InputError):
        project(lambda x: np.full_like(x, np.nan), 4)


def test_derivative():
    s = ChebSeries([1.0, 2.0, 3.0, 4.0])
    x = np.linspace(-1, 1, 9)
    poly = np.polynomial.Chebyshev(s.coeffs).deriv()
    np.testing.assert_allclose(s.derivative()(x), poly(x))
    assert ChebSeries([3.0]).derivative() == ChebSeries([0.0])


def test_equality_and_padding():
    assert ChebSeries([1.0, 2.0]) == ChebSeries([1.0, 2.0, 0.0, 0.0])
    assert ChebSeries([1.0, 2.0]) != ChebSeries([1.0, 2.5])
    assert ChebSeries([]) == ChebSeries([0.0])
    with pytest.raises(TypeError):
        hash(ChebSeries([1.0]))


def test_coeffs_read_only():
    s = ChebSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 3.0


def test_json_round_trip_and_validation():
    s = ChebSeries([0.1, -2.5, 1e-300])
    assert ChebSeries.from_json(s.to_json()) == s
    for bad in ("{", '{"a": 1}', '[1, "x"]', "[true]", "[NaN]"):
        with pytest.raises(InputError):
            ChebSeries.from_json(bad)


def test_u_series_value():
    x = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(u_series_value([1.0, 0.0, 2.0], x), 1 + 2 * (4 * x * x - 1))


@settings(max_examples=50, deadline=None)
@given(coeff_lists, coeff_lists)
def test_arithmetic_matches_values(a, b):
    A, B = ChebSeries(a), ChebSeries(b)
    x = np.linspace(-1, 1, 11)
    np.testing.assert_allclose((A + B)(x), A(x) + B(x), atol=1e-9)
    np.testing.assert_allclose((A - B)(x), A(x) - B(x), atol=1e-9)
    np.testing.assert_allclose((A * B)(x), A(x) * B(x), atol=1e-7, rtol=1e-9)
    np.testing.assert_allclose((2.0 * A)(x), 2 * A(x), atol=1e-9)
    np.testing.assert_allclose((-A)(x), -A(x))
