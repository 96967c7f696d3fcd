import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from app.core.error_handling import DivisionNearZero
from app.models.funcspec import FunctionSpec
from app.services.jets import DIM, Jet2, jet_compose, jet_inv, reciprocal

value = st.floats(min_value=0.5, max_value=3.0, allow_nan=False)


def seeds(x):
    return [Jet2.variable(k, x[k]) for k in range(DIM)]


def test_variable_and_constant():
    x = Jet2.variable(2, 1.5)
    assert x.val == 1.5
    np.testing.assert_array_equal(x.grad, np.eye(DIM)[2])
    assert not x.hess.any()
    c = Jet2.constant(3.0)
    assert c.val == 3.0 and not c.grad.any()
    assert Jet2.lift(x) is x


def test_product_rule():
    x = seeds([0.3, 0.7, 0, 0, 0, 0])
    p = x[0] * x[1]
    assert p.val == pytest.approx(0.21)
    np.testing.assert_allclose(p.grad[:2], [0.7, 0.3])
    assert p.hess[0, 1] == p.hess[1, 0] == 1.0
    assert p.hess[0, 0] == 0.0


def test_reciprocal_second_derivative():
    x = Jet2.variable(0, 2.0)
    r = jet_inv(x)
    assert r.val == 0.5
    assert r.grad[0] == pytest.approx(-0.25)
    assert r.hess[0, 0] == pytest.approx(0.25)  # 2/x^3


def test_division_guard():
    with pytest.raises(DivisionNearZero):
        jet_inv(Jet2.constant(1e-13))
    with pytest.raises(DivisionNearZero):
        reciprocal(0.0)
    with pytest.raises(DivisionNearZero):
        Jet2.variable(0, 1.0) / 0.0
    assert reciprocal(4.0) == 0.25


def test_compose_chain_rule():
    x = seeds([0.2, 0.5, 0, 0, 0, 0])
    s = x[0] + x[1]
    f = jet_compose(FunctionSpec(coeffs=[0.0, 0.0, 1.0]), s)
    assert f.val == pytest.approx(0.49)
    np.testing.assert_allclose(f.grad[:2], [1.4, 1.4])
    np.testing.assert_allclose(f.hess[:2, :2], 2.0 * np.ones((2, 2)))


def test_numpy_scalar_on_the_left():
    x = Jet2.variable(1, 2.0)
    y = np.float64(3.0) * x
    assert isinstance(y, Jet2)
    assert y.grad[1] == 3.0
    z = np.float64(1.0) - x
    assert isinstance(z, Jet2) and z.val == -1.0


def test_pow_rejects_negative():
    with pytest.raises(TypeError):
        Jet2.variable(0, 1.0) ** -1


@hyp_settings(max_examples=40, deadline=None)
@given(value, value, value)
def test_division_inverts_multiplication(a, b, c):
    x = seeds([a, b, c, 1.0, 1.0, 1.0])
    u = x[0] * x[1] + x[2] ** 2
    v = x[1] + 2.0 * x[2]
    w = (u * v) / v
    np.testing.assert_allclose(w.val, u.val, rtol=1e-12)
    np.testing.assert_allclose(w.grad, u.grad, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(w.hess, u.hess, rtol=1e-9, atol=1e-10)
    np.testing.assert_array_equal(w.hess, w.hess.T)


@hyp_settings(max_examples=40, deadline=None)
@given(value, st.integers(min_value=0, max_value=5))
def test_pow_matches_closed_form(a, n):
    x = Jet2.variable(0, a)
    y = x**n
    assert y.val == pytest.approx(a**n)
    assert y.grad[0] == pytest.approx(n * a ** (n - 1) if n else 0.0)
    assert y.hess[0, 0] == pytest.approx(n * (n - 1) * a ** (n - 2) if n > 1 else 0.0)
