import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudocyl.scalars import PowerScalar, TrigInterpolant, constant, sinusoid


@settings(max_examples=30, deadline=None)
@given(T=st.floats(0.5, 20), a=st.floats(-0.5, 0.5), t=st.floats(-50, 50))
def test_sinusoid_periodic(T, a, t):
    s = sinusoid(T, 1.0, a)
    for nu in range(4):
        assert abs(s(t + T, nu) - s(t, nu)) <= 1e-9 * (1 + abs(s(t, nu)))


@settings(max_examples=20, deadline=None)
@given(T=st.floats(1, 10), a=st.floats(-0.4, 0.4))
def test_interpolant_reproduces_samples_and_derivatives(T, a):
    exact = sinusoid(T, 1.0, a)
    t = np.arange(32) * (T / 32)
    it = TrigInterpolant(exact(t), T)
    assert np.max(np.abs(it(t) - exact(t))) <= 1e-12
    x = np.linspace(0, T, 11)
    for nu in range(4):
        scale = max(1.0, np.max(np.abs(exact(x, nu))))
        assert np.max(np.abs(it(x, nu) - exact(x, nu))) <= 1e-10 * scale


def test_interpolant_integral_exact():
    T = 3.0
    s = sinusoid(T, 2.0, 0.5)
    it = TrigInterpolant(s(np.arange(16) * T / 16), T)
    t = 1.1
    w = 2 * np.pi / T
    exact = 2 * t + 0.5 * (1 - np.cos(w * t)) / w
    assert abs(it.integral(t) - exact) <= 1e-13
    assert abs(it.integral(T) - 2 * T) <= 1e-13


def test_spectral_floor_truncates_noise():
    T = 2 * np.pi
    t = np.arange(64) * (T / 64)
    rng = np.random.default_rng(1)
    noisy = 1 + 0.1 * np.cos(t) + 1e-15 * rng.standard_normal(64)
    assert TrigInterpolant(noisy, T)._k.size > 2
    cut = TrigInterpolant(noisy, T, floor=1e-13)
    assert cut._k.size == 1


def test_periodic_endpoint_matches():
    s = sinusoid(5.0, 1.0, 0.3)
    samples = s(np.arange(64) * 5.0 / 64)
    it = TrigInterpolant(samples, 5.0)
    assert abs(it(0.0) - it(5.0)) <= 1e-12 * np.max(np.abs(samples))


def test_derivative_consistency():
    assert sinusoid(4.0, 1.0, 0.3).derivative_consistency() <= 1e-8
    assert PowerScalar(sinusoid(4.0, 1.0, 0.3), 1.5, 2.0).derivative_consistency() <= 1e-8


def test_power_scalar_chain_rule():
    base = sinusoid(4.0, 1.0, 0.3)
    p = PowerScalar(base, 0.5)
    t = np.linspace(0, 4, 9)
    assert np.allclose(p(t) ** 2, base(t), rtol=1e-14)


def test_constant_and_dtype_preserved():
    c = constant(2.0, 1.0)
    assert c.is_constant()
    assert c(np.longdouble("0.3")).dtype == np.longdouble
    assert np.all(c(np.linspace(0, 1, 5), 2) == 0)


def test_derivative_order_checked():
    with pytest.raises(ValueError):
        sinusoid(1.0)(0.0, 4)


def test_check_positive():
    with pytest.raises(ValueError):
        sinusoid(1.0, 0.1, 0.5).check_positive()
