import numpy as np
import pytest

from pseudocyl import fowler
from pseudocyl.numerics import (Bracket, NonFiniteState, QuadratureError, StepSizeUnderflow,
                                find_root, integrate_ivp, quad_singular)


def oscillator(t, y):
    return np.array([y[1], -y[0]])


def test_harmonic_oscillator_closes_after_two_pi():
    traj = integrate_ivp(oscillator, [1.0, 0.0], (0.0, 2 * np.pi))
    assert np.max(np.abs(traj.y_final - [1.0, 0.0])) <= 1e-9


def test_trajectory_samples_and_dense_output():
    t_eval = np.linspace(0, 3, 7)
    traj = integrate_ivp(oscillator, [1.0, 0.0], (0.0, 3.0), t_eval=t_eval)
    assert np.all(np.diff(traj.t_samples) > 0)
    assert len(traj.t_samples) == len(traj.y_samples)
    for i, t in enumerate(traj.t_samples):
        assert np.array_equal(traj(t), traj.y_samples[i])
    assert set(t_eval) <= set(traj.t_samples)
    mid = 0.5 * (traj.t_samples[3] + traj.t_samples[4])
    assert np.max(np.abs(traj(mid) - [np.cos(mid), -np.sin(mid)])) <= 1e-9


def test_fowler_energy_drift_over_one_period():
    pot = fowler.fowler_potential(4)
    a, _ = fowler.turning_points(4, -0.1)
    T = fowler.period_function(4, -0.1)
    rtol, atol = 1e-12, 1e-13
    traj = integrate_ivp(pot.rhs, [a, 0.0], (0.0, T), rtol, atol)
    E = pot.energy(traj.y_samples[:, 0], traj.y_samples[:, 1])
    assert np.max(np.abs(E - E[0])) <= 10 * rtol * abs(E[0]) + 10 * atol


def test_invalid_tolerances():
    with pytest.raises(ValueError):
        integrate_ivp(oscillator, [1.0, 0.0], (0.0, 1.0), rel_tol=0.0)


def test_blow_up_is_reported():
    with pytest.raises((StepSizeUnderflow, NonFiniteState)):
        integrate_ivp(lambda t, y: y * y, [1.0], (0.0, 2.0))


def test_inverse_square_root_singularity():
    assert abs(quad_singular(lambda x: x ** -0.5, 0.0, 1.0) - 2.0) <= 1e-10


def test_period_type_integral_is_pi():
    # int_{-1}^{1} dx / sqrt(1 - x^2)
    val = quad_singular(lambda x, da, db: 1 / np.sqrt(da * db), -1.0, 1.0, offsets=True)
    assert abs(val - np.pi) <= 1e-11


def test_quadrature_tolerance_monotone():
    f = lambda x: np.exp(x) / np.sqrt(x)
    exact = 2.9253034918143632  # sqrt(pi) erfi(1)
    errs = [abs(quad_singular(f, 0.0, 1.0, tol=tol) - exact) for tol in (1e-6, 5e-7, 2.5e-7)]
    assert errs[1] <= max(errs[0], 1e-13) and errs[2] <= max(errs[1], 1e-13)


def test_quadrature_failure_raises():
    with pytest.raises(QuadratureError):
        quad_singular(lambda x: 1 / abs(x - 0.3), 0.0, 1.0)


def test_find_root_examples():
    r = find_root(lambda x: x * x - 2, Bracket(0.0, 2.0))
    assert abs(r - np.sqrt(2)) <= 1e-14
    assert abs(find_root(np.cos, (1.0, 2.0)) - np.pi / 2) <= 1e-14


def test_find_root_rejects_bad_bracket():
    with pytest.raises(ValueError):
        find_root(lambda x: x * x + 1, Bracket(-1.0, 1.0))
    with pytest.raises(ValueError):
        Bracket(1.0, 1.0)
