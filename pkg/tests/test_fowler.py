import numpy as np
import pytest

from pseudocyl import fowler


@pytest.mark.parametrize("n, expected", [(4, 0.7071067811), (3, 0.7598356856), (6, 2 / 3)])
def test_constant_solution(n, expected):
    ub = fowler.constant_solution(n)
    assert abs(ub - expected) <= 1e-10
    assert abs(fowler.fowler_residual(n, ub, 0.0)) <= 1e-14


def test_residual_and_energy_examples():
    assert fowler.fowler_residual(4, 1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert fowler.fowler_energy(4, 1.0, 0.0) == 0.0
    assert fowler.center_energy(4) == pytest.approx(-0.125, abs=1e-15)


def test_turning_points_closed_form():
    # 0.5 (u^4 - u^2) = -0.1  ->  u^2 = (1 -+ sqrt(0.2)) / 2
    a, b = fowler.turning_points(4, -0.1)
    assert a == pytest.approx(np.sqrt((1 - np.sqrt(0.2)) / 2), abs=1e-14)
    assert b == pytest.approx(np.sqrt((1 + np.sqrt(0.2)) / 2), abs=1e-14)


def test_frozen_period_value():
    assert fowler.period_function(4, -0.1) == pytest.approx(4.6306753041491335, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_threshold_limit(n):
    ec = fowler.center_energy(n)
    T = fowler.period_function(n, ec + 1e-8 * abs(ec))
    assert abs(T - fowler.critical_period(n)) <= 1e-4


def test_period_increasing_near_zero_energy():
    T = [fowler.period_function(4, E) for E in (-1e-3, -1e-4, -1e-5)]
    assert T[0] < T[1] < T[2]


def test_period_monotone_on_grid():
    ec = fowler.center_energy(4)
    E = ec * (1 - np.linspace(0.01, 0.99, 50))
    T = np.array([fowler.period_function(4, e) for e in E])
    assert np.all(np.diff(T) > 0)
    assert np.all(T > fowler.critical_period(4))


def test_quadrature_agrees_with_return_time():
    assert abs(fowler.period_function(4, -0.12) - fowler.return_time(4, -0.12)) <= 1e-8


def test_solve_period_n4(orbit_4_6):
    o = orbit_4_6
    assert abs(o.period - 6.0) <= 1e-10
    assert o.energy == pytest.approx(-0.0217334011934605, abs=1e-9)
    assert o.u_max / o.u_min >= 1.01
    assert np.std(o.energies()) <= 1e-10
    it = o.factor.interp
    t = np.linspace(0, 6, 300, endpoint=False)
    assert np.max(np.abs(fowler.fowler_residual(4, it(t), it(t, 2)))) <= 1e-8


def test_solve_period_n3(orbit_3_7):
    assert orbit_3_7.u_max / orbit_3_7.u_min > 1.001


def test_below_threshold():
    with pytest.raises(fowler.BelowThreshold) as info:
        fowler.solve_period(4, 4.0)
    assert info.value.threshold == pytest.approx(2 * np.pi / np.sqrt(2))
    with pytest.raises(fowler.BelowThreshold):
        fowler.energy_for_period(3, 2 * np.pi)


def test_energy_for_period_close_to_threshold():
    T1 = fowler.critical_period(5)
    E = fowler.energy_for_period(5, T1 * (1 + 1e-4))
    assert fowler.period_function(5, E) == pytest.approx(T1 * (1 + 1e-4), abs=1e-9)


@pytest.mark.parametrize("bad", [2, 3.5, True, "4"])
def test_dimension_validation(bad):
    with pytest.raises((ValueError, TypeError)):
        fowler.fowler_potential(bad)


def test_params_dataclass():
    assert fowler.FowlerParams(5).as_dict() == {"n": 5}
    assert fowler.constant_solution(fowler.FowlerParams(4)) == fowler.constant_solution(4)
