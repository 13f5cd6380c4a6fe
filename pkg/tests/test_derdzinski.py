import numpy as np
import pytest

from pseudocyl import derdzinski as dz
from pseudocyl import hamiltonian as ham


def test_residual_examples(d_params):
    assert dz.derdzinski_residual(d_params, 1.0, 0.0) == pytest.approx(-0.75, abs=1e-15)
    assert dz.derdzinski_constant(dz.DerdzinskiParams(4, 12, 3)) == pytest.approx(4 / 3,
                                                                                 abs=1e-14)


def test_constant_solution(d_params):
    h0 = dz.derdzinski_constant(d_params)
    assert abs(dz.derdzinski_residual(d_params, h0, 0.0)) <= 1e-12
    pot = dz.derdzinski_potential(d_params)
    assert pot.center == pytest.approx(h0, rel=1e-14)
    assert pot.d2(h0) == pytest.approx(d_params.C, rel=1e-12)


def test_frozen_center_energy(d_params):
    assert dz.center_energy(d_params) == pytest.approx(dz.E_CENTER_3_6_2, abs=1e-13)


@pytest.mark.parametrize("m, R, C", [(3, 6, 2), (4, 12, 3), (5, 2.5, 0.7)])
def test_linearized_period(m, R, C):
    p = dz.DerdzinskiParams(m, R, C)
    pot = dz.derdzinski_potential(p)
    ec = pot.center_energy
    T = ham.period(pot, ec + 1e-8 * abs(ec))
    assert abs(T - dz.small_oscillation_period(p)) <= 1e-4


def test_scaling_covariance(d_params):
    # t -> lambda t maps (R, C) to (lambda^2 R, lambda^2 C); periods scale by 1/lambda.
    lam = 1.7
    q = dz.DerdzinskiParams(3, 6 * lam**2, 2 * lam**2)
    Ep = dz.energy_from_offset(d_params, 0.3)
    Eq = dz.energy_from_offset(q, 0.3)
    assert dz.derdzinski_constant(q) == pytest.approx(dz.derdzinski_constant(d_params))
    Tp = ham.period(dz.derdzinski_potential(d_params), Ep)
    Tq = ham.period(dz.derdzinski_potential(q), Eq)
    assert Tq == pytest.approx(Tp / lam, rel=1e-9)


def test_periodic_orbit(d_params, d_orbit):
    it = d_orbit.factor.interp
    t = np.linspace(0, d_orbit.period, 512, endpoint=False)
    h = it(t)
    assert np.min(h) > 0
    assert np.max(np.abs(dz.derdzinski_residual(d_params, h, it(t, 2)))) <= 1e-8
    assert np.max(np.abs(d_orbit.energies() - d_orbit.energy)) <= 1e-10
    assert d_orbit.params == d_params.as_dict()


def test_energy_window(d_params):
    with pytest.raises(ham.NoClosedOrbit):
        dz.solve_derdzinski_periodic(d_params, dz.center_energy(d_params))
    for off in (0.0, 1.0, 1.5):
        with pytest.raises(ham.NoClosedOrbit):
            dz.energy_from_offset(d_params, off)
    with pytest.raises(ham.NoClosedOrbit):
        dz.solve_derdzinski_periodic(d_params, 0.1)


@pytest.mark.parametrize("m, R, C", [(2, 1, 1), (3, -1, 1), (3, 1, 0), (3.5, 1, 1)])
def test_parameter_validation(m, R, C):
    with pytest.raises(ValueError):
        dz.DerdzinskiParams(m, R, C)


def test_constant_warp(d_params):
    w = dz.constant_warp(d_params)
    assert w.factor.is_constant()
    assert w.period == pytest.approx(2 * np.pi / np.sqrt(2))
    assert w.factor(0.3) == pytest.approx(dz.derdzinski_constant(d_params))
