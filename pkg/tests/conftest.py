import pytest

from pseudocyl import derdzinski, fowler


@pytest.fixture(scope="session")
def orbit_4_6():
    return fowler.solve_period(4, 6.0)


@pytest.fixture(scope="session")
def orbit_3_7():
    return fowler.solve_period(3, 7.0)


@pytest.fixture(scope="session")
def d_params():
    return derdzinski.DerdzinskiParams(3, 6, 2)


@pytest.fixture(scope="session")
def d_orbit(d_params):
    return derdzinski.solve_derdzinski_periodic(
        d_params, derdzinski.energy_from_offset(d_params, 0.5))
