import numpy as np
import pytest

from pseudocyl import conformal, fowler, oracle
from pseudocyl.conformal import ConformalCylinderMetric
from pseudocyl.oracle import MetricError, MetricField

P3 = np.array([0.4, 1.1, 0.7])
P4 = np.array([0.4, 1.1, 1.9, 0.7])


def sphere(dim):
    """Unit round sphere in iterated spherical coordinates."""
    return MetricField(dim, lambda p: np.diag(oracle._sphere_diag(p)),
                       [(0.2, np.pi - 0.2)] * (dim - 1) + [(-np.inf, np.inf)],
                       fd_step=oracle.default_fd_step(dim, np.sin(0.4)), name="sphere")


def bumpy():
    """A 4-metric that is not conformally flat."""
    def comp(p):
        x, y, z, w = p
        return np.diag([1 + 0.3 * np.sin(y), 1 + 0.2 * np.cos(x) ** 2,
                        2 + 0.1 * np.sin(x + w), 1.5 + 0.2 * np.sin(z) * np.cos(y)])
    return MetricField(4, comp, [(-5, 5)] * 4, name="bumpy")


def test_euclidean_is_flat():
    e = oracle.euclidean_metric(3)
    p = np.array([0.1, 0.2, 0.3])
    assert np.all(oracle.christoffel(e, p) == 0)
    assert np.max(np.abs(oracle.riemann(e, p))) == 0
    assert oracle.scalar_curvature(e, p) == 0


def test_cylinder_christoffel_and_ricci():
    cyl = oracle.cylinder_metric(4)
    G = oracle.christoffel(cyl, P4)
    assert np.max(np.abs(G[0])) <= 1e-12 and np.max(np.abs(G[:, 0])) <= 1e-12
    # Gamma^1_22 = -sin cos of the first polar angle
    assert G[1, 2, 2] == pytest.approx(-np.sin(1.1) * np.cos(1.1), abs=1e-9)
    Ric = oracle.ricci(cyl, P4)
    g = oracle.metric_at(cyl, P4)
    expected = 2 * g
    expected[0, 0] = 0
    assert np.max(np.abs(Ric - expected)) <= 1e-7


@pytest.mark.parametrize("n, S", [(3, 2.0), (4, 6.0), (5, 12.0)])
def test_cylinder_scalar_curvature(n, S):
    p = np.concatenate([[0.3], np.full(n - 2, 1.2), [0.5]])
    assert oracle.scalar_curvature(oracle.cylinder_metric(n), p) == pytest.approx(S, abs=1e-7)


def test_unit_sphere_riemann():
    s = sphere(3)
    p = np.array([1.0, 1.3, 0.2])
    Rl = oracle.lower_riemann(s, p)
    g = oracle.metric_at(s, p)
    exact = np.einsum("ac,bd->abcd", g, g) - np.einsum("ad,bc->abcd", g, g)
    assert np.max(np.abs(Rl - exact)) <= 1e-7


def test_symmetries_and_first_bianchi(orbit_4_6):
    metrics = [oracle.cylinder_metric(4), bumpy(),
               ConformalCylinderMetric(4, 6.0, orbit_4_6.factor).metric_field()]
    for m in metrics:
        anti, bianchi = oracle.riemann_symmetry_residual(m, P4)
        assert anti <= 1e-7 and bianchi <= 1e-7
        Ric = oracle.ricci(m, P4)
        assert np.max(np.abs(Ric - Ric.T)) <= 1e-8 * max(1, np.max(np.abs(Ric)))


def test_contracted_second_bianchi(orbit_4_6, orbit_3_7):
    for n, T, o in ((4, 6.0, orbit_4_6), (3, 7.0, orbit_3_7)):
        cm = ConformalCylinderMetric(n, T, o.factor)
        field_ = cm.metric_field()
        for p in conformal.random_points(cm, 3, seed=2):
            assert oracle.contracted_bianchi_residual(field_, p) <= 1e-5


def test_weyl_conformal_covariance():
    base = bumpy()
    u = lambda p: 1 + 0.1 * np.sin(p[0] + p[1])
    bar = oracle.conformal_metric(base, u)
    p = np.array([0.3, -0.2, 0.5, 0.1])
    W = oracle.weyl(base, p)
    Wb = oracle.weyl(bar, p)
    assert np.max(np.abs(W)) > 1e-3
    assert np.max(np.abs(Wb - u(p) ** 2 * W)) <= 1e-6


def test_weyl_vanishes_on_cylinder():
    assert oracle.weyl_norm(oracle.cylinder_metric(4), P4) <= 1e-7


def test_laplacian_on_sphere():
    # z = cos(theta_1) is a first eigenfunction of the 2-sphere: Lap z = -2 z.
    s = sphere(2)
    p = np.array([1.0, 0.3])
    assert oracle.laplacian(s, lambda q: np.cos(q[0]), p) == pytest.approx(-2 * np.cos(1.0),
                                                                           abs=1e-7)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_yamabe_sign_calibration(n):
    p = np.concatenate([[0.3], np.full(n - 2, 1.2), [0.5]])
    one = oracle.yamabe_pde_residual(n, lambda q: np.ones_like(q[0]), p)
    assert one == pytest.approx(-2 * (n - 1), abs=1e-7)
    ub = fowler.constant_solution(n)
    assert abs(oracle.yamabe_pde_residual(n, lambda q: ub + 0 * q[0], p)) <= 1e-9


def test_yamabe_residual_on_fowler_orbit(orbit_4_6):
    u = orbit_4_6.factor
    for t in (0.0, 1.3, 4.2):
        p = np.array([t, 1.0, 2.0, 0.4])
        assert abs(oracle.yamabe_pde_residual(4, lambda q: u(q[0]), p)) <= 1e-6


@pytest.mark.parametrize("c", [0.5, 1.7])
def test_homothety_scaling(c):
    base = oracle.cylinder_metric(4)
    bar = oracle.conformal_metric(base, lambda p: c + 0 * p[0])
    S0 = oracle.scalar_curvature(base, P4)
    assert oracle.scalar_curvature(bar, P4) == pytest.approx(S0 * c ** -2, rel=1e-8)


def test_metric_errors():
    bad = MetricField(2, lambda p: np.diag([1.0, -1.0]), [(-1, 1)] * 2)
    with pytest.raises(MetricError, match="positive definite"):
        oracle.christoffel(bad, np.zeros(2))
    with pytest.raises(MetricError, match="clearance"):
        oracle.christoffel(oracle.cylinder_metric(3), np.array([0.0, 0.2, 0.0]))
    with pytest.raises(MetricError):
        oracle.metric_at(oracle.cylinder_metric(3), np.zeros(4))
    nonsym = MetricField(2, lambda p: np.array([[1.0, 0.1], [0.0, 1.0]]), [(-1, 1)] * 2)
    with pytest.raises(MetricError, match="symmetric"):
        oracle.metric_at(nonsym, np.zeros(2))
    with pytest.raises(MetricError):
        oracle.conformal_metric(oracle.cylinder_metric(3), lambda p: -1.0 + 0 * p[0]
                                ).components(np.array([0.0, 1.0, 0.0]))


def test_two_dimensional_weyl_is_zero():
    assert np.all(oracle.weyl(sphere(2), np.array([1.0, 0.3])) == 0)
