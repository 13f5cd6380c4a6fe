import numpy as np
import pytest

from pseudocyl import conformal, fowler, oracle
from pseudocyl.conformal import ConformalCylinderMetric, GridSpec
from pseudocyl.scalars import constant, sinusoid


@pytest.fixture(scope="module")
def fowler_metric(orbit_4_6):
    return ConformalCylinderMetric(4, 6.0, orbit_4_6.factor, "fowler")


def test_closed_form_matches_oracle(fowler_metric):
    err = conformal.oracle_agreement(fowler_metric, count=4, seed=3)
    assert max(err.values()) <= 1e-6


def test_closed_form_matches_oracle_for_arbitrary_factor():
    m = ConformalCylinderMetric(3, 5.0, sinusoid(5.0, 1.0, 0.3))
    err = conformal.oracle_agreement(m, count=3, seed=1)
    assert max(err.values()) <= 1e-6


def test_mixed_ricci_vanishes(fowler_metric):
    t = np.linspace(0, 6, 7)
    assert np.all(conformal.ricci_closed(fowler_metric, t)["R_0i"] == 0)
    R = oracle.ricci(fowler_metric.metric_field(), np.array([1.0, 1.0, 2.0, 0.5]))
    assert np.max(np.abs(R[0, 1:])) <= 1e-8


def test_scalar_curvature_constant(fowler_metric):
    S = conformal.scalar_curvature_closed(fowler_metric, np.linspace(0, 6, 200))
    assert np.max(np.abs(S - 12.0)) <= 1e-7


def test_alternative_r00_disagrees(fowler_metric):
    rep = conformal.curvature_report(fowler_metric, GridSpec(16, 2))
    assert rep.audit["R_00_alternative_max_abs_diff"] > 1e-2
    lo, hi = rep.audit["G_0_jk_alternative_factor_range"]
    assert hi - lo > 1e-2


def test_general_factor_standard_law():
    ub = fowler.constant_solution(4)
    u = conformal.ChartFactor(lambda p: ub * (1 + 0.01 * np.sin(p[0]) * np.cos(p[1])))
    p = np.array([0.7, 1.2, 1.9, 0.3])
    audit = conformal.ricci_general_factor_audit(4, u, p)
    assert audit["standard"]["max_discrepancy"] <= 1e-6
    assert audit["alternative"]["max_discrepancy"] > 1e-3


def test_d0_r00_equals_time_derivative_at_turning_point(fowler_metric):
    # u'(0) = 0, so the Christoffel correction vanishes there (up to interpolation).
    d = conformal.dricci_closed(fowler_metric, np.array([0.0, 1.0]))
    assert abs(d["D0_R00"][0] - d["dR00_dt"][0]) <= 1e-8
    assert abs(d["D0_R00"][1] - d["dR00_dt"][1]) > 1e-4


def test_theorem_on_fowler_orbit(fowler_metric):
    rep = conformal.curvature_report(fowler_metric)
    assert rep.harmonic and rep.non_parallel and not rep.parallel


def test_cylinder_control():
    ub = fowler.constant_solution(4)
    rep = conformal.curvature_report(ConformalCylinderMetric(4, 6.0, constant(ub, 6.0)),
                                     GridSpec(8, 3), weyl=True)
    assert rep.codazzi_max <= 1e-10 and rep.dric_max <= 1e-10
    assert rep.weyl_max <= 1e-7
    assert rep.verdict() == {"harmonic": True, "parallel": True, "non_parallel": False,
                             "conformally_flat": True}


def test_negative_control():
    rep = conformal.curvature_report(ConformalCylinderMetric(4, 6.0, sinusoid(6.0, 1.0, 0.3)))
    assert rep.codazzi_max >= 1e-3
    assert rep.scalar_curvature["std"] >= 1e-2
    assert not rep.harmonic


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_homothety_covariance(fowler_metric, c):
    from pseudocyl.scalars import PowerScalar
    scaled = ConformalCylinderMetric(4, 6.0, PowerScalar(fowler_metric.u, 1.0, c))
    t = np.linspace(0, 6, 50)
    S = conformal.scalar_curvature_closed(fowler_metric, t)
    Sc = conformal.scalar_curvature_closed(scaled, t)
    assert np.max(np.abs(Sc - c ** -2 * S)) <= 1e-10 * np.max(np.abs(S))


def test_oracle_scalar_curvature_constant(fowler_metric):
    S = conformal.oracle_scalar_curvature(fowler_metric, GridSpec(8, 2))
    assert np.max(np.abs(S - 12.0)) <= 1e-6


def test_report_serializes(fowler_metric):
    from pseudocyl import artifacts
    d = conformal.curvature_report(fowler_metric, GridSpec(4, 2)).to_dict()
    assert '"verdict"' in artifacts.dumps(d)


def test_validation():
    with pytest.raises(ValueError):
        ConformalCylinderMetric(4, 6.0, sinusoid(5.0))
    with pytest.raises(ValueError):
        ConformalCylinderMetric(2, 6.0, sinusoid(6.0))


def test_sign_mutation_is_caught(monkeypatch, fowler_metric):
    real = conformal._ricci_coeffs

    def flipped(m, t):
        d1, a, A, da, dA = real(m, t)
        return d1, -a, A, -da, dA

    monkeypatch.setattr(conformal, "_ricci_coeffs", flipped)
    err = conformal.oracle_agreement(fowler_metric, count=2, seed=0)
    assert err["ricci"] > 1e-6 and err["dricci"] > 1e-6
