"""The acceptance suite: eleven numbered, self-contained checks.

Each check returns a :class:`CriterionResult` whose ``details`` hold the
measured quantities next to their thresholds.  Nothing time- or
machine-dependent goes into the details, so serialized reports are
reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import artifacts, conformal, correspondence, derdzinski, fowler, hamiltonian
from .conformal import ConformalCylinderMetric, GridSpec
from .scalars import constant, sinusoid

__all__ = ["CriterionResult", "CRITERIA", "run", "report"]


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self):
        return f"criterion {self.id:2d} {'PASS' if self.passed else 'FAIL'}: {self.name}"

    def to_dict(self):
        return {"id": self.id, "name": self.name, "passed": bool(self.passed),
                "details": self.details}


def _near_center(ec):
    # A relative offset of 1e-8 above a negative center energy.
    return ec + 1e-8 * abs(ec)


def c1_threshold():
    rows = {}
    ok = True
    for n in (3, 4, 5, 6):
        E = _near_center(fowler.center_energy(n))
        T = fowler.period_function(n, E)
        T1 = fowler.critical_period(n)
        rows[str(n)] = {"E": E, "T": T, "T1": T1, "error": abs(T - T1)}
        ok &= abs(T - T1) <= 1e-4
    return ok, {"tolerance": 1e-4, "by_n": rows}


def _orbit_4_6():
    return fowler.solve_period(4, 6.0)


def c2_existence():
    orbit = _orbit_4_6()
    it = orbit.factor.interp
    # Nodes and midpoints, second derivative of the interpolant.
    t = np.arange(2 * orbit.t.size) * (orbit.period / (2 * orbit.t.size))
    resid = float(np.max(np.abs(fowler.fowler_residual(4, it(t), it(t, 2)))))
    ret = fowler.return_time(4, orbit.energy)
    period_err = max(abs(orbit.period - 6.0), abs(ret - 6.0))
    ratio = orbit.u_max / orbit.u_min
    try:
        fowler.solve_period(4, 4.0)
        below = {"raised": False}
    except fowler.BelowThreshold as exc:
        below = {"raised": True, "threshold": exc.threshold}
    ok = resid <= 1e-8 and period_err <= 1e-8 and ratio >= 1.01 and below["raised"]
    return ok, {"E": orbit.energy, "u_min": orbit.u_min, "u_max": orbit.u_max,
                "fowler_residual_max": resid, "period_error": period_err,
                "u_ratio": ratio, "T4_below_threshold": below}


def _fowler_metric():
    orbit = _orbit_4_6()
    return ConformalCylinderMetric(4, 6.0, orbit.factor, "fowler n=4 T=6")


def c3_scalar_constant():
    m = _fowler_metric()
    S = conformal.oracle_scalar_curvature(m, GridSpec())
    dev = float(np.max(np.abs(S - 12.0)))
    return dev <= 1e-6, {"grid": "default 64 x 5", "target": 12.0,
                         "max_deviation": dev, "mean": float(np.mean(S))}


def c4_theorem():
    rep = conformal.curvature_report(_fowler_metric())
    ub = fowler.constant_solution(4)
    cyl = conformal.curvature_report(
        ConformalCylinderMetric(4, 6.0, constant(ub, 6.0), "cylinder"))
    ok = (rep.codazzi_max <= 1e-6 and rep.dric_max >= 1e-3
          and cyl.codazzi_max <= 1e-10 and cyl.dric_max <= 1e-10)
    return ok, {"codazzi_max": rep.codazzi_max, "dric_max": rep.dric_max,
                "cylinder_codazzi_max": cyl.codazzi_max,
                "cylinder_dric_max": cyl.dric_max}


def c5_negative_control():
    rep = conformal.curvature_report(
        ConformalCylinderMetric(4, 6.0, sinusoid(6.0, 1.0, 0.3), "1+0.3 sin"))
    std = rep.scalar_curvature["std"]
    ok = rep.codazzi_max >= 1e-3 and std >= 1e-2
    return ok, {"codazzi_max": rep.codazzi_max, "scalar_curvature_std": std}


# Circle lengths for the oracle cross-check, one per dimension.
ORACLE_CASES = ((3, 7.0), (4, 5.0), (5, 4.0))


def c6_oracle():
    rows = {}
    ok = True
    for n, T in ORACLE_CASES:
        orbit = fowler.solve_period(n, T)
        err = conformal.oracle_agreement(
            ConformalCylinderMetric(n, T, orbit.factor, f"fowler n={n}"), count=20, seed=0)
        rows[str(n)] = dict(T=T, **err)
        ok &= max(err.values()) <= 1e-6
    return ok, {"tolerance": 1e-6, "points": 20, "by_n": rows}


WEYL_GRID = GridSpec(n_t=8, n_angular=3)


def c7_weyl():
    rows = {}
    ok = True
    for n, T, tol in ((3, 7.0, 1e-12), (4, 6.0, 1e-6), (5, 5.0, 1e-6)):
        orbit = fowler.solve_period(n, T)
        w = conformal.weyl_vanishing_check(
            ConformalCylinderMetric(n, T, orbit.factor, f"fowler n={n}"), WEYL_GRID)
        rows[str(n)] = {"T": T, "weyl_max": w, "tolerance": tol}
        ok &= w <= tol
    return ok, {"by_n": rows}


def c8_derdzinski():
    p = derdzinski.DerdzinskiParams(3, 6, 2)
    h0 = derdzinski.derdzinski_constant(p)
    const_res = abs(derdzinski.derdzinski_residual(p, h0, 0.0))
    pot = derdzinski.derdzinski_potential(p)
    T_near = hamiltonian.period(pot, _near_center(pot.center_energy))
    T_lin = derdzinski.small_oscillation_period(p)
    orbit = derdzinski.solve_derdzinski_periodic(p, derdzinski.energy_from_offset(p, 0.5))
    it = orbit.factor.interp
    t = np.arange(2 * orbit.t.size) * (orbit.period / (2 * orbit.t.size))
    h = it(t)
    resid = float(np.max(np.abs(derdzinski.derdzinski_residual(p, h, it(t, 2)))))
    energies = orbit.energies()
    drift = float(np.max(np.abs(energies - orbit.energy)))
    ok = (const_res <= 1e-12 and abs(T_near - T_lin) <= 1e-4 and resid <= 1e-8
          and drift <= 1e-10 and float(np.min(h)) > 0)
    return ok, {"constant_residual": const_res, "near_center_period": T_near,
                "linearized_period": T_lin, "orbit_residual_max": resid,
                "energy_drift_max": drift, "h_min": orbit.u_min, "h_max": orbit.u_max}


def _derdzinski_orbit():
    p = derdzinski.DerdzinskiParams(3, 6, 2)
    return derdzinski.solve_derdzinski_periodic(p, derdzinski.energy_from_offset(p, 0.5))


def c9_lemma():
    T = 5.0
    cases = {
        "constant": correspondence.WarpedMetric(T, constant(1.3, T), 3),
        "sinusoidal": correspondence.WarpedMetric(T, sinusoid(T, 1.0, 0.2), 3),
    }
    orbit = _derdzinski_orbit()
    eqs = {k: correspondence.warped_to_conformal(w) for k, w in cases.items()}
    eqs["derdzinski"] = correspondence.derdzinski_to_pseudocylindric(orbit, "total")
    rows = {}
    ok = True
    for k, eq in eqs.items():
        c = eq.certificate
        rows[k] = {"L": c["L"], "L_abs_diff": c["L_abs_diff"],
                   "pullback_max_rel": c["pullback_max_rel"],
                   "roundtrip_max": c["roundtrip_max"]}
        ok &= c["pullback_max_rel"] <= 1e-9 and c["L_abs_diff"] <= 1e-10
    return ok, {"cases": rows}


def c10_identification():
    both = correspondence.identify_both_conventions(_derdzinski_orbit())
    keep = ("convention", "m", "n", "L", "R_bar_mean", "R_bar_stddev",
            "fowler_residual_max", "codazzi_max", "dric_max", "passes")
    reports = {c: {k: r[k] for k in keep} for c, r in both["reports"].items()}
    return bool(both["passing_conventions"]), {
        "passing_conventions": both["passing_conventions"], "reports": reports}


def _probe():
    orbit = _orbit_4_6()
    text = artifacts.dumps(artifacts.orbit_header(orbit))
    text += artifacts._csv_text([orbit.t, orbit.u, orbit.u_prime], ["t", "u", "u_prime"])
    for fn in (c1_threshold, c8_derdzinski):
        text += artifacts.dumps(fn()[1])
    return text.encode()


def c11_determinism():
    a, b = _probe(), _probe()
    return a == b, {"probe": "orbit artifact and criteria 1, 8 serialized twice",
                    "sha256": hashlib.sha256(a).hexdigest(), "identical": a == b}


CRITERIA = {
    1: ("threshold reproduction", c1_threshold),
    2: ("existence above threshold", c2_existence),
    3: ("constant scalar curvature (oracle)", c3_scalar_constant),
    4: ("harmonic and non-parallel; cylinder control", c4_theorem),
    5: ("negative control", c5_negative_control),
    6: ("closed form vs finite-difference oracle", c6_oracle),
    7: ("conformal flatness", c7_weyl),
    8: ("Derdzinski solver", c8_derdzinski),
    9: ("warped to conformal identity", c9_lemma),
    10: ("identification transport", c10_identification),
    11: ("determinism", c11_determinism),
}


def run(ids=None):
    out = []
    for i in sorted(CRITERIA if ids is None else ids):
        name, fn = CRITERIA[i]
        passed, details = fn()
        out.append(CriterionResult(i, name, bool(passed), details))
    return out


def report(results):
    return {
        "schema_version": artifacts.SCHEMA_VERSION,
        "kind": "acceptance",
        "all_passed": all(r.passed for r in results),
        "criteria": [r.to_dict() for r in results],
    }
