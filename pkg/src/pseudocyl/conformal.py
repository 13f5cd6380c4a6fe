r"""Closed-form curvature of ``g_bar = u(t)^{4/(n-2)} (dt^2 + dxi^2)``.

Write ``g_bar = e^{2 phi} g`` with ``phi = (2/(n-2)) log u``.  For a factor
depending on ``t`` only, the standard conformal transformation laws give

* ``Gamma_bar^0_00 = phi'``, ``Gamma_bar^i_{j0} = phi' delta^i_j``,
  ``Gamma_bar^0_{jk} = -phi' g_{jk}``, ``Gamma_bar^i_00 = 0``
* ``Ric_bar = a(t) dt^2 + A(t) g_sphere`` with
  ``a = -(n-1) phi''`` and ``A = (n-2) - phi'' - (n-2) phi'^2``
* ``R_bar = u^{-4/(n-2)} (a + (n-1) A)``

and the covariant derivative ``D Ric_bar`` follows with all Christoffel
terms kept.  The only nonzero components are ``D_0 R_00``, ``D_0 R_ij``
and ``D_i R_0j = D_i R_j0``; the Codazzi defect is proportional to
``A' - phi' (a + A)``, which vanishes exactly when ``R_bar`` is constant.

Alternative forms of ``R_bar_00`` and ``Gamma_bar^0_{jk}`` that disagree
with these are kept alongside for audit (``*_alternative`` keys).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import oracle
from .scalars import PeriodicScalar

__all__ = [
    "ConformalCylinderMetric",
    "GridSpec",
    "CurvatureReport",
    "ChartFactor",
    "christoffel_closed",
    "christoffel_tensor",
    "ricci_closed",
    "ricci_tensor",
    "scalar_curvature_closed",
    "dricci_closed",
    "dricci_tensor",
    "ricci_general_factor",
    "ricci_general_factor_audit",
    "harmonicity_certificate",
    "nonparallelism_certificate",
    "weyl_vanishing_check",
    "oracle_scalar_curvature",
    "oracle_agreement",
    "random_points",
    "curvature_report",
    "HARMONIC_TOL",
    "NONPARALLEL_MIN",
    "PARALLEL_TOL",
]

HARMONIC_TOL = 1e-6
NONPARALLEL_MIN = 1e-3
PARALLEL_TOL = 1e-10


@dataclass
class ConformalCylinderMetric:
    n: int
    T: float
    u: PeriodicScalar
    label: str = ""

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n!r}")
        self.n = int(self.n)
        if not self.T > 0:
            raise ValueError("circle length T must be positive")
        if abs(self.u.period - self.T) > 1e-9 * self.T:
            raise ValueError(f"factor period {self.u.period} differs from T={self.T}")
        self.u.check_positive()

    @property
    def exponent(self):
        return 4 / (self.n - 2)

    def metric_field(self, margin=oracle.CHART_MARGIN):
        base = oracle.cylinder_metric(self.n, self.T, margin=margin)
        u = self.u
        cache = {}

        def factor(p):
            # Stencils along the angles revisit the same t.
            t = p[0]
            if t not in cache:
                if len(cache) > 4096:
                    cache.clear()
                cache[t] = u(t)
            return cache[t]

        return oracle.conformal_metric(base, factor, self.exponent)

    def describe(self):
        return {"n": self.n, "T": float(self.T),
                "factor": self.label or type(self.u).__name__}


@dataclass(frozen=True)
class GridSpec:
    """``n_t`` uniform circle points times ``n_angular`` sphere points.

    Sphere points put every polar angle and the azimuth at the same value,
    spread uniformly over ``[margin, pi - margin]``.
    """

    n_t: int = 64
    n_angular: int = 5
    margin: float = 0.4

    def times(self, T):
        return np.arange(self.n_t) * (T / self.n_t)

    def angles(self):
        return np.linspace(self.margin, np.pi - self.margin, self.n_angular)

    def points(self, n, T):
        pts = []
        for t in self.times(T):
            for a in self.angles():
                pts.append(np.concatenate([[t], np.full(n - 1, a)]))
        return pts


def _factor(u, t):
    if np.any(np.asarray(u(t)) <= 0):
        raise ValueError("conformal factor must be positive")
    return [np.asarray(u(t, k), dtype=float) for k in range(4)]


def _phi(m, t):
    """``phi', phi'', phi'''`` for ``phi = (2/(n-2)) log u``."""
    u0, u1, u2, u3 = _factor(m.u, t)
    c = 2 / (m.n - 2)
    r1, r2, r3 = u1 / u0, u2 / u0, u3 / u0
    return c * r1, c * (r2 - r1**2), c * (r3 - 3 * r1 * r2 + 2 * r1**3)


def christoffel_closed(m, t):
    """Christoffel symbols of ``g_bar`` that involve the circle direction.

    ``Gamma_bar^i_{j0} = G_i_j0 * delta^i_j`` and
    ``Gamma_bar^0_{jk} = G_0_jk * g_{jk}`` (base cylinder metric).
    """
    d1, _, _ = _phi(m, t)
    u0 = np.asarray(m.u(t), dtype=float)
    return {
        "G_0_00": d1,
        "G_i_00": np.zeros_like(d1),
        "G_i_j0": d1,
        "G_0_jk": -d1,
        # Same symbol expressed against g_bar_{jk} instead of g_{jk}.
        "G_0_jk_alternative": -d1 * u0**m.exponent,
    }


def _sphere_christoffel(angles):
    """Christoffel symbols of the unit sphere in iterated spherical chart."""
    d = angles.size
    diag = oracle._sphere_diag(angles)
    # dlog[b, a] = d_b log g_aa = 2 cot(theta_b) for polar b < a.
    dlog = np.zeros((d, d))
    cot = 1 / np.tan(angles[:-1])
    for b in range(d - 1):
        dlog[b, b + 1:] = 2 * cot[b]
    G = np.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            G[a, a, b] += 0.5 * dlog[b, a]
            if a != b:
                G[a, b, a] += 0.5 * dlog[b, a]
                G[b, a, a] -= 0.5 * dlog[b, a] * diag[a] / diag[b]
    return G, diag, dlog


def _base(n, p):
    """Christoffel symbols, metric and metric derivatives of the cylinder."""
    p = np.asarray(p, dtype=float)
    if p.shape != (n,):
        raise ValueError(f"chart point needs {n} coordinates")
    Gs, diag, dlog = _sphere_christoffel(p[1:])
    G = np.zeros((n, n, n))
    G[1:, 1:, 1:] = Gs
    g = np.diag(np.concatenate([[1.0], diag]))
    dg = np.zeros((n, n, n))
    for b in range(n - 1):
        dg[b + 1, 1:, 1:] = np.diag(dlog[b] * diag)
    return G, g, dg


def christoffel_tensor(m, p):
    """All ``Gamma_bar^i_{jk}`` at a chart point ``(t, angles...)``."""
    G, g, _ = _base(m.n, p)
    d1, _, _ = _phi(m, p[0])
    dphi = np.zeros(m.n)
    dphi[0] = d1
    eye = np.eye(m.n)
    ginv = np.diag(1 / np.diag(g))
    return (G + np.einsum("ki,j->kij", eye, dphi) + np.einsum("kj,i->kij", eye, dphi)
            - np.einsum("ij,k->kij", g, ginv @ dphi))


def ricci_closed(m, t):
    """``R_bar_00 = a``, ``R_bar_0i = 0``, ``R_bar_ij = A g_ij`` (sphere)."""
    d1, d2, _ = _phi(m, t)
    n = m.n
    u0, u1, u2, _ = _factor(m.u, t)
    a = -(n - 1) * d2
    A = (n - 2) - d2 - (n - 2) * d1**2
    return {
        "R_00": a,
        "R_0i": np.zeros_like(a),
        "R_ij": A,
        "R_00_alternative": 2 * (n - 1) / (n - 2) * (u2 / u0 + (u1 / u0) ** 2),
    }


def _ricci_coeffs(m, t):
    d1, d2, d3 = _phi(m, t)
    n = m.n
    a = -(n - 1) * d2
    A = (n - 2) - d2 - (n - 2) * d1**2
    da = -(n - 1) * d3
    dA = -d3 - 2 * (n - 2) * d1 * d2
    return d1, a, A, da, dA


def ricci_tensor(m, p):
    _, g, _ = _base(m.n, p)
    _, a, A, _, _ = _ricci_coeffs(m, p[0])
    R = A * g
    R[0, 0] = a
    return R


def scalar_curvature_closed(m, t):
    _, a, A, _, _ = _ricci_coeffs(m, t)
    u0 = np.asarray(m.u(t), dtype=float)
    return u0 ** (-m.exponent) * (a + (m.n - 1) * A)


def dricci_closed(m, t):
    """Nonzero components of ``D_k R_bar_ij`` for a t-only factor.

    ``D0_R00`` and the time derivative ``dR00_dt`` differ by
    ``-2 Gamma_bar^0_00 R_bar_00``.
    """
    d1, a, A, da, dA = _ricci_coeffs(m, t)
    return {
        "D0_R00": da - 2 * d1 * a,
        "D0_Rij": dA - 2 * d1 * A,
        "Di_R0j": d1 * (a - A),
        "dR00_dt": da,
    }


def dricci_tensor(m, p):
    """``D_k R_bar_ij = d_k R_ij - Gamma^l_{ki} R_lj - Gamma^l_{kj} R_il``."""
    _, g, dg = _base(m.n, p)
    _, a, A, da, dA = _ricci_coeffs(m, p[0])
    R = A * g
    R[0, 0] = a
    dR = A * dg
    dR[0] = dA * g
    dR[0, 0, 0] = da
    G = christoffel_tensor(m, p)
    return dR - np.einsum("lki,lj->kij", G, R) - np.einsum("lkj,il->kij", G, R)


def _gbar_inverse(m, p):
    _, g, _ = _base(m.n, p)
    return np.diag(1 / np.diag(g)) * float(m.u(p[0])) ** (-m.exponent)


def _dric_norm(m, p, DR):
    gi = np.diag(_gbar_inverse(m, p))
    w = np.einsum("k,i,j->kij", gi, gi, gi)
    return float(np.sqrt(np.sum(w * DR * DR)))


class ChartFactor:
    """Conformal factor ``u(t, xi)`` on the cylinder chart.

    ``grad`` and ``hess`` return coordinate derivatives; when omitted they
    are computed by fourth-order central differences.
    """

    def __init__(self, value, grad=None, hess=None, fd_step=None):
        self.value = value
        self._grad = grad
        self._hess = hess
        self.fd_step = fd_step

    def __call__(self, p):
        return float(self.value(np.asarray(p, dtype=float)))

    def _h(self, p):
        return oracle.default_fd_step(len(p)) if self.fd_step is None else self.fd_step

    def grad(self, p):
        p = np.asarray(p, dtype=float)
        if self._grad is not None:
            return np.asarray(self._grad(p), dtype=float)
        return oracle._fd(lambda q: np.asarray(self.value(q), dtype=float), p, self._h(p))

    def hess(self, p):
        p = np.asarray(p, dtype=float)
        if self._hess is not None:
            return np.asarray(self._hess(p), dtype=float)
        H = oracle._fd(self.grad, p, self._h(p))
        return 0.5 * (H + H.T)


def ricci_general_factor(n, u, p, variant="standard"):
    """``R_bar_00`` and ``R_bar_0i`` for a factor ``u(t, xi)``.

    ``variant="standard"`` evaluates the conformal transformation law
    ``R_bar_ij = R_ij - 2 Hess_ij u / u + 2n/(n-2) d_i u d_j u / u^2
    - 2/(n-2) (|grad u|^2 + u Lap u) / u^2 g_ij``;
    ``variant="alternative"`` evaluates the alternative closed forms
    ``R_bar_0i = -2 Hess_i0 u / u + (2n-1)/(n-2) d_i u d_t u / u^2`` and
    ``R_bar_00 = 2(n-1)/(n-2) (u_tt / u + u_t^2 / u^2)``.
    """
    n = int(n)
    p = np.asarray(p, dtype=float)
    val = u(p)
    if not val > 0:
        raise ValueError("conformal factor must be positive")
    G, g, _ = _base(n, p)
    du = u.grad(p)
    H = u.hess(p) - np.einsum("kij,k->ij", G, du)
    if variant == "alternative":
        R0i = -2 * H[0, 1:] / val + (2 * n - 1) / (n - 2) * du[1:] * du[0] / val**2
        R00 = 2 * (n - 1) / (n - 2) * (H[0, 0] / val + du[0] ** 2 / val**2)
        return {"R_00": float(R00), "R_0i": R0i}
    if variant != "standard":
        raise ValueError(f"unknown variant {variant!r}")
    ginv = np.diag(1 / np.diag(g))
    grad2 = float(du @ ginv @ du)
    lap = float(np.einsum("ij,ij->", ginv, H))
    Rbase = (n - 2) * g
    Rbase[0, :] = 0
    Rbase[:, 0] = 0
    Rbar = (Rbase - 2 * H / val + 2 * n / (n - 2) * np.outer(du, du) / val**2
            - 2 / (n - 2) * (grad2 + val * lap) / val**2 * g)
    return {"R_00": float(Rbar[0, 0]), "R_0i": Rbar[0, 1:].copy(), "R": Rbar}


def ricci_general_factor_audit(n, u, p):
    """Both closed-form variants against the finite-difference Ricci tensor."""
    base = oracle.cylinder_metric(n)
    ric = oracle.ricci(oracle.conformal_metric(base, u), p)
    ric = 0.5 * (ric + ric.T)
    out = {"oracle": {"R_00": float(ric[0, 0]), "R_0i": ric[0, 1:].tolist()}}
    for variant in ("standard", "alternative"):
        comp = ricci_general_factor(n, u, p, variant)
        out[variant] = {
            "R_00": comp["R_00"],
            "R_0i": np.asarray(comp["R_0i"]).tolist(),
            "max_discrepancy": float(max(abs(comp["R_00"] - ric[0, 0]),
                                         np.max(np.abs(comp["R_0i"] - ric[0, 1:])))),
        }
    return out


@dataclass
class CurvatureReport:
    metric: dict
    grid: dict
    scalar_curvature: dict
    codazzi_max: float
    codazzi_witness: list
    dric_max: float
    dric_witness: list
    weyl_max: float = None
    oracle_check: dict = None
    scalar_curvature_oracle: dict = None
    conventions: dict = field(default_factory=dict)
    audit: dict = field(default_factory=dict)

    @property
    def harmonic(self):
        return self.codazzi_max <= HARMONIC_TOL

    @property
    def parallel(self):
        return self.dric_max <= PARALLEL_TOL

    @property
    def non_parallel(self):
        return self.dric_max >= NONPARALLEL_MIN

    def verdict(self):
        out = {"harmonic": self.harmonic, "parallel": self.parallel,
               "non_parallel": self.non_parallel}
        if self.weyl_max is not None:
            out["conformally_flat"] = self.weyl_max <= HARMONIC_TOL
        return out

    def to_dict(self):
        d = asdict(self)
        d["verdict"] = self.verdict()
        return d


def _conventions():
    return {
        "conformal_exponent": "4/(n-2)",
        "riemann": "R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj",
        "ricci": "R_jl = R^k_jkl",
        "ricci_closed_form": "standard conformal transformation law",
        "yamabe_laplacian_sign": oracle.YAMABE_LAPLACIAN_SIGN,
        "yamabe_laplacian_convention": oracle.YAMABE_LAPLACIAN_CONVENTION,
        "christoffel_0jk": "Gamma_bar^0_jk = -phi' g_jk (base metric)",
    }


def _audit(m, t):
    ric = ricci_closed(m, t)
    dric = dricci_closed(m, t)
    weight = np.asarray(m.u(t), dtype=float) ** m.exponent
    return {
        "R_00_alternative_max_abs_diff":
            float(np.max(np.abs(ric["R_00_alternative"] - ric["R_00"]))),
        "D0_R00_minus_dR00_dt_max_abs":
            float(np.max(np.abs(dric["D0_R00"] - dric["dR00_dt"]))),
        # Gamma^0_jk against g_bar_jk instead of g_jk is off by u^{4/(n-2)}.
        "G_0_jk_alternative_factor_range": [float(np.min(weight)), float(np.max(weight))],
    }


def _stats(S, target):
    S = np.asarray(S, dtype=float)
    return {
        "mean": float(np.mean(S)),
        "std": float(np.std(S)),
        "max_deviation": float(np.max(np.abs(S - np.mean(S)))),
        "target": float(target),
        "max_deviation_from_target": float(np.max(np.abs(S - target))),
    }


def oracle_scalar_curvature(m, grid=GridSpec()):
    """Finite-difference scalar curvature of ``g_bar`` at every grid point."""
    field_ = m.metric_field()
    return np.array([oracle.scalar_curvature(field_, p) for p in grid.points(m.n, m.T)])


def curvature_report(m, grid=GridSpec(), weyl=False, oracle_points=0, seed=0,
                     oracle_scalar=False):
    """Closed-form certification over ``grid``.

    Optional extras: the finite-difference Weyl norm and scalar curvature on
    the grid, and an oracle comparison at ``oracle_points`` pseudo-random
    chart points.
    """
    pts = grid.points(m.n, m.T)
    cod, dric = [], []
    for p in pts:
        DR = dricci_tensor(m, p)
        cod.append(float(np.max(np.abs(DR - np.swapaxes(DR, 0, 1)))))
        dric.append(_dric_norm(m, p, DR))
    t = grid.times(m.T)
    S = scalar_curvature_closed(m, t)
    ic, idr = int(np.argmax(cod)), int(np.argmax(dric))
    report = CurvatureReport(
        metric=m.describe(),
        grid=asdict(grid),
        scalar_curvature=_stats(S, m.n * (m.n - 1)),
        codazzi_max=cod[ic],
        codazzi_witness=pts[ic].tolist(),
        dric_max=dric[idr],
        dric_witness=pts[idr].tolist(),
        conventions=_conventions(),
        audit=_audit(m, t),
    )
    if weyl:
        report.weyl_max = weyl_vanishing_check(m, grid)
    if oracle_scalar:
        report.scalar_curvature_oracle = _stats(oracle_scalar_curvature(m, grid),
                                                m.n * (m.n - 1))
    if oracle_points:
        report.oracle_check = oracle_agreement(m, oracle_points, seed=seed,
                                               margin=grid.margin)
    return report


def harmonicity_certificate(m, grid=GridSpec()):
    return curvature_report(m, grid)


def nonparallelism_certificate(m, grid=GridSpec()):
    return curvature_report(m, grid)


def weyl_vanishing_check(m, grid=GridSpec()):
    """Largest finite-difference Weyl norm of ``g_bar`` over the grid."""
    field_ = m.metric_field()
    return max(oracle.weyl_norm(field_, p) for p in grid.points(m.n, m.T))


def random_points(m, count, seed=0, margin=0.4):
    """Pseudo-random chart points with polar angles in ``[margin, pi - margin]``."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        t = rng.uniform(0, m.T)
        polar = rng.uniform(margin, np.pi - margin, m.n - 2)
        az = rng.uniform(0, 2 * np.pi)
        pts.append(np.concatenate([[t], polar, [az]]))
    return pts


def _rel(a, b):
    scale = float(np.max(np.abs(b)))
    return float(np.max(np.abs(a - b))) / scale if scale > 0 else float(np.max(np.abs(a)))


def oracle_agreement(m, count=20, seed=0, margin=0.4):
    """Closed form versus finite differences at random points.

    Each quantity's error is ``max|closed - oracle| / max|oracle|`` over the
    tensor's components, maximized over the points.
    """
    field_ = m.metric_field()
    worst = {"christoffel": 0.0, "ricci": 0.0, "dricci": 0.0, "scalar": 0.0}
    for p in random_points(m, count, seed, margin):
        G = oracle.christoffel(field_, p)
        R = oracle.riemann(field_, p)
        Ric = oracle.ricci(field_, p, R)
        S = oracle.scalar_curvature(field_, p, Ric)
        DR = oracle.ricci_covariant_derivative(field_, p)
        worst["christoffel"] = max(worst["christoffel"], _rel(christoffel_tensor(m, p), G))
        worst["ricci"] = max(worst["ricci"], _rel(ricci_tensor(m, p), 0.5 * (Ric + Ric.T)))
        worst["dricci"] = max(worst["dricci"], _rel(dricci_tensor(m, p), DR))
        worst["scalar"] = max(worst["scalar"],
                              _rel(np.array(scalar_curvature_closed(m, p[0])), np.array(S)))
    return worst
