"""Shared numerical kernel.

Initial-value integration (Dormand-Prince 5(4) with continuous extension),
quadrature for integrands with inverse-square-root endpoint singularities,
and bracketed root finding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "NumericsError",
    "StepSizeUnderflow",
    "NonFiniteState",
    "QuadratureError",
    "Bracket",
    "Trajectory",
    "integrate_ivp",
    "quad_singular",
    "find_root",
]

# Dormand-Prince tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array(_A[6] + [0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4
# Hairer's coefficients for the 4th-order continuous extension.
_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
               -10690763975 / 1880347072, 701980252875 / 199316789632,
               -1453857185 / 822651844, 69997945 / 29380423])


class NumericsError(RuntimeError):
    """Base class for failures of the numerical kernel."""


class StepSizeUnderflow(NumericsError):
    def __init__(self, t, y):
        self.t = float(t)
        self.y = np.array(y, dtype=float)
        super().__init__(
            f"step size underflow at t={self.t!r} (state {self.y.tolist()}); "
            "the problem is stiff or singular here"
        )


class NonFiniteState(NumericsError):
    def __init__(self, t, y):
        self.t = float(t)
        self.y = np.array(y, dtype=float)
        super().__init__(f"non-finite state at t={self.t!r}: {self.y.tolist()}")


class QuadratureError(NumericsError):
    def __init__(self, achieved, tol):
        self.achieved = float(achieved)
        self.tol = float(tol)
        super().__init__(
            f"quadrature tolerance {tol:.3g} not reached "
            f"(error estimate {achieved:.3g})"
        )


@dataclass(frozen=True)
class Bracket:
    """Interval ``[lo, hi]`` expected to contain a sign change."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


@dataclass
class Trajectory:
    """Accepted steps of an integration together with a dense interpolant.

    ``t_samples`` holds every step boundary (and every requested output
    time); ``y_samples[i]`` is the state at ``t_samples[i]``.  Calling the
    trajectory evaluates the continuous extension of order 4.
    """

    t_samples: np.ndarray
    y_samples: np.ndarray
    _dense: list = field(default_factory=list, repr=False)

    def __call__(self, t):
        t = float(t)
        ts = self.t_samples
        if t < ts[0] or t > ts[-1]:
            raise ValueError(f"t={t} outside trajectory [{ts[0]}, {ts[-1]}]")
        i = int(np.searchsorted(ts, t))
        if i < len(ts) and ts[i] == t:
            return self.y_samples[i].copy()
        i -= 1
        t0, h, r1, r2, r3, r4, r5 = self._dense[i]
        s = (t - t0) / h
        return r1 + s * (r2 + (1 - s) * (r3 + s * (r4 + (1 - s) * r5)))

    @property
    def y_final(self):
        return self.y_samples[-1]


def _rms_norm(x):
    return float(np.sqrt(np.mean(x * x)))


def _initial_step(rhs, t0, y0, f0, rtol, atol):
    # Hairer & Wanner, Solving ODEs I, II.4.
    scale = atol + rtol * np.abs(y0)
    d0 = _rms_norm(y0 / scale)
    d1 = _rms_norm(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = _rms_norm((f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def integrate_ivp(rhs, y0, t_span, rel_tol=1e-12, abs_tol=1e-13, t_eval=None,
                  max_steps=1_000_000):
    """Integrate ``y' = rhs(t, y)`` over ``t_span`` with adaptive DP5(4).

    The local error of every accepted step satisfies the mixed tolerance
    ``abs_tol + rel_tol * |y|``.  Steps are shortened so that each time in
    ``t_eval`` is landed on exactly (no interpolation at output times).

    Raises
    ------
    StepSizeUnderflow
        If the step size falls below the floating point spacing at ``t``.
    NonFiniteState
        If the right-hand side or the state becomes non-finite.
    """
    if not (0 < rel_tol < 1 and 0 < abs_tol < 1):
        raise ValueError("tolerances must lie in (0, 1)")
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ValueError("t_span must be an increasing interval")
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()

    def f(t, x):
        out = np.atleast_1d(np.asarray(rhs(t, x), dtype=float))
        if not np.all(np.isfinite(out)):
            raise NonFiniteState(t, x)
        return out

    stops = [t1]
    if t_eval is not None:
        te = np.asarray(t_eval, dtype=float)
        inside = te[(te > t0) & (te < t1)]
        stops = sorted(set(inside.tolist()) | {t1})

    t = t0
    k1 = f(t, y)
    h = _initial_step(f, t, y, k1, rel_tol, abs_tol)
    ts, ys, dense = [t], [y.copy()], []
    k = np.empty((7, y.size))
    stop_idx = 0
    steps = 0
    while stop_idx < len(stops):
        target = stops[stop_idx]
        steps += 1
        if steps > max_steps:
            raise NumericsError(f"step budget exhausted at t={t}")
        min_h = 16 * np.spacing(max(abs(t), 1.0))
        if h < min_h:
            raise StepSizeUnderflow(t, y)
        landing = target - t <= h * (1 + 1e-12)
        h_try = target - t if landing else h
        k[0] = k1
        for s in range(1, 7):
            ys_ = y + h_try * np.dot(_A[s], k[:s])
            k[s] = f(t + _C[s] * h_try, ys_)
        y_new = y + h_try * np.dot(_B5[:6], k[:6])
        err_vec = h_try * np.dot(_E, k)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms_norm(err_vec / scale)
        if not np.isfinite(err):
            raise NonFiniteState(t, y_new)
        if err <= 1.0:
            t_new = target if landing else t + h_try
            hs = h_try
            r2 = y_new - y
            r3 = hs * k[0] - r2
            r4 = r2 - hs * k[6] - r3
            r5 = hs * np.dot(_D, k)
            dense.append((t, t_new - t, y.copy(), r2, r3, r4, r5))
            t, y = t_new, y_new
            k1 = k[6].copy()
            ts.append(t)
            ys.append(y.copy())
            if landing:
                stop_idx += 1
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            # A step shortened to land on an output time says little about
            # the attainable step; keep the previous proposal then.
            h = max(h, h_try * factor) if landing and h_try < h else h_try * factor
        else:
            h = h_try * max(0.2, 0.9 * err ** -0.2)

    return Trajectory(np.asarray(ts), np.asarray(ys), dense)


def quad_singular(f, a, b, tol=1e-12, limit=200, offsets=False):
    """Integrate ``f`` over ``[a, b]`` allowing ``|x - a|^{-1/2}`` and
    ``|b - x|^{-1/2}`` behaviour at the endpoints.

    The substitution ``x = a + (b - a) sin^2 s`` turns such integrands into
    smooth functions of ``s`` on ``[0, pi/2]``, which are then handed to
    adaptive Gauss-Kronrod quadrature.

    With ``offsets=True`` the integrand is called as ``f(x, x - a, b - x)``
    where both offsets are computed from the substitution variable, so they
    stay accurate even where ``x`` itself rounds onto an endpoint.
    """
    if not b > a:
        raise ValueError("need a < b")
    width = b - a

    def g(s):
        sn, cs = np.sin(s), np.cos(s)
        da, db = width * sn * sn, width * cs * cs
        x = a + da if da <= db else b - db
        val = f(x, da, db) if offsets else f(x)
        return val * 2.0 * width * sn * cs

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(g, 0.0, np.pi / 2, epsabs=0.25 * tol,
                                    epsrel=0.0, limit=limit)
    if not np.isfinite(value) or err > tol:
        raise QuadratureError(err, tol)
    return value


def find_root(f, bracket, tol=1e-14):
    """Root of ``f`` inside ``bracket`` by Brent's method.

    The bracket must straddle a sign change; this is checked before any
    iteration.  The returned root is located to within ``tol`` (plus a few
    ulps of relative width).
    """
    if not isinstance(bracket, Bracket):
        bracket = Bracket(*bracket)
    flo, fhi = f(bracket.lo), f(bracket.hi)
    if flo == 0:
        return bracket.lo
    if fhi == 0:
        return bracket.hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError(
            f"invalid bracket [{bracket.lo}, {bracket.hi}]: "
            f"f has the same sign at both ends ({flo:.3g}, {fhi:.3g})"
        )
    return optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol,
                           rtol=4 * np.finfo(float).eps, maxiter=500)
