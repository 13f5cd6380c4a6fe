"""Periodic orbits of ``u'' = -V'(u)`` for single-well power potentials.

Both warp/conformal-factor ODEs in this package are conservative
oscillators with potential

    V(u) = alpha * u**q + beta * u**2,

which vanishes at ``u = 0``, has one minimum at ``u_bar > 0`` and grows
without bound.  Closed orbits exist exactly for energies in
``(V(u_bar), 0)``.  The period is obtained from the energy by quadrature,
and orbits are produced by integrating from the lower turning point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import Bracket, find_root, integrate_ivp, quad_singular
from .scalars import PeriodicScalar, TrigInterpolant

__all__ = [
    "NoClosedOrbit",
    "PowerPotential",
    "OrbitFactor",
    "PeriodicOrbit",
    "turning_points",
    "period",
    "return_time",
    "solve_orbit",
]

DEFAULT_RTOL = 1e-12
DEFAULT_ATOL = 1e-13
DEFAULT_SAMPLES = 256
# Spectral cutoff for orbit interpolants, relative to max |u|.
SPECTRAL_FLOOR = 1e-13


class NoClosedOrbit(ValueError):
    """Energy outside the window of nonconstant closed orbits."""


@dataclass(frozen=True)
class PowerPotential:
    alpha: float
    q: float
    beta: float

    def __post_init__(self):
        if self.q == 2 or self.q <= 0:
            raise ValueError("exponent q must be positive and different from 2")
        # Single well with V(0+) = 0 needs the small-u term negative and the
        # large-u term positive.
        small, large = (self.alpha, self.beta) if self.q < 2 else (self.beta, self.alpha)
        if not (small < 0 < large):
            raise ValueError("coefficients do not give a single well")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return self.alpha * u**self.q + self.beta * u * u

    def d1(self, u):
        return self.alpha * self.q * u ** (self.q - 1) + 2 * self.beta * u

    def d2(self, u):
        return self.alpha * self.q * (self.q - 1) * u ** (self.q - 2) + 2 * self.beta

    def drop(self, a, u):
        """``V(a) - V(u)`` without catastrophic cancellation for ``u ~ a``."""
        u = np.asarray(u, dtype=float)
        power = u**self.q * np.expm1(self.q * np.log1p((a - u) / u))
        return self.alpha * power + self.beta * (a - u) * (a + u)

    def rise(self, a, d):
        """``V(a) - V(a + d)``, accurate for small offsets ``d``."""
        grow = -np.expm1(self.q * np.log1p(d / a))
        return self.alpha * a**self.q * grow - self.beta * d * (2 * a + d)

    @property
    def center(self):
        return (-2 * self.beta / (self.alpha * self.q)) ** (1 / (self.q - 2))

    @property
    def center_energy(self):
        return float(self(self.center))

    @property
    def frequency(self):
        """Small-oscillation angular frequency ``sqrt(V''(u_bar))``."""
        return float(np.sqrt(self.d2(self.center)))

    def energy(self, u, u_prime):
        return 0.5 * np.asarray(u_prime) ** 2 + self(u)

    def rhs(self, t, y):
        return np.array([y[1], -self.d1(y[0])])


def _check_window(pot, energy):
    ec = pot.center_energy
    if energy == ec:
        raise NoClosedOrbit(
            f"energy {energy!r} is the center energy: the solution is constant"
        )
    if not (ec < energy < 0):
        raise NoClosedOrbit(
            f"energy {energy!r} outside the closed-orbit window ({ec!r}, 0)"
        )
    return energy - ec


def turning_points(pot, energy):
    """Roots ``u_min < u_bar < u_max`` of ``V(u) = energy``."""
    delta = _check_window(pot, energy)
    ub = pot.center

    def g(u):
        # V(u) - E, measured from the well bottom.
        return -pot.drop(ub, u) - delta

    lo = 0.5 * ub
    while g(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoClosedOrbit("lower turning point underflows")
    hi = 2.0 * ub
    while g(hi) <= 0:
        hi *= 2.0
    u_min = find_root(g, Bracket(lo, ub), tol=1e-300)
    u_max = find_root(g, Bracket(ub, hi), tol=1e-300)
    return u_min, u_max


def _kinetic(pot, a, b):
    """``E - V(u)`` between the turning points, from the endpoint offsets.

    Each half of the interval is measured from its own turning point, taking
    ``V(a) = V(b) = E`` exactly.  The roots are accurate to an ulp, so this
    shifts the energy by far less than the quadrature tolerance while
    keeping the integrand smooth right up to the endpoints.
    """

    def G(u, da, db):
        if da <= db:
            return pot.rise(a, da)
        return pot.rise(b, -db)

    return G


def period(pot, energy, tol=1e-10):
    """Period ``2 * int_{u_min}^{u_max} du / sqrt(2 (E - V(u)))``."""
    a, b = turning_points(pot, energy)
    G = _kinetic(pot, a, b)
    return 2.0 * quad_singular(lambda u, da, db: 1.0 / np.sqrt(2.0 * G(u, da, db)),
                               a, b, tol=0.5 * tol, offsets=True)


def return_time(pot, energy, rel_tol=DEFAULT_RTOL, abs_tol=DEFAULT_ATOL):
    """Period measured by integration: first return of ``u'`` to zero from
    below, starting at the lower turning point."""
    a, _ = turning_points(pot, energy)
    guess = 2 * np.pi / pot.frequency
    t_end = 1.5 * guess
    while True:
        traj = integrate_ivp(pot.rhs, [a, 0.0], (0.0, t_end), rel_tol, abs_tol)
        v = traj.y_samples[:, 1]
        idx = np.nonzero((v[:-1] < 0) & (v[1:] >= 0))[0]
        if idx.size:
            i = idx[0]
            lo, hi = traj.t_samples[i], traj.t_samples[i + 1]
            if v[i + 1] == 0:
                return float(hi)
            return find_root(lambda t: traj(t)[1], Bracket(lo, hi), tol=1e-15)
        t_end *= 2


class OrbitFactor(PeriodicScalar):
    """Orbit ``u(t)`` as a trigonometric interpolant of its samples.

    Value and first derivative come from the interpolant; the second and
    third derivatives come from the ODE, ``u'' = -V'(u)`` and
    ``u''' = -V''(u) u'``.
    """

    def __init__(self, interpolant, potential):
        self.interp = interpolant
        self.potential = potential
        self.period = interpolant.period

    def __call__(self, t, nu=0):
        if nu == 0:
            return self.interp(t)
        if nu == 1:
            return self.interp(t, 1)
        u = np.asarray(self.interp(t))
        if nu == 2:
            out = -self.potential.d1(u)
        elif nu == 3:
            out = -self.potential.d2(u) * np.asarray(self.interp(t, 1))
        else:
            raise ValueError(f"derivative order must be 0..3, got {nu}")
        out = np.asarray(out)
        return out if out.ndim else out[()]


@dataclass
class PeriodicOrbit:
    """A nonconstant closed orbit sampled at uniform times over one period.

    Phase convention: ``u(0) = u_min`` and ``u'(0) = 0``.
    """

    params: dict
    energy: float
    period: float
    u_min: float
    u_max: float
    t: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    potential: PowerPotential
    closure_error: float = 0.0
    factor: OrbitFactor = field(init=False, repr=False)

    def __post_init__(self):
        self.factor = OrbitFactor(TrigInterpolant(self.u, self.period, SPECTRAL_FLOOR),
                                   self.potential)

    def energies(self):
        return self.potential.energy(self.u, self.u_prime)

    def spectral_residual(self, samples=DEFAULT_SAMPLES):
        """``u'' + V'(u)`` with ``u''`` differentiated from the interpolant."""
        t = np.linspace(0.0, self.period, samples, endpoint=False)
        interp = self.factor.interp
        return interp(t, 2) + self.potential.d1(interp(t))


def solve_orbit(pot, energy, params=None, samples=DEFAULT_SAMPLES,
                rel_tol=DEFAULT_RTOL, abs_tol=DEFAULT_ATOL, period_value=None):
    """Integrate the closed orbit at ``energy`` over one period.

    The period is taken from quadrature unless ``period_value`` is given.
    """
    a, b = turning_points(pot, energy)
    T = period(pot, energy) if period_value is None else float(period_value)
    t = np.arange(samples) * (T / samples)
    traj = integrate_ivp(pot.rhs, [a, 0.0], (0.0, T), rel_tol, abs_tol, t_eval=t)
    pick = np.searchsorted(traj.t_samples, t)
    if not np.array_equal(traj.t_samples[pick], t):
        raise RuntimeError("integrator missed requested sample times")
    y = traj.y_samples[pick]
    closure = float(np.max(np.abs(traj.y_final - np.array([a, 0.0]))))
    return PeriodicOrbit(
        params=dict(params or {}),
        energy=float(energy),
        period=T,
        u_min=a,
        u_max=b,
        t=t,
        u=y[:, 0].copy(),
        u_prime=y[:, 1].copy(),
        potential=pot,
        closure_error=closure,
    )
