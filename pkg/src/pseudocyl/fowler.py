"""Fowler ODE: t-dependent Yamabe factors on the cylinder S^1(T) x S^{n-1}.

For ``u = u(t)`` the Yamabe equation with target scalar curvature
``n(n-1)`` on ``dt^2 + dxi^2`` reduces to

    u'' - ((n-2)^2/4) u + (n(n-2)/4) u^{(n+2)/(n-2)} = 0,

a conservative oscillator about the constant solution
``u_bar = ((n-2)/n)^{(n-2)/4}`` with small-oscillation frequency
``sqrt(n-2)``.  Nonconstant T-periodic solutions exist iff
``T > 2 pi / sqrt(n-2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hamiltonian as ham
from .numerics import Bracket, find_root

__all__ = [
    "FowlerParams",
    "BelowThreshold",
    "fowler_potential",
    "fowler_residual",
    "fowler_energy",
    "constant_solution",
    "center_energy",
    "turning_points",
    "period_function",
    "return_time",
    "critical_period",
    "energy_for_period",
    "solve_period",
]


class BelowThreshold(ValueError):
    """Requested circle length admits no nonconstant periodic solution."""

    def __init__(self, n, T):
        self.n = n
        self.T = T
        self.threshold = critical_period(n)
        super().__init__(
            f"no nonconstant solution for n={n}, T={T!r}: "
            f"need T > T1 = 2*pi/sqrt(n-2) = {self.threshold:.6f}"
        )


@dataclass(frozen=True)
class FowlerParams:
    n: int

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))

    def as_dict(self):
        return {"n": self.n}


def _check_n(n):
    if isinstance(n, FowlerParams):
        return n.n
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise ValueError(f"dimension n must be an integer >= 3, got {n!r}")
    return int(n)


def fowler_potential(n):
    n = _check_n(n)
    k = (n - 2) ** 2 / 8
    return ham.PowerPotential(alpha=k, q=2 * n / (n - 2), beta=-k)


def fowler_residual(n, u, u_dd):
    n = _check_n(n)
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("conformal factor must be positive")
    return u_dd - (n - 2) ** 2 / 4 * u + n * (n - 2) / 4 * u ** ((n + 2) / (n - 2))


def fowler_energy(n, u, u_prime):
    """First integral ``u'^2/2 + V(u)``; ``V(u) = (n-2)^2/8 (u^{2n/(n-2)} - u^2)``."""
    return fowler_potential(n).energy(u, u_prime)


def constant_solution(n):
    n = _check_n(n)
    return ((n - 2) / n) ** ((n - 2) / 4)


def center_energy(n):
    return fowler_potential(n).center_energy


def turning_points(n, E):
    return ham.turning_points(fowler_potential(n), E)


def period_function(n, E, tol=1e-10):
    return ham.period(fowler_potential(n), E, tol=tol)


def return_time(n, E):
    return ham.return_time(fowler_potential(n), E)


def critical_period(n):
    n = _check_n(n)
    return 2 * np.pi / np.sqrt(n - 2)


def energy_for_period(n, T_target, tol=1e-10):
    """Energy whose closed orbit has period ``T_target``.

    The bracket starts just above the center energy (where the period is
    close to the threshold) and is pushed geometrically towards zero
    energy, where the period diverges.
    """
    n = _check_n(n)
    T_target = float(T_target)
    if not T_target > critical_period(n):
        raise BelowThreshold(n, T_target)
    ec = center_energy(n)
    offset = 1e-6
    lo = ec * (1 - offset)
    while period_function(n, lo, tol) >= T_target:
        # Target within the first sliver above the threshold.
        offset *= 1e-2
        if offset < 1e-14:
            raise BelowThreshold(n, T_target)
        lo = ec * (1 - offset)
    hi = 0.5 * lo
    while period_function(n, hi, tol) <= T_target:
        lo, hi = hi, 0.5 * hi
        if hi > -1e-280:
            raise RuntimeError("period target not reached before zero energy")
    return find_root(lambda E: period_function(n, E, tol) - T_target,
                     Bracket(lo, hi), tol=1e-300)


def solve_period(n, T_target, samples=ham.DEFAULT_SAMPLES, tol=1e-10):
    """Nonconstant T-periodic solution with ``u(0) = u_min``."""
    n = _check_n(n)
    E = energy_for_period(n, T_target, tol)
    return ham.solve_orbit(fowler_potential(n), E, params={"n": n},
                           samples=samples)
