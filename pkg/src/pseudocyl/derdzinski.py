"""Warp ODE of harmonic-curvature warped products ``dt^2 + h^{4/m} g0``.

With ``g0`` Einstein of dimension ``m`` and scalar curvature ``R``, the
warp satisfies

    h'' - (m R / (4(m-1))) h^{1-4/m} = -(m/4) C h,     C > 0.

This is a single-well oscillator with potential

    V(h) = -(m^2 R / (8(m-1)(m-2))) h^{(2m-4)/m} + (m C / 8) h^2

about ``h0 = (R / (C(m-1)))^{m/4}``, where ``V''(h0) = C``.  Nonconstant
periodic solutions exist for every energy in ``(V(h0), 0)``; they are
computed with the same machinery as the Fowler orbits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hamiltonian as ham
from .scalars import constant

__all__ = [
    "DerdzinskiParams",
    "derdzinski_potential",
    "derdzinski_residual",
    "derdzinski_energy",
    "derdzinski_constant",
    "center_energy",
    "energy_from_offset",
    "small_oscillation_period",
    "solve_derdzinski_periodic",
    "ConstantWarp",
    "constant_warp",
    "E_CENTER_3_6_2",
]

# V(h0) for (m, R, C) = (3, 6, 2); frozen regression value.
E_CENTER_3_6_2 = -2.7556759606310752


@dataclass(frozen=True)
class DerdzinskiParams:
    m: int
    R: float
    C: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 3:
            raise ValueError(f"fiber dimension m must be an integer >= 3, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not (np.isfinite(self.R) and self.R > 0):
            raise ValueError(f"fiber scalar curvature R must be positive, got {self.R!r}")
        if not (np.isfinite(self.C) and self.C > 0):
            raise ValueError(f"C must be positive, got {self.C!r}")

    def as_dict(self):
        return {"m": self.m, "R": float(self.R), "C": float(self.C)}


def derdzinski_potential(p):
    m, R, C = p.m, p.R, p.C
    return ham.PowerPotential(alpha=-m * m * R / (8 * (m - 1) * (m - 2)),
                              q=(2 * m - 4) / m, beta=m * C / 8)


def derdzinski_residual(p, h, h_dd):
    """``h'' - (mR/(4(m-1))) h^{1-4/m} + (m/4) C h``."""
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0):
        raise ValueError("warp function must be positive")
    m = p.m
    out = h_dd - m * p.R / (4 * (m - 1)) * h ** (1 - 4 / m) + m / 4 * p.C * h
    return out if np.ndim(out) else float(out)


def derdzinski_energy(p, h, h_prime):
    return derdzinski_potential(p).energy(h, h_prime)


def derdzinski_constant(p):
    return (p.R / (p.C * (p.m - 1))) ** (p.m / 4)


def center_energy(p):
    return derdzinski_potential(p).center_energy


def energy_from_offset(p, offset):
    """``E = E_center (1 - offset)``: 0 is the center, 1 the escape level."""
    if not 0 < offset < 1:
        raise ham.NoClosedOrbit(f"energy offset must lie in (0, 1), got {offset!r}")
    return center_energy(p) * (1 - offset)


def small_oscillation_period(p):
    return 2 * np.pi / np.sqrt(p.C)


def solve_derdzinski_periodic(p, E, samples=ham.DEFAULT_SAMPLES):
    """Nonconstant periodic warp at energy ``E`` with ``h(0) = h_min``."""
    return ham.solve_orbit(derdzinski_potential(p), E, params=p.as_dict(),
                           samples=samples)


@dataclass
class ConstantWarp:
    """The constant solution ``h = h0`` on a circle of length ``period``.

    Not a closed orbit; it carries the same ``params``, ``period`` and
    ``factor`` attributes so it can be transported like one.
    """

    params: dict
    period: float
    value: float

    def __post_init__(self):
        self.factor = constant(self.value, self.period)


def constant_warp(p, period=None):
    T = small_oscillation_period(p) if period is None else float(period)
    return ConstantWarp(p.as_dict(), T, derdzinski_constant(p))
