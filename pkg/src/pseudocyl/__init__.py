"""Periodic Yamabe factors on S^1(T) x S^{n-1}, harmonic-curvature warped
products, and finite-difference curvature checks."""

from .conformal import ConformalCylinderMetric, CurvatureReport, GridSpec, curvature_report
from .correspondence import (ConformalEquivalence, WarpedMetric, derdzinski_to_pseudocylindric,
                             verify_identification, warped_to_conformal)
from .derdzinski import DerdzinskiParams, solve_derdzinski_periodic
from .fowler import BelowThreshold, FowlerParams, period_function, solve_period
from .hamiltonian import NoClosedOrbit, PeriodicOrbit, PowerPotential
from .oracle import MetricField

__version__ = "0.1.0"

__all__ = [
    "BelowThreshold",
    "ConformalCylinderMetric",
    "ConformalEquivalence",
    "CurvatureReport",
    "DerdzinskiParams",
    "FowlerParams",
    "GridSpec",
    "MetricField",
    "NoClosedOrbit",
    "PeriodicOrbit",
    "PowerPotential",
    "WarpedMetric",
    "curvature_report",
    "derdzinski_to_pseudocylindric",
    "period_function",
    "solve_derdzinski_periodic",
    "solve_period",
    "verify_identification",
    "warped_to_conformal",
]
