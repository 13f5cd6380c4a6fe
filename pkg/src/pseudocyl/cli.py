"""Command-line interface.

Subcommands::

    solve-fowler       --n N --period T [--samples K] [--tol TOL] --out PREFIX [--format csv|json]
    solve-derdzinski   --m M --R R --C C (--energy-offset S | --energy E) --out PREFIX [--format csv|json]
    curvature-report   (--orbit FILE | --factor cylinder|sinusoid --n N --period T)
                       [--convention total|fiber] [--grid-t K] [--grid-angular K]
                       [--oracle-points K] [--weyl] [--out FILE]
    period-table       --n N [--rows K] [--tol TOL] --out PREFIX
    verify             [--out FILE]

Every command prints a JSON summary on stdout.  Exit codes:

    0  success
    1  verify: at least one acceptance criterion failed
    2  invalid arguments or parameters
    3  requested period at or below the threshold 2 pi / sqrt(n - 2)
    4  degenerate orbit: energy at the center or outside the closed-orbit window
    5  file missing, unreadable or unwritable
    6  numerical failure (step-size underflow, quadrature or root finding)
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import (acceptance, artifacts, conformal, correspondence, derdzinski, fowler,
               hamiltonian, numerics)
from .conformal import ConformalCylinderMetric, GridSpec
from .scalars import constant, sinusoid

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BELOW_THRESHOLD = 3
EXIT_DEGENERATE = 4
EXIT_IO = 5
EXIT_NUMERICS = 6


@dataclass
class RunConfig:
    """Validated command configuration."""

    command: str
    options: dict = field(default_factory=dict)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj):
    sys.stdout.write(artifacts.dumps(obj))


def _positive_int(name, value, minimum=1):
    if value is None or value < minimum:
        raise UsageError(f"--{name} must be an integer >= {minimum}")
    return value


def cmd_solve_fowler(cfg):
    o = cfg.options
    n = _positive_int("n", o["n"], 3)
    orbit = fowler.solve_period(n, o["period"], samples=o["samples"], tol=o["tol"])
    files = artifacts.write_orbit(orbit, artifacts.resolve_output(o["out"]), o["format"])
    summary = artifacts.orbit_header(orbit)
    summary["T1"] = fowler.critical_period(n)
    summary["files"] = [str(f) for f in files]
    _emit(summary)
    return EXIT_OK


def _derdzinski_params(o):
    return derdzinski.DerdzinskiParams(_positive_int("m", o["m"], 3), o["R"], o["C"])


def cmd_solve_derdzinski(cfg):
    o = cfg.options
    p = _derdzinski_params(o)
    if o["energy"] is not None:
        E = o["energy"]
    else:
        E = derdzinski.energy_from_offset(p, o["energy_offset"])
    orbit = derdzinski.solve_derdzinski_periodic(p, E, samples=o["samples"])
    files = artifacts.write_orbit(orbit, artifacts.resolve_output(o["out"]), o["format"])
    summary = artifacts.orbit_header(orbit)
    summary["center_energy"] = derdzinski.center_energy(p)
    summary["files"] = [str(f) for f in files]
    _emit(summary)
    return EXIT_OK


def _report_metric(o):
    if o["orbit"]:
        orbit = artifacts.read_orbit(o["orbit"])
        if "n" in orbit.params:
            n = int(orbit.params["n"])
            return ConformalCylinderMetric(n, orbit.period, orbit.factor,
                                           f"fowler orbit {o['orbit']}"), {}
        eq = correspondence.derdzinski_to_pseudocylindric(orbit, o["convention"])
        return eq.conformal_metric(f"transported orbit {o['orbit']}"), {
            "convention": o["convention"], "fiber_radius": eq.params["fiber_radius"]}
    n = _positive_int("n", o["n"], 3)
    T = o["period"]
    if T is None or not T > 0:
        raise UsageError("--period must be positive")
    if o["factor"] == "cylinder":
        u = constant(fowler.constant_solution(n), T)
    else:
        u = sinusoid(T, 1.0, 0.3)
    return ConformalCylinderMetric(n, T, u, o["factor"]), {}


def cmd_curvature_report(cfg):
    o = cfg.options
    if bool(o["orbit"]) == bool(o["factor"]):
        raise UsageError("give exactly one of --orbit and --factor")
    m, extra = _report_metric(o)
    grid = GridSpec(n_t=_positive_int("grid-t", o["grid_t"]),
                    n_angular=_positive_int("grid-angular", o["grid_angular"]))
    rep = conformal.curvature_report(m, grid, weyl=o["weyl"],
                                     oracle_points=o["oracle_points"])
    out = {"schema_version": artifacts.SCHEMA_VERSION, "kind": "curvature_report"}
    out.update(rep.to_dict())
    out.update(extra)
    if o["out"]:
        artifacts.write_json(out, artifacts.resolve_output(o["out"]))
    _emit(out)
    return EXIT_OK


def period_grid(n, rows):
    """Energies from just above the center towards zero.

    The first row sits at a relative offset 1e-8 above the center energy,
    the rest are spread evenly over the window.
    """
    ec = fowler.center_energy(n)
    offsets = np.concatenate([[1e-8], np.linspace(0.02, 0.995, rows - 1)])
    return ec * (1 - offsets)


def cmd_period_table(cfg):
    o = cfg.options
    n = _positive_int("n", o["n"], 3)
    rows = _positive_int("rows", o["rows"], 2)
    E = period_grid(n, rows)
    T = np.array([fowler.period_function(n, e, o["tol"]) for e in E])
    meta = {"n": n, "T1": fowler.critical_period(n), "rows": rows,
            "center_energy": fowler.center_energy(n),
            "monotone_increasing": bool(np.all(np.diff(T) > 0))}
    files = artifacts.write_period_table(E, T, artifacts.resolve_output(o["out"]), meta)
    meta["first_row"] = {"E": float(E[0]), "T": float(T[0])}
    meta["files"] = [str(f) for f in files]
    _emit(meta)
    return EXIT_OK


def cmd_verify(cfg):
    results = acceptance.run()
    rep = acceptance.report(results)
    if cfg.options.get("out"):
        artifacts.write_json(rep, artifacts.resolve_output(cfg.options["out"]))
    for r in results:
        sys.stderr.write(r.line() + "\n")
    _emit({"all_passed": rep["all_passed"],
           "criteria": {str(r.id): r.passed for r in results}})
    return EXIT_OK if rep["all_passed"] else EXIT_FAILED


COMMANDS = {
    "solve-fowler": cmd_solve_fowler,
    "solve-derdzinski": cmd_solve_derdzinski,
    "curvature-report": cmd_curvature_report,
    "period-table": cmd_period_table,
    "verify": cmd_verify,
}


def build_parser():
    parser = _Parser(prog="pseudocyl", allow_abbrev=False,
                     description="Periodic Yamabe factors on cylinders and their curvature.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt_flag(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("solve-fowler", allow_abbrev=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--period", type=float, required=True)
    p.add_argument("--samples", type=int, default=hamiltonian.DEFAULT_SAMPLES)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", required=True)
    fmt_flag(p)

    p = sub.add_parser("solve-derdzinski", allow_abbrev=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--energy-offset", type=float)
    g.add_argument("--energy", type=float)
    p.add_argument("--samples", type=int, default=hamiltonian.DEFAULT_SAMPLES)
    p.add_argument("--out", required=True)
    fmt_flag(p)

    p = sub.add_parser("curvature-report", allow_abbrev=False)
    p.add_argument("--orbit")
    p.add_argument("--factor", choices=("cylinder", "sinusoid"))
    p.add_argument("--n", type=int)
    p.add_argument("--period", type=float)
    p.add_argument("--convention", choices=correspondence.CONVENTIONS, default="total")
    p.add_argument("--grid-t", type=int, default=GridSpec.n_t)
    p.add_argument("--grid-angular", type=int, default=GridSpec.n_angular)
    p.add_argument("--oracle-points", type=int, default=0)
    p.add_argument("--weyl", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("period-table", allow_abbrev=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rows", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", allow_abbrev=False)
    p.add_argument("--out")
    return parser


def parse(argv):
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items() if k != "command"}
    return RunConfig(ns.command, opts)


def _fail(code, message):
    sys.stderr.write(f"error: {message}\n")
    return code


def main(argv=None):
    try:
        cfg = parse(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except fowler.BelowThreshold as exc:
        return _fail(EXIT_BELOW_THRESHOLD, str(exc))
    except hamiltonian.NoClosedOrbit as exc:
        return _fail(EXIT_DEGENERATE, str(exc))
    except artifacts.ArtifactError as exc:
        return _fail(EXIT_IO, str(exc))
    except (numerics.NumericsError, RuntimeError) as exc:
        return _fail(EXIT_NUMERICS, str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
