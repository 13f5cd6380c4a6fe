"""Deterministic CSV and JSON artifacts.

Floats are written with 17 significant digits, which round-trips every
double; dictionaries keep insertion order.  Identical inputs therefore give
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path

import numpy as np

from . import derdzinski, fowler
from .hamiltonian import PeriodicOrbit

__all__ = [
    "SCHEMA_VERSION",
    "ArtifactError",
    "dumps",
    "write_json",
    "read_json",
    "write_orbit",
    "read_orbit",
    "orbit_header",
    "write_period_table",
    "resolve_output",
]

SCHEMA_VERSION = "1"
OUTPUT_DIR_ENV = "PSEUDOCYL_OUTPUT_DIR"


class ArtifactError(OSError):
    """Artifact missing, unreadable or malformed."""


def fmt(x):
    return format(float(x), ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        # Non-finite values have no JSON spelling.
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return _encode(obj, indent, 0) + "\n"


def resolve_output(path):
    """Relative output paths are placed under ``$PSEUDOCYL_OUTPUT_DIR`` when set."""
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _write_text(path, text):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ArtifactError(f"cannot write {path}: {exc}") from exc
    return path


def write_json(obj, path):
    return _write_text(path, dumps(obj))


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path} is not valid JSON: {exc}") from exc


def orbit_header(orbit):
    head = {"schema_version": SCHEMA_VERSION, "kind": "orbit"}
    head["params"] = dict(orbit.params)
    head.update(
        E=orbit.energy,
        T=orbit.period,
        u_min=orbit.u_min,
        u_max=orbit.u_max,
        samples=int(orbit.t.size),
        closure_error=orbit.closure_error,
        phase="u(0) = u_min, u'(0) = 0",
    )
    return head


def _csv_text(columns, names):
    rows = [",".join(names)]
    for row in zip(*columns):
        rows.append(",".join(fmt(x) for x in row))
    return "\n".join(rows) + "\n"


def write_orbit(orbit, prefix, fmt_="csv"):
    """Write ``prefix.csv`` (t,u,u_prime) plus ``prefix.json`` (header), or a
    single ``prefix.json`` carrying the samples when ``fmt_ == "json"``."""
    prefix = Path(prefix)
    head = orbit_header(orbit)
    if fmt_ == "csv":
        csv_path = _write_text(prefix.with_suffix(".csv"),
                               _csv_text([orbit.t, orbit.u, orbit.u_prime],
                                         ["t", "u", "u_prime"]))
        head["data"] = csv_path.name
        return [csv_path, write_json(head, prefix.with_suffix(".json"))]
    if fmt_ == "json":
        head["data"] = {"t": orbit.t, "u": orbit.u, "u_prime": orbit.u_prime}
        return [write_json(head, prefix.with_suffix(".json"))]
    raise ValueError(f"unknown format {fmt_!r}")


def _potential(params):
    if "n" in params:
        return fowler.fowler_potential(int(params["n"]))
    if {"m", "R", "C"} <= set(params):
        return derdzinski.derdzinski_potential(
            derdzinski.DerdzinskiParams(int(params["m"]), float(params["R"]),
                                        float(params["C"])))
    raise ArtifactError(f"orbit header params not recognized: {params}")


def read_orbit(path):
    """Rebuild a :class:`PeriodicOrbit` from a ``.csv`` or ``.json`` artifact."""
    path = Path(path)
    head = read_json(path.with_suffix(".json"))
    if head.get("kind") != "orbit":
        raise ArtifactError(f"{path} is not an orbit artifact")
    data = head.get("data")
    try:
        if isinstance(data, dict):
            cols = [np.asarray(data[k], dtype=float) for k in ("t", "u", "u_prime")]
        else:
            csv_path = path.with_suffix(".csv")
            with open(csv_path, newline="") as fh:
                rows = list(csv.reader(fh))
            if rows[0] != ["t", "u", "u_prime"]:
                raise ArtifactError(f"{csv_path}: unexpected columns {rows[0]}")
            cols = list(np.array(rows[1:], dtype=float).T)
    except OSError as exc:
        raise ArtifactError(f"cannot read orbit data for {path}: {exc}") from exc
    except (KeyError, ValueError, IndexError) as exc:
        raise ArtifactError(f"malformed orbit data for {path}: {exc}") from exc
    return PeriodicOrbit(
        params=head["params"], energy=head["E"], period=head["T"],
        u_min=head["u_min"], u_max=head["u_max"], t=cols[0], u=cols[1],
        u_prime=cols[2], potential=_potential(head["params"]),
        closure_error=head.get("closure_error", 0.0),
    )


def write_period_table(E, T, path, meta):
    path = Path(path)
    csv_path = _write_text(path.with_suffix(".csv"), _csv_text([E, T], ["E", "T"]))
    head = {"schema_version": SCHEMA_VERSION, "kind": "period_table"}
    head.update(meta)
    head["data"] = csv_path.name
    return [csv_path, write_json(head, path.with_suffix(".json"))]
