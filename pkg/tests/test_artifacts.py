import json

import numpy as np
import pytest

from pseudocyl import artifacts


def test_float_format_roundtrips():
    for x in (0.1, 1 / 3, -2.7556759606310752, 1e-300):
        assert float(artifacts.fmt(x)) == x


def test_dumps_deterministic_and_valid():
    obj = {"b": [1.0, 2], "a": {"x": np.float64(0.5), "y": None, "z": float("inf")},
           "arr": np.arange(3.0), "flag": True}
    text = artifacts.dumps(obj)
    assert text == artifacts.dumps(obj)
    back = json.loads(text)
    assert back["a"]["z"] is None and back["arr"] == [0.0, 1.0, 2.0]
    assert list(back) == ["b", "a", "arr", "flag"]


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        artifacts.dumps({"x": object()})


@pytest.mark.parametrize("fmt_", ["csv", "json"])
def test_orbit_roundtrip(tmp_path, orbit_4_6, fmt_):
    files = artifacts.write_orbit(orbit_4_6, tmp_path / "orb", fmt_)
    assert all(f.exists() for f in files)
    back = artifacts.read_orbit(files[-1])
    assert back.params == {"n": 4}
    assert back.energy == orbit_4_6.energy and back.period == orbit_4_6.period
    assert np.array_equal(back.u, orbit_4_6.u)
    assert np.array_equal(back.u_prime, orbit_4_6.u_prime)
    assert back.factor(1.234) == orbit_4_6.factor(1.234)


def test_derdzinski_orbit_roundtrip(tmp_path, d_orbit):
    files = artifacts.write_orbit(d_orbit, tmp_path / "d")
    back = artifacts.read_orbit(files[0])
    assert back.params == d_orbit.params
    assert back.potential == d_orbit.potential


def test_missing_and_malformed(tmp_path):
    with pytest.raises(artifacts.ArtifactError):
        artifacts.read_orbit(tmp_path / "nothing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(artifacts.ArtifactError):
        artifacts.read_json(bad)
    other = tmp_path / "other.json"
    other.write_text('{"kind": "period_table"}')
    with pytest.raises(artifacts.ArtifactError):
        artifacts.read_orbit(other)


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(artifacts.OUTPUT_DIR_ENV, str(tmp_path))
    assert artifacts.resolve_output("x/y.json") == tmp_path / "x" / "y.json"
    assert artifacts.resolve_output("/abs/y.json").is_absolute()


def test_period_table(tmp_path):
    files = artifacts.write_period_table([-0.1, -0.05], [4.6, 5.0], tmp_path / "pt", {"n": 4})
    assert files[0].read_text().splitlines()[0] == "E,T"
    assert artifacts.read_json(files[1])["data"] == "pt.csv"
