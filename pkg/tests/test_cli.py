import json
import subprocess
import sys

import numpy as np
import pytest

from opuc_lab.cli import main


def write(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# opuc-lab v0.1.0 schema=")
    return np.loadtxt(lines[2:], delimiter=",", ndmin=2)


TRIG = {"kind": "trig", "params": {"cos": [1.25, 0.25]}, "bounds": {"lower": 1, "upper": 1.5}}


# --- construct -------------------------------------------------------------------------


def test_construct_writes_three_files(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["construct", "--regime", "small", "--eps", "0.5", "--n", "64", "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["construction-report.json", "poly.csv", "weight.csv"]
    report = json.loads((out / "construction-report.json").read_text())
    assert report["consistency"] < 1e-6
    assert read_csv(out / "poly.csv").shape == (129, 3)
    w = read_csv(out / "weight.csv")
    assert w.shape[1] == 3 and np.all(w[:, 2] >= 1)
    assert "value_at_one=" in capsys.readouterr().out


def test_construct_odd_n(tmp_path):
    assert main(["construct", "--regime", "small", "--eps", "0.5", "--n", "63", "--out", str(tmp_path)]) == 2


def test_construct_missing_parameter(tmp_path):
    assert main(["construct", "--regime", "large", "--n", "64", "--out", str(tmp_path)]) == 2
    assert main(["construct", "--regime", "medium", "--n", "64"]) == 2


def test_construct_large_grows(tmp_path):
    vals = []
    for n in (64, 128):
        out = tmp_path / str(n)
        assert main(["construct", "--regime", "large", "--alpha", "0.8", "--n", str(n), "--out", str(out)]) == 0
        vals.append(json.loads((out / "construction-report.json").read_text())["value_at_one"])
    assert vals[1] > vals[0]


def test_grid_override(tmp_path, monkeypatch):
    monkeypatch.setenv("OPUC_GRID_N", "8192")
    out = tmp_path / "g"
    assert main(["construct", "--regime", "small", "--eps", "0.5", "--n", "16", "--out", str(out)]) == 0
    assert json.loads((out / "construction-report.json").read_text())["grid_N"] == 8192
    monkeypatch.setenv("OPUC_GRID_N", "1000")
    assert main(["construct", "--regime", "small", "--eps", "0.5", "--n", "16", "--out", str(out)]) == 2


# --- opuc ---------------------------------------------------------------------------------


def test_constant_weight_has_zero_coefficients(tmp_path):
    spec = write(tmp_path / "c.json", {"kind": "constant", "params": {"value": 2.0}})
    assert main(["opuc", "--weight", spec, "--n", "12", "--out", str(tmp_path / "o")]) == 0
    gamma = read_csv(tmp_path / "o" / "gamma.csv")
    assert gamma.shape == (12, 3) and np.max(np.abs(gamma[:, 1:])) < 1e-14
    lam = read_csv(tmp_path / "o" / "szego.csv")
    np.testing.assert_allclose(lam[0], [np.sqrt(4 * np.pi)] * 2, rtol=1e-12)


def test_methods_agree(tmp_path):
    spec = write(tmp_path / "t.json", TRIG)
    for method in ("recursion", "fixed-point"):
        assert main(["opuc", "--weight", spec, "--n", "32", "--method", method, "--out", str(tmp_path / method)]) == 0
    a = read_csv(tmp_path / "recursion" / "poly.csv")
    b = read_csv(tmp_path / "fixed-point" / "poly.csv")
    assert np.max(np.abs(a - b)) < 1e-8


def test_fixed_point_needs_bounds(tmp_path):
    spec = write(tmp_path / "t.json", {"kind": "trig", "params": {"cos": [1.25, 0.25]}})
    assert main(["opuc", "--weight", spec, "--n", "8", "--method", "fixed-point", "--out", str(tmp_path)]) == 2


def test_declared_bounds_enforced(tmp_path):
    spec = write(tmp_path / "t.json", {**TRIG, "bounds": {"lower": 1, "upper": 1.2}})
    assert main(["opuc", "--weight", spec, "--n", "8", "--out", str(tmp_path)]) == 2


def test_missing_weight_file(tmp_path):
    assert main(["opuc", "--weight", str(tmp_path / "nope.json"), "--n", "4"]) == 2


@pytest.mark.parametrize("doc", [
    {"kind": "constant", "params": {"value": 1, "eps": 2}},
    {"kind": "constant", "params": {"value": 1}, "extra": True},
    {"kind": "small-deviation", "params": {"epsilon": 0.5, "n": 16}},
    {"kind": "constant", "params": {"value": 1}, "grid": {"N": 1000}},
    {"kind": "banana", "params": {}},
])
def test_invalid_weight_specs(tmp_path, doc):
    assert main(["opuc", "--weight", write(tmp_path / "w.json", doc), "--n", "4", "--out", str(tmp_path)]) == 2


def test_malformed_json(tmp_path):
    p = tmp_path / "w.json"
    p.write_text("{not json", encoding="utf-8")
    assert main(["opuc", "--weight", str(p), "--n", "4"]) == 2


def test_degenerate_measure_exit_three(tmp_path):
    values = [0.0] * 16
    values[3] = 1.0
    spec = write(tmp_path / "s.json", {"kind": "samples", "params": {"values": values}})
    assert main(["opuc", "--weight", spec, "--n", "4", "--out", str(tmp_path)]) == 3


@pytest.mark.parametrize("doc", [
    {"kind": "small-deviation", "params": {"eps": 0.5, "n": 16}, "normalize": "probability"},
    {"kind": "large-deviation", "params": {"alpha": 0.8, "n": 16}, "grid": {"N": 8192}},
    {"kind": "clipped", "params": {"regime": "small", "param": 0.5, "n": 16}},
    {"kind": "piecewise-arcs", "params": {"regime": "small", "param": 0.5, "arcs": [[0, 1]], "degrees": [16]}},
    {"kind": "samples", "params": {"values": [1, 2] * 8}, "normalize": "mass-2pi"},
])
def test_weight_kinds(tmp_path, doc):
    out = tmp_path / "o"
    assert main(["opuc", "--weight", write(tmp_path / "w.json", doc), "--n", "3", "--out", str(out)]) == 0
    assert read_csv(out / "poly.csv").shape == (4, 3)


# --- suite ----------------------------------------------------------------------------------


def test_growth_suite_default(tmp_path):
    out = tmp_path / "g"
    assert main(["suite", "--name", "growth", "--config", "default", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["ok"] and summary["seed"]
    assert {c["name"]: c["status"] for c in summary["checks"]}["slope_in_band"] == "PASS"
    assert (out / "growth-small.svg").read_text().startswith("<svg")


def test_localization_suite_cli(tmp_path):
    out = tmp_path / "l"
    assert main(["suite", "--name", "localization", "--out", str(out)]) == 0
    rows = (out / "localization.csv").read_text().splitlines()[2:]
    assert rows and all(",true," in r for r in rows)


def test_unknown_suite(tmp_path):
    assert main(["suite", "--name", "bogus", "--out", str(tmp_path)]) == 2


def test_suite_config_errors(tmp_path):
    bad = write(tmp_path / "c.json", {"n_list": [8], "typo": 1})
    assert main(["suite", "--name", "szego", "--config", bad, "--out", str(tmp_path)]) == 2
    assert main(["suite", "--name", "szego", "--config", str(tmp_path / "missing.json")]) == 2


def test_failed_assertion_exit_one(tmp_path):
    cfg = write(tmp_path / "c.json", {"n_list": [8, 16, 32, 64], "band": [0.9, 1.0]})
    assert main(["suite", "--name", "growth", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    summary = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert not summary["ok"]


def test_envelope_svg(tmp_path):
    cfg = write(tmp_path / "c.json", {"t_list": [1.5]})
    assert main(["suite", "--name", "envelope", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "envelope.svg").exists()


def test_suite_outputs_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert main(["suite", "--name", "szego", "--out", str(tmp_path / d)]) == 0
    for name in ("szego.csv", "summary.json"):
        a = (tmp_path / "a" / name).read_bytes()
        assert a == (tmp_path / "b" / name).read_bytes()
        assert b"\r\n" not in a


def test_console_entry_points(tmp_path):
    r = subprocess.run([sys.executable, "-m", "opuc_lab", "suite", "--name", "bogus"], capture_output=True, text=True)
    assert r.returncode == 2 and "unknown suite" in r.stderr
    r = subprocess.run(["opuc-lab", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "construct" in r.stdout
