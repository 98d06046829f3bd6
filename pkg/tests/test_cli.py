import json
import shutil

import numpy as np
import pytest

from obstacle_duality.cli import load_config, main
from obstacle_duality.errors import ConfigError
from obstacle_duality.mesh import ScalarField, read_field_csv, write_field_csv

MEMBRANE = """\
[lagrangian]
name = power:2

[domain]
extents = -1 1
cells = 128

[obstacle]
kind = parabola
height = 0.5

[boundary]
kind = zero

[ladder]
k_list = 2 4 8

[sweep]
cells = 32 64 128
"""


def _write(tmp_path, text=MEMBRANE, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _run(*args):
    return main([*args, "--quiet"])


@pytest.fixture
def solved(tmp_path):
    cfg = _write(tmp_path)
    out = tmp_path / "out"
    assert _run("solve", "--config", cfg, "--out", str(out)) == 0
    return cfg, out


def test_solve_writes_report(solved):
    _, out = solved
    rep = json.loads((out / "report.json").read_text())
    for key in ("instance", "primal", "dual", "gap", "iterations", "certificates", "versions"):
        assert key in rep
    assert abs(rep["gap"]) <= 1e-6 * rep["primal"]
    assert all(c["passed"] for c in rep["certificates"].values())
    for name in ("u", "sigma", "weights"):
        assert (out / f"{name}.csv").exists()


def test_reports_are_deterministic(solved, tmp_path):
    cfg, out = solved
    again = tmp_path / "again"
    assert _run("solve", "--config", cfg, "--out", str(again)) == 0
    strip = lambda p: {k: v for k, v in json.loads(p.read_text()).items() if k != "timestamp"}
    assert strip(out / "report.json") == strip(again / "report.json")
    for name in ("u.csv", "sigma.csv", "weights.csv"):
        assert (out / name).read_bytes() == (again / name).read_bytes()


def test_verify_round_trip(solved):
    cfg, out = solved
    assert _run("verify", "--config", cfg, "--out", str(out)) == 0
    bundle = json.loads((out / "certificates.json").read_text())
    assert all(v["passed"] for v in bundle.values())


def test_verify_tampered_u(solved, tmp_path):
    cfg, out = solved
    u = read_field_csv(out / "u.csv")
    v = u.values.copy()
    v[64] -= 0.1
    write_field_csv(out / "u.csv", ScalarField(u.grid, v))
    assert _run("verify", "--config", cfg, "--out", str(out)) == 1
    bundle = json.loads((out / "certificates.json").read_text())
    assert not bundle["feasibility"]["passed"]


def test_verify_negated_sigma(solved):
    cfg, out = solved
    s = read_field_csv(out / "sigma.csv")
    write_field_csv(out / "sigma.csv", -s)
    assert _run("verify", "--config", cfg, "--out", str(out)) == 1
    bundle = json.loads((out / "certificates.json").read_text())
    assert not bundle["div_nonpositive"]["passed"]


def test_verify_missing_files(tmp_path):
    cfg = _write(tmp_path)
    assert _run("verify", "--config", cfg, "--out", str(tmp_path / "empty")) == 2


def test_empty_admissible_set(tmp_path):
    cfg = _write(tmp_path, MEMBRANE.replace("height = 0.5", "height = 1.5"))
    assert _run("solve", "--config", cfg, "--out", str(tmp_path / "o")) == 2


def test_max_iter_exit_code(tmp_path):
    cfg = _write(tmp_path, MEMBRANE + "\n[solver]\nmax_iter = 1\n")
    out = tmp_path / "o"
    assert _run("solve", "--config", cfg, "--out", str(out)) == 3
    rep = json.loads((out / "report.json").read_text())
    assert rep["converged"] is False


def test_config_errors_carry_line_numbers(tmp_path):
    bad = MEMBRANE.replace("cells = 128", "cells = lots")
    with pytest.raises(ConfigError, match="line 6"):
        load_config(_write(tmp_path, bad))
    with pytest.raises(ConfigError, match="line 8"):
        load_config(_write(tmp_path, MEMBRANE.replace("[obstacle]", "[obstacles]")))
    assert _run("solve", "--config", _write(tmp_path, bad), "--out", str(tmp_path)) == 2
    assert _run("solve", "--config", str(tmp_path / "nope.ini")) == 2


def test_unknown_obstacle_kind(tmp_path):
    cfg = _write(tmp_path, MEMBRANE.replace("kind = parabola", "kind = sphere"))
    assert _run("solve", "--config", cfg, "--out", str(tmp_path / "o")) == 2


def test_table_obstacle_and_affine_boundary(tmp_path, solved):
    _, out = solved
    text = MEMBRANE.replace("kind = parabola\nheight = 0.5", f"kind = table\npath = {out / 'u.csv'}")
    text = text.replace("kind = zero", "kind = affine\na = 0\nb = 0")
    cfg = _write(tmp_path, text, "table.ini")
    assert _run("solve", "--config", cfg, "--out", str(tmp_path / "t")) == 0


def test_two_dimensional_cone(tmp_path):
    text = """\
[lagrangian]
name = power:2
[domain]
extents = 0 1 0 1
cells = 16
[obstacle]
kind = cone
height = 0.3
slope = 1
[boundary]
kind = zero
"""
    assert _run("solve", "--config", _write(tmp_path, text), "--out", str(tmp_path / "o")) == 0


def test_conjugate_table(tmp_path):
    cfg = _write(tmp_path)
    out = tmp_path / "c"
    assert _run("conjugate", "--config", cfg, "--out", str(out)) == 0
    data = np.loadtxt(out / "conjugate.csv", delimiter=",", skiprows=2)
    np.testing.assert_allclose(data[:, 3], data[:, 0] ** 2 / 4, atol=1e-6)


def test_ladder_tables(tmp_path):
    cfg = _write(tmp_path)
    out = tmp_path / "l"
    assert _run("ladder", "--config", cfg, "--out", str(out)) == 0
    header = json.loads((out / "ladder_k4.csv").read_text().splitlines()[0][1:])
    assert header["k"] == 4 and header["r_k"] == pytest.approx(2.0)
    summary = json.loads((out / "ladder_summary.json").read_text())
    assert all(v["passed"] for v in summary.values())


def test_ladder_cosh_summary_reports_failure(tmp_path):
    text = MEMBRANE.replace("power:2", "cosh").replace("2 4 8", "2 3 4 5 6 7 8 9 10")
    assert _run("ladder", "--config", _write(tmp_path, text), "--out", str(tmp_path / "l")) == 1
    ok = MEMBRANE.replace("power:2", "cosh\nminorant = quadratic:0.5")
    assert _run("ladder", "--config", _write(tmp_path, ok, "ok.ini"),
                "--out", str(tmp_path / "l2")) == 0


def test_sweep(tmp_path):
    cfg = _write(tmp_path)
    out = tmp_path / "s"
    assert _run("sweep", "--config", cfg, "--out", str(out)) == 0
    rows = np.loadtxt(out / "sweep_h.csv", delimiter=",", skiprows=2)
    assert np.all(np.diff(rows[:, -1]) < 0)
    ks = np.loadtxt(out / "sweep_k.csv", delimiter=",", skiprows=2)
    assert np.all(np.diff(ks[:, 1]) >= -1e-9)
