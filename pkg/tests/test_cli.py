import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from equipart.cli import run
from equipart.measures import load_measure


def gen(tmp_path, name, *args):
    out = tmp_path / name
    assert run(["gen", *args, "--out", str(out)]) == 0
    return out


def test_gen_kinds(tmp_path):
    for kind in ("cloud", "mixture", "disk", "ball", "two-disk"):
        mu = load_measure(gen(tmp_path, f"{kind}.json", kind, "--points", "30", "--bandwidth", "0.1"))
        assert mu.bandwidth == 0.1
    sym = load_measure(gen(tmp_path, "sym.json", "symmetric", "--dim", "4", "--points", "3", "--rotations", "12"))
    assert len(sym) == 36 and sym.dim == 4


def test_gen_is_seeded(tmp_path):
    a = gen(tmp_path, "a.json", "mixture", "--seed", "4")
    b = gen(tmp_path, "b.json", "mixture", "--seed", "4")
    c = gen(tmp_path, "c.json", "mixture", "--seed", "5")
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_gen_upper_bound_writes_one_file_per_ball(tmp_path):
    assert run(["gen", "upper-bound", "--m", "3", "--dim", "4", "--out", str(tmp_path / "ub")]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ub_1.json", "ub_2.json", "ub_3.json"]


def test_fan_on_symmetric_cloud(tmp_path, capsys):
    m = gen(tmp_path, "sym.json", "symmetric", "--points", "5")
    capsys.readouterr()
    assert run(["fan", "--q", "3", "--k", "1", str(m)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["defect"] == 0.0 and report["format_version"] == 1


def test_solve_then_verify_round_trip(tmp_path, capsys):
    m1 = gen(tmp_path, "m1.json", "cloud", "--seed", "1", "--bandwidth", "0.1", "--points", "80")
    m2 = gen(tmp_path, "m2.json", "mixture", "--seed", "2", "--bandwidth", "0.1", "--points", "80")
    rep, svg = tmp_path / "r.json", tmp_path / "r.svg"
    assert run(["bisect", str(m1), str(m2), "--out", str(rep), "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    capsys.readouterr()
    assert run(["verify", str(rep), str(m1), str(m2)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["agrees"] and out["difference"] <= 1e-12


@pytest.mark.parametrize("cmd", [["fourfan", "--k", "1"], ["fan", "--q", "3"]])
def test_planar_solvers_write_svg(tmp_path, cmd):
    m = gen(tmp_path, "m.json", "cloud", "--bandwidth", "0.1", "--points", "50")
    svg = tmp_path / "p.svg"
    assert run([*cmd, str(m), "--out", str(tmp_path / "r.json"), "--svg", str(svg)]) == 0
    assert svg.read_text().count("<line") >= 3


def test_sectors2q(tmp_path):
    m = gen(tmp_path, "m.json", "cloud", "--dim", "4", "--bandwidth", "0.1", "--points", "60")
    rep = tmp_path / "r.json"
    assert run(["sectors2q", str(m), "--q", "3", "--out", str(rep)]) == 0
    assert len(json.loads(rep.read_text())["masses"][0][0]) == 6


def test_scan_csv_row_count(tmp_path, capsys):
    m = gen(tmp_path, "td.json", "two-disk", "--points", "50")
    capsys.readouterr()
    out = tmp_path / "out.csv"
    assert run(["scan", "--q", "5", str(m), "--box", "-12", "12", "-12", "12",
                "--center-steps", "5", "--angle-steps", "6", "--csv", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    rows = list(csv.reader(out.open()))
    assert len(rows) - 1 == 5 * 5 * 6 == summary["cells"]


def test_line_scan_needs_two_measures(tmp_path):
    m = gen(tmp_path, "m.json", "cloud")
    assert run(["scan", str(m)]) == 1


def test_bound_violation_names_bound(tmp_path, capsys):
    m1, m2 = gen(tmp_path, "a.json", "cloud", "--dim", "4"), gen(tmp_path, "b.json", "cloud", "--dim", "4")
    assert run(["bisect", str(m1), str(m2), "--k", "4"]) == 1
    assert "ball-separation upper bound" in capsys.readouterr().err


def test_no_convergence_exit_code_writes_report(tmp_path):
    m1 = gen(tmp_path, "a.json", "cloud", "--seed", "1", "--bandwidth", "0.1")
    m2 = gen(tmp_path, "b.json", "cloud", "--seed", "2", "--bandwidth", "0.1")
    rep = tmp_path / "r.json"
    code = run(["bisect", str(m1), str(m2), "--restarts", "1", "--max-iters", "1", "--tol", "1e-300",
                "--out", str(rep)])
    assert code == 2
    assert json.loads(rep.read_text())["diagnostics"]["converged"] is False


@pytest.mark.parametrize("argv", [[], ["bogus"], ["fan", "x.json"], ["bisect", "--k", "0", "x.json"],
                                  ["gen", "disk", "--dim", "3", "--out", "x.json"],
                                  ["gen", "symmetric", "--dim", "3", "--out", "x.json"],
                                  ["gen", "cloud", "--bandwidth", "-1", "--out", "x.json"]])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 1


def test_bad_measure_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "points": [[0, 0], [1]]}))
    assert run(["fan", "--q", "3", str(bad)]) == 1
    assert "points[1]" in capsys.readouterr().err


def test_verify_detects_mismatch(tmp_path, capsys):
    m = gen(tmp_path, "m.json", "cloud", "--bandwidth", "0.1", "--points", "40")
    other = gen(tmp_path, "o.json", "cloud", "--bandwidth", "0.1", "--points", "40", "--seed", "9")
    rep = tmp_path / "r.json"
    assert run(["fourfan", str(m), "--out", str(rep)]) == 0
    assert run(["verify", str(rep), str(other)]) == 1


def test_threaded_runs_are_reproducible(tmp_path):
    m = gen(tmp_path, "m.json", "cloud", "--dim", "4", "--bandwidth", "0.1", "--points", "60")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run(["fan", "--q", "3", str(m), "--threads", "2", "--seed", "3", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point(tmp_path):
    argv = [sys.executable, "-m", "equipart.cli", "gen", "cloud", "--out", str(tmp_path / "m.json")]
    proc = subprocess.run(argv, capture_output=True, text=True)
    assert proc.returncode == 0
    assert np.asarray(load_measure(tmp_path / "m.json").points).shape == (200, 2)
