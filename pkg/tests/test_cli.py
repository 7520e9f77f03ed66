import json
import math
from pathlib import Path

import pytest

from fkdv.cli import main
from fkdv.reproduce import reference_values, reproduce


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tophat_critical_alphas(capsys):
    code, out, _ = run_cli(capsys, "--json", "tophat", "--critical-alphas", "1..3")
    assert code == 0
    doc = json.loads(out)
    assert doc["critical_alphas"]["1"] == pytest.approx(567.218, abs=1e-2)
    assert doc["critical_alphas"]["2"] == pytest.approx(16 * 567.218, abs=0.2)


def test_tophat_profile_emit(tmp_path, capsys):
    out_csv = tmp_path / "profile.csv"
    code, out, _ = run_cli(capsys, "--json", "tophat", "--alpha", "6205",
                           "--branch", "1", "--emit", str(out_csv))
    assert code == 0
    doc = json.loads(out)
    assert doc["u0"] == pytest.approx(156.687, abs=1e-2)
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "x,u"
    assert len(lines) > 1000
    assert (tmp_path / "tophat.manifest.json").exists()


def test_shoot_command(tmp_path, capsys):
    traj = tmp_path / "traj.csv"
    code, out, _ = run_cli(capsys, "--json", "shoot", "--forcing", "gaussian",
                           "--alpha", "36", "--u0-bracket", "8.54,8.55",
                           "--emit", str(traj))
    assert code == 0
    doc = json.loads(out)
    assert 8.5452 <= doc["u0"] <= 8.5457
    header = traj.read_text().splitlines()[0]
    assert header == "x,u,du"


def test_validation_exit_code(capsys):
    code, _, err = run_cli(capsys, "shoot", "--forcing", "nosuch",
                           "--alpha", "36", "--u0-bracket", "1,2")
    assert code == 2
    assert "tokens" in err


def test_numerical_failure_exit_code(capsys):
    # same-sign bracket: numerical failure, exit 3
    code, _, err = run_cli(capsys, "shoot", "--forcing", "gaussian",
                           "--alpha", "36", "--u0-bracket", "2.0,3.0")
    assert code == 3
    assert "classify identically" in err


def test_contour_command_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "grid1.csv"
    out2 = tmp_path / "grid2.csv"
    for out in (out1, out2):
        code, _, _ = run_cli(capsys, "--json", "--seedless", "contour",
                             "--forcing", "hybrid:a=0.7",
                             "--alpha", "8:14:6", "--u0", "2:5:7",
                             "--out", str(out))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "alpha,u0,x0"


def test_contour_threads_determinism(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_cli(capsys, "--threads", "1", "contour", "--forcing", "gaussian",
            "--alpha", "30:40:5", "--u0", "2:10:6", "--out", str(a))
    run_cli(capsys, "--threads", "4", "contour", "--forcing", "gaussian",
            "--alpha", "30:40:5", "--u0", "2:10:6", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_asym_series_command(capsys):
    code, out, _ = run_cli(capsys, "--json", "asym", "series", "--alpha", "1e6",
                           "--x", "0", "--truncation", "optimal")
    assert code == 0
    doc = json.loads(out)
    assert doc["u"] == pytest.approx(-999.5019, abs=1e-3)


def test_asym_glue_command(capsys):
    code, out, _ = run_cli(capsys, "--json", "asym", "glue", "--forcing",
                           "gaussian", "--alpha", "1e8", "--homoclinics", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["u0_prediction"] == pytest.approx(19963.16, abs=0.01)
    assert doc["Y"][0] == pytest.approx(7.5733, abs=1e-3)


def test_stokes_command(tmp_path, capsys):
    out = tmp_path / "lines.csv"
    code, text, _ = run_cli(capsys, "--json", "stokes", "--m", "-1",
                            "--out", str(out))
    assert code == 0
    doc = json.loads(text)
    assert doc["lines"] == 2
    assert out.read_text().splitlines()[0] == "line_id,re_z,im_z,re_sigma"


def test_trace_and_terminate_roundtrip(tmp_path, capsys):
    branch_file = tmp_path / "branch.json"
    code, out, _ = run_cli(capsys, "--json", "trace", "--forcing", "gaussian",
                           "--seed-alpha", "36", "--seed-u0", "8.5454",
                           "--alpha-step", "-0.05", "--max-points", "40",
                           "--out", str(branch_file))
    assert code == 0
    doc = json.loads(out)
    assert doc["points"] >= 30
    code, out, _ = run_cli(capsys, "--json", "terminate", "--forcing",
                           "gaussian", "--branch-file", str(branch_file))
    assert code == 0
    doc = json.loads(out)
    assert doc["alpha_star"] == pytest.approx(35.363, abs=0.03)
    assert doc["kappa"] > 0.0
    saved = json.loads(branch_file.read_text())
    assert saved["termination"]["alpha_star"] == pytest.approx(
        doc["alpha_star"], rel=1e-12)


def test_reproduce_fig2_and_manifest(tmp_path):
    manifest = reproduce("fig2", tmp_path)
    assert any(name.endswith("fig2_a.csv") for name in manifest.outputs)
    assert (tmp_path / "fig2.svg").exists()
    svg = (tmp_path / "fig2.svg").read_text()
    assert svg.startswith("<svg")
    mdoc = json.loads((tmp_path / "fig2.manifest.json").read_text())
    assert mdoc["config"]["alpha"] == 36.0
    assert mdoc["wall_time_s"] >= 0.0


def test_reproduce_table1_deterministic(tmp_path):
    d1 = tmp_path / "r1"
    d2 = tmp_path / "r2"
    reproduce("table1", d1)
    reproduce("table1", d2)
    assert (d1 / "table1.csv").read_bytes() == (d2 / "table1.csv").read_bytes()
    header = (d1 / "table1.csv").read_text().splitlines()[0]
    assert header == ("case,alpha,u0_numeric,u0_asymptotic,delta_u,"
                      "Y_H,Y1,delta_Y")


def test_manifest_knob_sensitivity(tmp_path, capsys):
    """Every knob echoed in the manifest changes the output when mutated."""
    base = tmp_path / "base.csv"
    run_cli(capsys, "shoot", "--forcing", "gaussian", "--alpha", "36",
            "--u0-bracket", "8.54,8.55", "--emit", str(base))
    manifest = json.loads((tmp_path / "shoot.manifest.json").read_text())
    cfg = manifest["config"]
    assert {"forcing", "alpha", "bracket", "step_h", "x_max", "x_far",
            "blowup_threshold", "bisect_tol"} <= set(cfg)
    other = tmp_path / "other.csv"
    run_cli(capsys, "shoot", "--forcing", "gaussian", "--alpha", "36",
            "--u0-bracket", "8.54,8.55", "--step-h", "0.0005",
            "--emit", str(other))
    assert base.read_bytes() != other.read_bytes()


def test_reference_values_load():
    ref = reference_values()
    assert len(ref["table1"]) == 10
    assert ref["marginal_termination_alpha"] == 19.9
