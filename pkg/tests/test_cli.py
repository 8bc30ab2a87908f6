"""CLI tests driven through main() plus one console-script smoke test."""

import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from darboux2d.cli import main
from darboux2d.darboux import R_coeffs
from darboux2d.families import build_family
from darboux2d.polyrat import ratfn_eval, ratfn_to_str


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_b0_example(capsys):
    code, out, _ = run_cli(
        capsys, "build", "--family", "b0",
        "--params", '{"p0":"1","q0":"0","x0":"0","y0":"0","C":"1"}',
    )
    assert code == 0
    assert "B = (x)/(x^2 + y^2 + 1)" in out
    assert "u = (-8)/(x^4 + 2*x^2*y^2 + y^4 + 2*x^2 + 2*y^2 + 1)" in out


def test_build_tanh_formula(capsys):
    code, out, _ = run_cli(capsys, "build", "--family", "tanh",
                           "--params", '{"C1":"1","C2":"0"}')
    assert code == 0
    assert "tanh((x*y - 0)/1)" in out
    assert "cosh" in out


def test_build_json_format(capsys):
    code, out, _ = run_cli(capsys, "build", "--family", "b3", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["family"] == "b3"
    assert set(payload["constants"]) == {"m1", "m2", "m3", "m4"}


def test_build_coincident_poles_exits_2(capsys):
    code, _, err = run_cli(
        capsys, "build", "--family", "b1",
        "--params", '{"x0":"1","y0":"2","x1":"1","y1":"2"}',
    )
    assert code == 2
    assert json.loads(err.strip())["error"] == "invalid-params"


def test_build_unknown_family_exits_2(capsys):
    code, _, err = run_cli(capsys, "build", "--family", "b9")
    assert code == 2
    assert "error" in json.loads(err.strip())


def test_build_rejects_float_rational_param(capsys):
    code, _, err = run_cli(capsys, "build", "--family", "b0",
                           "--params", '{"C": 0.5}')
    assert code == 2
    assert json.loads(err.strip())["error"] == "invalid-params"


def test_transform_const_seed_is_R2(capsys):
    code, out, _ = run_cli(capsys, "transform", "--family", "b0",
                           "--seed-kind", "const")
    assert code == 0
    B = build_family("B0", {"p0": 1, "q0": 0, "x0": 0, "y0": 0, "C": 1}).B
    _, R2 = R_coeffs(B)
    assert f"Y_tilde = {ratfn_to_str(R2)}" in out
    assert "schrodinger: pass" in out


def test_transform_re_degree_2(capsys):
    code, out, _ = run_cli(capsys, "transform", "--family", "b1",
                           "--seed-kind", "re", "--degree", "2",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schrodinger"] == "pass"
    assert payload["degree"] == 2


def test_transform_im_seed(capsys):
    code, out, _ = run_cli(capsys, "transform", "--family", "b0",
                           "--seed-kind", "im", "--degree", "1")
    assert code == 0
    assert "schrodinger: pass" in out


def test_transform_negative_degree_exits_2(capsys):
    code, _, err = run_cli(capsys, "transform", "--family", "b0",
                           "--seed-kind", "re", "--degree", "-1")
    assert code == 2
    assert json.loads(err.strip())["error"] == "invalid-params"


def test_transform_tanh_exits_2(capsys):
    code, _, err = run_cli(capsys, "transform", "--family", "tanh")
    assert code == 2


def test_grid_center_value(capsys):
    code, out, err = run_cli(capsys, "grid", "--family", "b0",
                             "--x", "-2:2:5", "--y", "0:0:1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 6
    center = lines[3].split(",")
    assert float(center[0]) == 0.0 and float(center[2]) == -8.0
    summary = json.loads(err.strip().splitlines()[-1])
    assert summary == {"points": 5, "nonfinite": 0}


def test_grid_tsarev1_single_point(capsys):
    code, out, _ = run_cli(capsys, "grid", "--family", "tsarev-1",
                           "--x", "0:0:1", "--y", "0:0:1")
    assert code == 0
    value = float(out.strip().splitlines()[1].split(",")[2])
    assert value == -0.2


def test_grid_round_trip_matches_exact_eval(capsys):
    code, out, _ = run_cli(capsys, "grid", "--family", "b1",
                           "--x", "-1:1:7", "--y", "-1:1:5")
    assert code == 0
    from darboux2d.families import PRESETS, closed_potential
    params = PRESETS["tsarev-1"].params
    u = closed_potential(
        "B1", {k: params[k] for k in ("x0", "y0", "x1", "y1", "C")}
    ).u
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 35
    for row in rows:
        xs, ys, vs = row.split(",")
        x, y, v = float(xs), float(ys), float(vs)
        exact = ratfn_eval(u, (Fraction(x), Fraction(y)))
        assert v == float(exact)  # bit-for-bit round trip


def test_grid_y_outer_loop_order(capsys):
    code, out, _ = run_cli(capsys, "grid", "--family", "b0",
                           "--x", "0:1:2", "--y", "0:1:2")
    rows = [r.split(",")[:2] for r in out.strip().splitlines()[1:]]
    assert rows == [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]


def test_grid_single_point_needs_equal_bounds(capsys):
    code, _, err = run_cli(capsys, "grid", "--family", "b0",
                           "--x", "-2:2:1", "--y", "0:0:1")
    assert code == 2
    assert json.loads(err.strip())["error"] == "invalid-grid"


def test_grid_malformed_axis(capsys):
    code, _, err = run_cli(capsys, "grid", "--family", "b0",
                           "--x", "1:2", "--y", "0:0:1")
    assert code == 2


def test_grid_rejects_nonpositive_C(capsys):
    code, _, err = run_cli(capsys, "grid", "--family", "b0",
                           "--params", '{"C":"0"}',
                           "--x", "-1:1:3", "--y", "-1:1:3")
    assert code == 2
    assert json.loads(err.strip())["error"] == "invalid-params"


def test_grid_nonfinite_values_become_nulls(capsys):
    # the squared coordinate overflows to inf, and inf * sech^2 -> nan
    code, out, err = run_cli(capsys, "grid", "--family", "tanh",
                             "--x", "0:1e200:2", "--y", "0:0:1",
                             "--format", "json")
    assert code == 0
    triples = json.loads(out)
    assert len(triples) == 2
    assert triples[0][2] is not None
    assert triples[1][2] is None
    summary = json.loads(err.strip().splitlines()[-1])
    assert summary == {"points": 2, "nonfinite": 1}


def test_grid_csv_nonfinite_empty_field(capsys):
    code, out, _ = run_cli(capsys, "grid", "--family", "tanh",
                           "--x", "1e200:1e200:1", "--y", "0:0:1")
    assert code == 0
    assert out.strip().splitlines()[1] == "9.9999999999999997e+199,0,"


def test_verify_single_target(capsys):
    code, out, _ = run_cli(capsys, "verify", "--targets", "spot:potentials",
                           "--seed", "7")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 1
    assert reports[0]["check"] == "spot:potentials"
    assert reports[0]["verdict"] == "pass"


def test_verify_unknown_target_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--targets", "nope")
    assert code == 2


def test_verify_unknown_family_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--family", "b9")
    assert code == 2


def test_verify_cap_overflow_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("DARBOUX_EXP_CAP", "8")
    code, _, err = run_cli(capsys, "verify", "--targets", "eq12:harmonic")
    assert code == 2
    assert json.loads(err.strip())["error"] == "exponent-cap-exceeded"


def test_verify_deterministic_output(capsys, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["verify", "--targets", "dim:b1,dim:b2", "--seed", "7",
                 "--out", str(out1)]) == 0
    assert main(["verify", "--targets", "dim:b1,dim:b2", "--seed", "7",
                 "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_out_writes_file(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    code, _, _ = run_cli(capsys, "grid", "--family", "b0",
                         "--x", "0:1:2", "--y", "0:0:1", "--out", str(path))
    assert code == 0
    assert path.read_text().startswith("x,y,value\n")


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "darboux2d.cli", "build", "--family", "b0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "B = " in proc.stdout


def test_usage_error_exits_2(capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    capsys.readouterr()
