"""Certification engine tests (kept light; the heavy battery is the
acceptance suite)."""

import json
import math
from fractions import Fraction

import pytest

from darboux2d.darboux import transform_solution
from darboux2d.families import build_family, build_tanh, closed_potential
from darboux2d.harmonic import HarmonicPair, harmonic_basis
from darboux2d.polyrat import ONE, X, Y, ZERO, RatFn
from darboux2d.verify import (
    ALL_TARGETS,
    GridSpec,
    ResidualReport,
    check_eq12,
    check_new_potential_system,
    check_potential_system,
    check_schrodinger,
    fd_residual,
    run_suite,
    targets_for_family,
)

B0_PARAMS = {"p0": 1, "q0": 0, "x0": 0, "y0": 0, "C": 1}


def test_check_eq12_passes_for_harmonic():
    rep = check_eq12(RatFn.from_poly(X ** 3 - 3 * X * Y ** 2))
    assert rep.passed
    assert rep.mode == "exact"
    assert rep.detail["residual_terms"] == 0
    for info in rep.detail["residuals"]:
        assert info["terms"] == 0


def test_check_eq12_fails_for_x_squared():
    rep = check_eq12(RatFn.from_poly(X * X))
    assert not rep.passed
    first, second = rep.detail["residuals"]
    # the first expression survives as a pure x^3 multiple; the second
    # vanishes identically for this B
    assert first["terms"] == 1 and first["degree"] == 3
    assert second["terms"] == 0


def test_check_eq12_rejects_constant():
    with pytest.raises(ValueError):
        check_eq12(RatFn.from_poly(ONE))


def test_check_eq12_reciprocal_and_scaling():
    B = build_family("B0", B0_PARAMS).B
    assert check_eq12(RatFn(B.den, B.num)).passed
    assert check_eq12(Fraction(7, 3) * B).passed


def test_check_schrodinger_pass_and_fail():
    B = build_family("B0", B0_PARAMS).B
    u = closed_potential("B0", {"x0": 0, "y0": 0, "C": 1}).u
    out = transform_solution(B, harmonic_basis(1)[1])
    assert check_schrodinger(out.Y_tilde, u).passed
    bad = check_schrodinger(RatFn.from_poly(X), RatFn.from_poly(ONE))
    assert not bad.passed
    assert bad.detail["residual_terms"] > 0


def test_check_potential_system():
    good = check_potential_system((RatFn.from_poly(X), RatFn.from_poly(Y)))
    assert good.passed
    bad = check_potential_system((RatFn.from_poly(X), RatFn.from_poly(-Y)))
    assert not bad.passed


def test_check_new_potential_system_certifies_transform():
    B = build_family("B0", B0_PARAMS).B
    out = transform_solution(B, harmonic_basis(2)[2])
    assert check_new_potential_system(B, out).passed


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec((-1.0, 1.0), (-1.0, 1.0), nx=1, ny=5)
    with pytest.raises(ValueError):
        GridSpec((1.0, -1.0), (-1.0, 1.0), nx=5, ny=5)
    with pytest.raises(ValueError):
        GridSpec((-1.0, 1.0), (-1.0, 1.0), nx=5, ny=5, exclusion_radius=-0.1)
    g = GridSpec((-1.0, 1.0), (0.0, 2.0), nx=3, ny=5)
    xs, ys = g.axes()
    assert list(xs) == [-1.0, 0.0, 1.0]
    assert len(ys) == 5


def _b0_closures():
    B = build_family("B0", B0_PARAMS).B
    u = closed_potential("B0", {"x0": 0, "y0": 0, "C": 1}).u
    return (lambda x, y: u.eval_float(x, y)), (lambda x, y: B.eval_float(x, y))


def test_fd_residual_orders():
    uc, Yc = _b0_closures()
    grid = GridSpec((-2.0, 2.0), (-2.0, 2.0), nx=101, ny=101)
    rep2 = fd_residual(uc, Yc, grid, order=2, tol=1e-2)
    rep4 = fd_residual(uc, Yc, grid, order=4, tol=1e-4)
    assert rep2.passed and rep4.passed
    assert rep4.detail["max_residual"] < rep2.detail["max_residual"]
    with pytest.raises(ValueError):
        fd_residual(uc, Yc, grid, order=3)


def test_fd_residual_catches_wrong_potential():
    uc, Yc = _b0_closures()
    grid = GridSpec((-2.0, 2.0), (-2.0, 2.0), nx=101, ny=101)
    rep = fd_residual(lambda x, y: 2.0 * uc(x, y), Yc, grid, order=4, tol=1e-4)
    assert not rep.passed


def test_fd_residual_exclusions_and_nonfinite():
    B_s, u = build_tanh(1, 0)
    grid = GridSpec((-1.0, 1.0), (-1.0, 1.0), nx=41, ny=41, exclusion_radius=0.25)
    rep = fd_residual(u, B_s, grid, order=2, tol=1.0,
                      singular_points=[(0.0, 0.0)])
    assert rep.detail["skipped_points"] > 0
    with pytest.raises(ValueError):
        fd_residual(u, B_s,
                    GridSpec((-0.1, 0.1), (-0.1, 0.1), nx=7, ny=7,
                             exclusion_radius=10.0),
                    order=2, singular_points=[(0.0, 0.0)])


def test_run_suite_is_deterministic():
    targets = ["spot:potentials", "dim:b1", "eq12:counterexample"]
    a = run_suite(targets, seed=11)
    b = run_suite(targets, seed=11)
    assert json.dumps([r.to_json() for r in a], sort_keys=True) == json.dumps(
        [r.to_json() for r in b], sort_keys=True
    )
    # reports come back sorted by name
    assert [r.check_name for r in a] == sorted(targets)


def test_run_suite_rejects_unknown_target():
    with pytest.raises(ValueError):
        run_suite(["nope:never"], seed=0)


def test_targets_for_family():
    assert targets_for_family("all") == list(ALL_TARGETS)
    b2 = targets_for_family("b2")
    assert "eq12:b2" in b2 and "smooth:b2" in b2 and "potential:tsarev-2:b2" in b2
    assert all("b0" not in t for t in b2)
    tanh = targets_for_family("tanh")
    assert set(tanh) == {"tanh:fd", "tanh:ufromh"}
    with pytest.raises(ValueError):
        targets_for_family("b7")


def test_report_json_shape():
    (rep,) = run_suite(["eq12:counterexample"], seed=3)
    payload = rep.to_json()
    assert set(payload) == {
        "check", "mode", "verdict", "max_residual", "residual_terms",
        "params", "seed",
    }
    assert payload["check"] == "eq12:counterexample"
    assert payload["verdict"] == "pass"
    assert payload["seed"] == 3


def test_residual_report_passed_property():
    rep = ResidualReport(check_name="x", mode="exact", verdict="pass", detail={})
    assert rep.passed and rep.to_json()["max_residual"] is None
