"""Transform core tests."""

import math
from fractions import Fraction

import pytest

from darboux2d.darboux import (
    Field2,
    R_coeffs,
    apply_LD,
    neg_log_field,
    potential_from_B,
    transform_solution,
    u_from_h,
)
from darboux2d.families import build_family, closed_potential
from darboux2d.harmonic import HarmonicPair, harmonic_basis
from darboux2d.polyrat import ONE, X, Y, ZERO, RatFn, laplacian_ratfn, ratfn_arith


@pytest.fixture()
def b0():
    return build_family("B0", {"p0": 1, "q0": 0, "x0": 0, "y0": 0, "C": 1}).B


def test_R_coeffs_harmonic_example():
    B = RatFn.from_poly(X ** 2 - Y ** 2)
    R1, R2 = R_coeffs(B)
    r2 = X ** 2 + Y ** 2
    assert (R1 - RatFn(-Y, r2)).is_zero()
    assert (R2 - RatFn(X, r2)).is_zero()


def test_R_coeffs_rejects_constant():
    with pytest.raises(ValueError):
        R_coeffs(RatFn.from_poly(ONE))


def test_potential_from_B_b0(b0):
    u = potential_from_B(b0)
    u_closed = closed_potential("B0", {"x0": 0, "y0": 0, "C": 1}).u
    assert (u - u_closed).is_zero()
    with pytest.raises(ValueError):
        potential_from_B(RatFn.from_poly(ZERO))


def test_transform_const_seed_gives_R2(b0):
    out = transform_solution(b0, HarmonicPair(Y=ZERO, Q=ONE))
    _, R2 = R_coeffs(b0)
    assert (out.Y_tilde - R2).is_zero()


def test_transform_satisfies_new_equation(b0):
    u = potential_from_B(b0)
    for pair in harmonic_basis(3):
        out = transform_solution(b0, pair)
        residual = ratfn_arith(laplacian_ratfn(out.Y_tilde),
                               ratfn_arith(u, out.Y_tilde, "mul"), "sub")
        assert residual.is_zero()
        assert (out.W_tilde - b0 * out.Y_tilde).is_zero()


def test_apply_LD_first_component_is_W(b0):
    pair = harmonic_basis(2)[2]
    first, second = apply_LD(b0, (RatFn.from_poly(pair.Y), RatFn.from_poly(pair.Q)))
    out = transform_solution(b0, pair)
    assert (first - out.W_tilde).is_zero()
    assert (second - out.Q_tilde).is_zero()


def test_neg_log_field_bridge(b0):
    u = potential_from_B(b0)
    u_num = u_from_h(neg_log_field(b0))
    for x, y in ((1.0, 2.0), (0.5, 0.5), (2.0, -1.0)):
        # points chosen with B > 0 so h = -ln B exists there
        assert u_num(x, y) == pytest.approx(u.eval_float(x, y), abs=1e-10)


def test_neg_log_field_not_finite_at_zero_of_B(b0):
    u_num = u_from_h(neg_log_field(b0))
    # B_0 vanishes on the y-axis
    assert not math.isfinite(u_num(0.0, 1.0))


def test_u_from_h_with_plain_closures():
    # h = x^2 + y^2: u = -4 + 4(x^2 + y^2)
    h = Field2(
        fx=lambda x, y: 2 * x,
        fy=lambda x, y: 2 * y,
        fxx=lambda x, y: 2.0,
        fyy=lambda x, y: 2.0,
    )
    u = u_from_h(h)
    assert u(1.0, 2.0) == pytest.approx(-4.0 + 4.0 * 5.0)
    assert h.f is None
