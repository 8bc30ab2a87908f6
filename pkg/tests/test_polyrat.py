"""Exact polynomial / rational-function kernel tests."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from darboux2d.polyrat import (
    ONE,
    X,
    Y,
    ZERO,
    BiPoly,
    ExponentCapError,
    PoleEvaluationError,
    PowerRat,
    RatFn,
    as_fraction,
    laplacian_poly,
    laplacian_ratfn,
    parse_poly,
    parse_ratfn,
    poly_arith,
    poly_diff,
    poly_to_str,
    ratfn_arith,
    ratfn_diff,
    ratfn_eval,
    ratfn_is_zero,
    ratfn_to_str,
)


def test_as_fraction_accepts_ints_fractions_and_strings():
    assert as_fraction(3) == Fraction(3)
    assert as_fraction(Fraction(2, 7)) == Fraction(2, 7)
    assert as_fraction("-5/9") == Fraction(-5, 9)
    assert as_fraction("4") == Fraction(4)


def test_as_fraction_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_zero_terms_are_dropped():
    p = BiPoly({(0, 0): 1}) - 1
    assert p.is_zero()
    assert p.n_terms == 0
    assert (X - X).is_zero()


def test_basic_ring_identities():
    p = X * X - Y * Y
    q = X + Y
    assert p == (X - Y) * q
    assert p - p == ZERO
    assert p * ONE == p
    assert p * ZERO == ZERO
    assert (X + 1) ** 2 == X * X + 2 * X + 1


def test_degrees_and_coeffs():
    p = 3 * X ** 2 * Y - Fraction(1, 2)
    assert p.total_degree() == 3
    assert p.degree("x") == 2
    assert p.degree("y") == 1
    assert p.coeff(2, 1) == 3
    assert p.coeff(0, 0) == Fraction(-1, 2)
    assert p.coeff(5, 5) == 0


def test_diff_and_laplacian():
    p = X ** 3 * Y + Y ** 2
    assert p.diff("x") == 3 * X ** 2 * Y
    assert p.diff("y") == X ** 3 + 2 * Y
    assert laplacian_poly(p) == 6 * X * Y + 2
    # harmonic polynomial
    assert laplacian_poly(X ** 3 - 3 * X * Y ** 2).is_zero()


def test_poly_eval_exact_and_float():
    p = X ** 2 + Fraction(1, 3) * Y
    assert p.eval(Fraction(1, 2), 3) == Fraction(5, 4)
    assert p.eval_float(0.5, 3.0) == pytest.approx(1.25)


def test_exponent_cap_raises(monkeypatch):
    monkeypatch.setenv("DARBOUX_EXP_CAP", "8")
    with pytest.raises(ExponentCapError):
        (X ** 5) * (X ** 4)
    monkeypatch.delenv("DARBOUX_EXP_CAP")
    assert (X ** 5) * (X ** 4) == X ** 9


def test_poly_text_round_trip():
    p = Fraction(3, 2) * X ** 2 * Y - X + Fraction(5, 7)
    text = poly_to_str(p)
    assert text == "3/2*x^2*y - x + 5/7"
    assert parse_poly(text) == p
    assert parse_poly("x^2 - y^2") == X ** 2 - Y ** 2
    assert poly_to_str(ZERO) == "0"
    assert parse_poly("0").is_zero()


def test_poly_text_graded_lex_order():
    p = X + Y ** 3 + X * Y
    assert poly_to_str(p) == "y^3 + x*y + x"


def test_ratfn_construction_and_zero_den_rejected():
    f = RatFn(X, Y)
    assert f.num == X and f.den == Y
    with pytest.raises(ZeroDivisionError):
        RatFn(X, 0)


def test_ratfn_arithmetic_is_extensional():
    f = RatFn(X, Y)
    g = RatFn(X * Y, Y * Y)  # same value, different representative
    assert f == g
    assert (f - g).is_zero()


def test_ratfn_same_denominator_fast_path():
    den = X ** 2 + Y ** 2 + 1
    f = RatFn(X, den)
    g = RatFn(Y, den)
    s = f + g
    assert s.den == den  # no cross-multiplication
    assert s.num == X + Y


def test_ratfn_diff_quotient_rule():
    f = RatFn(X, X ** 2 + Y ** 2)
    fx = f.diff("x")
    # d/dx [x/(x^2+y^2)] = (y^2 - x^2)/(x^2+y^2)^2
    expected = RatFn(Y ** 2 - X ** 2, (X ** 2 + Y ** 2) ** 2)
    assert (fx - expected).is_zero()
    assert fx.eval(1, 2) == Fraction(3, 25)


def test_ratfn_eval_pole_and_float_nan():
    f = RatFn(ONE, X)
    with pytest.raises(PoleEvaluationError):
        f.eval(0, 5)
    assert math.isnan(f.eval_float(0.0, 5.0))
    assert f.eval_float(2.0, 0.0) == 0.5


def test_ratfn_text_round_trip():
    f = RatFn(X ** 2 - Y, 2 * X * Y + 3)
    text = ratfn_to_str(f)
    assert text == "(x^2 - y)/(2*x*y + 3)"
    g = parse_ratfn(text)
    assert (f - g).is_zero()
    assert ratfn_to_str(RatFn.from_poly(X + 1)) == "x + 1"
    assert parse_ratfn("x + 1") == RatFn.from_poly(X + 1)


def test_functional_wrappers_match_methods():
    p, q = X + Y, X - Y
    assert poly_arith(p, q, "mul") == p * q
    assert poly_diff(p * q, "x") == (p * q).diff("x")
    f, g = RatFn(X, Y), RatFn(Y, X)
    for op in ("add", "sub", "mul", "div"):
        got = ratfn_arith(f, g, op)
        want = {"add": f + g, "sub": f - g, "mul": f * g, "div": f / g}[op]
        assert (got - want).is_zero()
    assert ratfn_is_zero(f - f)
    assert ratfn_eval(f, (Fraction(3), Fraction(4))) == Fraction(3, 4)


def test_laplacian_ratfn_matches_double_diff():
    f = RatFn(X, X ** 2 + Y ** 2 + 1)
    direct = ratfn_arith(
        ratfn_diff(ratfn_diff(f, "x"), "x"),
        ratfn_diff(ratfn_diff(f, "y"), "y"),
        "add",
    )
    assert (laplacian_ratfn(f) - direct).is_zero()


def test_power_ladder_matches_quotient_rule():
    f = RatFn(X + Y ** 2, X ** 2 + Y ** 2 + 2)
    ladder = PowerRat.from_ratfn(f)
    lap_ladder = (ladder.diff("x").diff("x") + ladder.diff("y").diff("y")).to_ratfn()
    assert (lap_ladder - laplacian_ratfn(f)).is_zero()


# -- property tests ---------------------------------------------------------

_coeffs = st.fractions(
    min_value=Fraction(-10), max_value=Fraction(10), max_denominator=6
)


@st.composite
def polys(draw, max_terms=5, max_exp=4):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(min_value=0, max_value=max_exp))
        j = draw(st.integers(min_value=0, max_value=max_exp))
        terms[(i, j)] = draw(_coeffs)
    return BiPoly(terms)


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_product_rule(p, q):
    assert (p * q).diff("x") == p.diff("x") * q + p * q.diff("x")


@given(polys())
@settings(max_examples=60, deadline=None)
def test_text_round_trip_property(p):
    assert parse_poly(poly_to_str(p)) == p


@given(polys(), st.fractions(max_denominator=5), st.fractions(max_denominator=5))
@settings(max_examples=60, deadline=None)
def test_eval_is_a_homomorphism(p, a, b):
    q = p * p - 3 * p
    assert q.eval(a, b) == p.eval(a, b) ** 2 - 3 * p.eval(a, b)
