"""Concrete solvable families.

Four rational families B_0..B_3 of the pole-sum shape B = N/(M + C) with
harmonic numerator, each paired with a closed-form potential

    u_n = lap(B_n) / B_n

transcribed independently of the differential pipeline (the agreement of the
two is a certified check in `verify`, not an assumption here), plus the
hyperbolic pair B_s = tanh((xy - C2)/C1) with its potential.  Parameter sets
matching the two Moutard-derived potentials of Taimanov and Tsarev ship as
named presets.

Builders construct numerators through the Laplace-constrained machinery and
then assert exact agreement with the explicit formulas where the latter
exist -- double-entry bookkeeping against transcription slips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Union

from darboux2d.harmonic import (
    PoleConfig,
    _pole_factor,
    _pole_numerator,
    harmonic_basis,
    laplace_constrained_numerator,
    pole_sum,
)
from darboux2d.polyrat import (
    ONE,
    X,
    Y,
    BiPoly,
    RatFn,
    Scalar,
    as_fraction,
    laplacian_poly,
)

FAMILY_TAGS = ("B0", "B1", "B2", "B3", "custom")

PotentialFn = Union[RatFn, Callable[[float, float], float]]


@dataclass(frozen=True)
class RationalSolution:
    """A rational B = N/(M + C) together with the pole data that built it.

    For B3 the denominator product carries the origin pole with multiplicity
    three (the confluent case); `config` stores each pole once, so for that
    family the structural multiplicity lives in the family tag, not in the
    pole list.
    """

    B: RatFn
    config: PoleConfig
    family_tag: str
    preset: str | None = None

    def __post_init__(self):
        if self.family_tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.family_tag!r}")


@dataclass(frozen=True)
class TanhSolution:
    """Parameters of the hyperbolic solution tanh((xy - C2)/C1)."""

    C1: float
    C2: float

    def __post_init__(self):
        if self.C1 == 0:
            raise ValueError("C1 must be nonzero")


@dataclass(frozen=True)
class ClosedPotential:
    """A transcribed closed-form potential.

    ``u`` is an exact RatFn for the rational families and a plain numeric
    closure (analytically evaluated, not finite-differenced) for the tanh
    family.  ``constants`` records the derived combinations appearing in the
    closed forms (k_1..k_6 for the three-pole family, m_1..m_4 for the
    confluent one); they are computed from the pole coordinates, never taken
    as independent inputs.
    """

    family_tag: str
    u: PotentialFn
    constants: dict[str, Fraction] = field(default_factory=dict)


def _require_positive_C(C: Fraction) -> None:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")


def _require_nonzero_weight(p: Fraction, q: Fraction) -> None:
    if p == 0 and q == 0:
        raise ValueError("weight vector (p, q) must be nonzero")


def _den_from(M: BiPoly, C: Fraction) -> BiPoly:
    return M + BiPoly.const(C)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def build_B0(p0: Scalar, q0: Scalar, x0: Scalar, y0: Scalar, C: Scalar) -> RationalSolution:
    """One-pole family: B = (p0(x-x0) + q0(y-y0)) / ((x-x0)^2 + (y-y0)^2 + C)."""
    p0, q0, x0, y0, C = map(as_fraction, (p0, q0, x0, y0, C))
    _require_nonzero_weight(p0, q0)
    _require_positive_C(C)
    config = PoleConfig(poles=((x0, y0),), weights=((p0, q0),), C=C)
    N, M = pole_sum(config)
    explicit = p0 * (X - x0) + q0 * (Y - y0)
    assert N == explicit, "one-pole numerator disagrees with the explicit linear form"
    return RationalSolution(B=RatFn(N, _den_from(M, C)), config=config, family_tag="B0")


def _match_leading_weights(
    basis: list[tuple[Fraction, ...]], p0: Fraction, q0: Fraction
) -> tuple[Fraction, ...]:
    """Combination of two basis vectors whose first weight pair is (p0, q0)."""
    if len(basis) != 2:
        raise ValueError(
            f"pole configuration is degenerate: solution space has dimension {len(basis)}"
        )
    v1, v2 = basis
    det = v1[0] * v2[1] - v1[1] * v2[0]
    if det == 0:
        raise ValueError("solution space does not realize arbitrary (p0, q0)")
    a = (p0 * v2[1] - q0 * v2[0]) / det
    b = (q0 * v1[0] - p0 * v1[1]) / det
    return tuple(a * c1 + b * c2 for c1, c2 in zip(v1, v2))


def build_B1(
    p0: Scalar, q0: Scalar, x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar, C: Scalar
) -> RationalSolution:
    """Two-pole family with the second weight pair forced by harmonicity."""
    p0, q0, x0, y0, x1, y1, C = map(as_fraction, (p0, q0, x0, y0, x1, y1, C))
    _require_nonzero_weight(p0, q0)
    _require_positive_C(C)
    if (x0, y0) == (x1, y1):
        raise ValueError("poles must be distinct")
    poles = ((x0, y0), (x1, y1))
    basis = laplace_constrained_numerator(poles)
    weights_flat = _match_leading_weights(basis, p0, q0)
    weights = ((weights_flat[0], weights_flat[1]), (weights_flat[2], weights_flat[3]))
    config = PoleConfig(poles=poles, weights=weights, C=C)
    N, M = pole_sum(config)

    # independent rendering of the same numerator, straight from the closed form
    d1 = p0 * (x0 - x1) - q0 * (y0 - y1)
    d2 = p0 * (y0 - y1) + q0 * (x0 - x1)
    s = x0 * x0 - x1 * x1 + y0 * y0 - y1 * y1
    w = x0 * y1 - y0 * x1
    r0 = x0 * x0 + y0 * y0
    r1 = x1 * x1 + y1 * y1
    explicit = (
        d1 * (X**2 - Y**2)
        + 2 * d2 * (X * Y)
        - (p0 * s + 2 * q0 * w) * X
        + (2 * p0 * w - q0 * s) * Y
        - BiPoly.const(p0 * (x0 * r1 - x1 * r0) + q0 * (y0 * r1 - y1 * r0))
    )
    assert N == explicit, "two-pole numerator disagrees with its closed form"
    assert laplacian_poly(N).is_zero()
    return RationalSolution(B=RatFn(N, _den_from(M, C)), config=config, family_tag="B1")


def build_B2(
    weights_choice, x1: Scalar, y1: Scalar, x2: Scalar, y2: Scalar, C: Scalar
) -> RationalSolution:
    """Three-pole family (one pole pinned at the origin).

    ``weights_choice`` is either a pair (a, b) of coordinates in the solved
    two-dimensional weight basis, or a full six-component weight vector that
    must lie in that space.
    """
    x1, y1, x2, y2, C = map(as_fraction, (x1, y1, x2, y2, C))
    _require_positive_C(C)
    poles = ((Fraction(0), Fraction(0)), (x1, y1), (x2, y2))
    if len(set(poles)) != 3:
        raise ValueError("poles must be distinct")
    basis = laplace_constrained_numerator(poles)
    if len(basis) != 2:
        raise ValueError(
            f"pole configuration is degenerate: solution space has dimension {len(basis)}"
        )
    choice = tuple(as_fraction(v) for v in weights_choice)
    if len(choice) == 2:
        a, b = choice
        flat = tuple(a * c1 + b * c2 for c1, c2 in zip(*basis))
    elif len(choice) == 6:
        flat = _project_into_span(basis, choice)
    else:
        raise ValueError("weights_choice must have 2 (basis coords) or 6 (full) entries")
    if all(v == 0 for v in flat):
        raise ValueError("weight vector is zero")
    weights = tuple((flat[2 * i], flat[2 * i + 1]) for i in range(3))
    config = PoleConfig(poles=poles, weights=weights, C=C)
    N, M = pole_sum(config)
    assert laplacian_poly(N).is_zero()
    return RationalSolution(B=RatFn(N, _den_from(M, C)), config=config, family_tag="B2")


def _project_into_span(
    basis: list[tuple[Fraction, ...]], vec: tuple[Fraction, ...]
) -> tuple[Fraction, ...]:
    """Validate that ``vec`` is a combination of the two basis vectors."""
    v1, v2 = basis
    coeffs = None
    for i in range(len(vec)):
        for j in range(i + 1, len(vec)):
            det = v1[i] * v2[j] - v1[j] * v2[i]
            if det:
                a = (vec[i] * v2[j] - vec[j] * v2[i]) / det
                b = (vec[j] * v1[i] - vec[i] * v1[j]) / det
                coeffs = (a, b)
                break
        if coeffs:
            break
    if coeffs is None:
        raise ValueError("solved weight space is degenerate")
    a, b = coeffs
    if any(a * c1 + b * c2 != v for c1, c2, v in zip(v1, v2, vec)):
        raise ValueError("weight vector lies outside the solved family")
    return vec


def _m_constants(x1: Fraction, y1: Fraction) -> dict[str, Fraction]:
    return {
        "m1": x1 * (x1 * x1 - 3 * y1 * y1),
        "m2": y1 * (y1 * y1 - 3 * x1 * x1),
        "m3": 2 * x1 * y1 * (x1 * x1 + y1 * y1),
        "m4": x1**4 - y1**4,
    }


def build_B3(p1: Scalar, q1: Scalar, x1: Scalar, y1: Scalar, C: Scalar) -> RationalSolution:
    """Confluent family: triple pole at the origin plus one free pole.

    The numerator is assembled in the degree-(3,4) harmonic basis (the
    Laplace constraint is built in) and cross-checked against its explicit
    expanded form; the denominator is (x^2+y^2)^3 ((x-x1)^2+(y-y1)^2) + C.
    """
    p1, q1, x1, y1, C = map(as_fraction, (p1, q1, x1, y1, C))
    _require_nonzero_weight(p1, q1)
    _require_positive_C(C)
    if (x1, y1) == (0, 0):
        raise ValueError("free pole must differ from the origin")
    m = _m_constants(x1, y1)
    m1, m2, m3, m4 = m["m1"], m["m2"], m["m3"], m["m4"]

    basis = harmonic_basis(4)
    re3, im3 = basis[3].Y, basis[3].Q
    re4, im4 = basis[4].Y, basis[4].Q
    H = (
        (m1 * p1 + m2 * q1) * re4
        + (m1 * q1 - m2 * p1) * im4
        + (m3 * q1 - m4 * p1) * re3
        - (m4 * q1 + m3 * p1) * im3
    )

    explicit = (
        (m1 * p1 + m2 * q1) * ((X**2 - Y**2) ** 2 - 4 * X**2 * Y**2)
        + 4 * (m1 * q1 - m2 * p1) * (X * Y * (X**2 - Y**2))
        + (m3 * q1 - m4 * p1) * (X * (X**2 - 3 * Y**2))
        + (m4 * q1 + m3 * p1) * (Y * (Y**2 - 3 * X**2))
    )
    assert H == explicit, "confluent numerator disagrees with its closed form"
    assert laplacian_poly(H).is_zero()

    origin = (Fraction(0), Fraction(0))
    config = PoleConfig(
        poles=(origin, (x1, y1)),
        weights=((Fraction(0), Fraction(0)), (p1, q1)),
        C=C,
    )
    M = _pole_factor(origin) ** 3 * _pole_factor((x1, y1))
    return RationalSolution(B=RatFn(H, _den_from(M, C)), config=config, family_tag="B3")


# ---------------------------------------------------------------------------
# closed-form potentials
# ---------------------------------------------------------------------------


def _need(params: Mapping[str, Scalar], *keys: str) -> list[Fraction]:
    missing = [k for k in keys if k not in params]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")
    return [as_fraction(params[k]) for k in keys]


def closed_potential(family_tag: str, params: Mapping[str, Scalar]) -> ClosedPotential:
    """Transcribed closed-form potential for a family.

    These expressions are written down directly, *not* derived by
    differentiating B; the exact agreement of the two routes is one of the
    certified checks in `verify`.
    """
    if family_tag == "B0":
        x0, y0, C = _need(params, "x0", "y0", "C")
        _require_positive_C(C)
        den = (X - x0) ** 2 + (Y - y0) ** 2 + BiPoly.const(C)
        u = RatFn(BiPoly.const(-8 * C), den * den)
        return ClosedPotential(family_tag="B0", u=u)

    if family_tag == "B1":
        x0, y0, x1, y1, C = _need(params, "x0", "y0", "x1", "y1", "C")
        _require_positive_C(C)
        if (x0, y0) == (x1, y1):
            raise ValueError("poles must be distinct")
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        num = -32 * C * ((X - cx) ** 2 + (Y - cy) ** 2)
        M = ((X - x0) ** 2 + (Y - y0) ** 2) * ((X - x1) ** 2 + (Y - y1) ** 2)
        den = M + BiPoly.const(C)
        return ClosedPotential(family_tag="B1", u=RatFn(num, den * den))

    if family_tag == "B2":
        x1, y1, x2, y2, C = _need(params, "x1", "y1", "x2", "y2", "C")
        _require_positive_C(C)
        poles = ((Fraction(0), Fraction(0)), (x1, y1), (x2, y2))
        if len(set(poles)) != 3:
            raise ValueError("poles must be distinct")
        k = {
            "k1": x1 + x2,
            "k2": y1 + y2,
            "k3": x1 * x2,
            "k4": y1 * y2,
            "k5": x1 * y2,
            "k6": y1 * x2,
        }
        G = (
            ((3 * X - 2 * k["k1"]) ** 2 + (3 * Y - 2 * k["k2"]) ** 2) * (X**2 + Y**2)
            + 6 * (k["k3"] - k["k4"]) * (X**2 - Y**2)
            + 12 * (k["k5"] + k["k6"]) * (X * Y)
            - 4 * (k["k1"] * k["k3"] + k["k5"] * y2 + k["k6"] * y1) * X
            - 4 * (k["k2"] * k["k4"] + k["k5"] * x1 + k["k6"] * x2) * Y
            + BiPoly.const((x1 * x1 + y1 * y1) * (x2 * x2 + y2 * y2))
        )
        M = (
            (X**2 + Y**2)
            * ((X - x1) ** 2 + (Y - y1) ** 2)
            * ((X - x2) ** 2 + (Y - y2) ** 2)
        )
        den = M + BiPoly.const(C)
        return ClosedPotential(family_tag="B2", u=RatFn(-8 * C * G, den * den), constants=k)

    if family_tag == "B3":
        x1, y1, C = _need(params, "x1", "y1", "C")
        _require_positive_C(C)
        if (x1, y1) == (0, 0):
            raise ValueError("free pole must differ from the origin")
        num = (
            -128
            * C
            * (X**2 + Y**2) ** 2
            * ((X - 3 * x1 / 4) ** 2 + (Y - 3 * y1 / 4) ** 2)
        )
        M = (X**2 + Y**2) ** 3 * ((X - x1) ** 2 + (Y - y1) ** 2)
        den = M + BiPoly.const(C)
        return ClosedPotential(
            family_tag="B3", u=RatFn(num, den * den), constants=_m_constants(x1, y1)
        )

    if family_tag == "tanh":
        C1 = float(params.get("C1", 0))
        C2 = float(params.get("C2", 0))
        _, u = build_tanh(C1, C2)
        return ClosedPotential(family_tag="tanh", u=u)

    raise ValueError(f"unknown family tag {family_tag!r}")


# ---------------------------------------------------------------------------
# the hyperbolic pair
# ---------------------------------------------------------------------------


def _sech2(t: float) -> float:
    # 1/cosh(t)^2 without overflow for large |t|
    a = math.exp(-2.0 * abs(t))
    return 4.0 * a / (1.0 + a) ** 2


def build_tanh(C1: float, C2: float) -> tuple[
    Callable[[float, float], float], Callable[[float, float], float]
]:
    """The pair (B_s, u) with B_s = tanh((xy - C2)/C1).

    u(x, y) = -2 C1^-2 (x^2 + y^2) / cosh^2((xy - C2)/C1), evaluated with an
    overflow-safe sech^2 so both closures are finite at arbitrary points.
    """
    C1 = float(C1)
    C2 = float(C2)
    if C1 == 0:
        raise ValueError("C1 must be nonzero")

    def B_s(x: float, y: float) -> float:
        return math.tanh((x * y - C2) / C1)

    def u(x: float, y: float) -> float:
        return -2.0 / (C1 * C1) * (x * x + y * y) * _sech2((x * y - C2) / C1)

    return B_s, u


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def _sqrt_fraction(v: Fraction, digits: int = 40) -> Fraction:
    """High-precision rational approximation of sqrt(v) (error ~ 10^-digits)."""
    if v < 0:
        raise ValueError("negative radicand")
    scale = 10**digits
    return Fraction(math.isqrt(v.numerator * v.denominator * scale * scale),
                    v.denominator * scale)


def _tsarev2_values() -> tuple[dict[str, Fraction], dict[str, float]]:
    # the nested surd t = sqrt(788 + sqrt(1252969)) drives all four pole coords
    t_hi = _sqrt_fraction(788 + _sqrt_fraction(Fraction(1252969)))
    exact_full = {
        "x1": -Fraction(1, 80) - t_hi / 80,
        "y1": (-159 + t_hi) / (16 * t_hi),
        "x2": -Fraction(1, 80) + t_hi / 80,
        "y2": (159 + t_hi) / (16 * t_hi),
    }
    rationalized = {k: v.limit_denominator(10**13) for k, v in exact_full.items()}
    rationalized["C"] = Fraction(50)
    t = math.sqrt(788 + math.sqrt(1252969))
    floats = {
        "x1": -1 / 80 - t / 80,
        "y1": (-159 + t) / (16 * t),
        "x2": -1 / 80 + t / 80,
        "y2": (159 + t) / (16 * t),
        "C": 50.0,
    }
    return rationalized, floats


@dataclass(frozen=True)
class Preset:
    """Named parameter set; `params` is exact, `params_float` carries the
    surd-valued original when the exact entry is a rational approximation."""

    name: str
    family_tag: str
    params: dict
    params_float: dict | None = None


def _make_presets() -> dict[str, Preset]:
    tsarev2_exact, tsarev2_float = _tsarev2_values()
    return {
        "tsarev-1": Preset(
            name="tsarev-1",
            family_tag="B1",
            params={
                "p0": Fraction(1),
                "q0": Fraction(0),
                "x0": Fraction(0),
                "y0": Fraction(0),
                "x1": Fraction(-8, 17),
                "y1": Fraction(-2, 17),
                "C": Fraction(160, 17),
            },
        ),
        "tsarev-2": Preset(
            name="tsarev-2",
            family_tag="B2",
            params=tsarev2_exact,
            params_float=tsarev2_float,
        ),
    }


PRESETS: dict[str, Preset] = _make_presets()

DEFAULT_PARAMS: dict[str, dict] = {
    "B0": {"p0": 1, "q0": 0, "x0": 0, "y0": 0, "C": 1},
    "B1": dict(PRESETS["tsarev-1"].params),
    "B2": dict(PRESETS["tsarev-2"].params),
    "B3": {"p1": 1, "q1": 0, "x1": 1, "y1": 1, "C": 1},
    "tanh": {"C1": 1.0, "C2": 0.0},
}


def build_family(family_tag: str, params: Mapping[str, Scalar]) -> RationalSolution:
    """Dispatch to the family builders from a flat parameter mapping."""
    if family_tag == "B0":
        p0, q0, x0, y0, C = _need(params, "p0", "q0", "x0", "y0", "C")
        return build_B0(p0, q0, x0, y0, C)
    if family_tag == "B1":
        p0, q0, x0, y0, x1, y1, C = _need(params, "p0", "q0", "x0", "y0", "x1", "y1", "C")
        return build_B1(p0, q0, x0, y0, x1, y1, C)
    if family_tag == "B2":
        x1, y1, x2, y2, C = _need(params, "x1", "y1", "x2", "y2", "C")
        choice = params.get("weights_choice", (1, 0))
        return build_B2(choice, x1, y1, x2, y2, C)
    if family_tag == "B3":
        p1, q1, x1, y1, C = _need(params, "p1", "q1", "x1", "y1", "C")
        return build_B3(p1, q1, x1, y1, C)
    raise ValueError(f"unknown family tag {family_tag!r}")


def build_preset(name: str, **extra) -> RationalSolution:
    """Instantiate a named preset; `extra` may override free weight choices."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r} (have: {', '.join(sorted(PRESETS))})")
    preset = PRESETS[name]
    params = dict(preset.params)
    params.update(extra)
    built = build_family(preset.family_tag, params)
    return RationalSolution(
        B=built.B, config=built.config, family_tag=built.family_tag, preset=name
    )
