"""Exact sparse bivariate polynomials and unreduced rational functions.

Everything in this module is exact: coefficients are arbitrary-precision
rationals (`fractions.Fraction`), and no simplification step ever divides by
a polynomial.  Rational functions are kept *unreduced* -- numerator and
denominator are stored as-is, equality is decided by cross-multiplied zero
tests, and evaluation happens only at explicit points.  Floats appear solely
at the evaluation boundary (`eval_float` / `ratfn_eval` with float inputs).

Terms are stored sparsely as ``{(i, j): coeff}`` with ``i`` the x-exponent and
``j`` the y-exponent.  Rendering and parsing use a graded-lexicographic term
order (total degree descending, then x-exponent descending) so that the text
form of a polynomial is canonical.

A global exponent cap (default 256, overridable through the environment
variable ``DARBOUX_EXP_CAP``) bounds intermediate blow-up: any operation
producing a monomial exponent above the cap raises :class:`ExponentCapError`
instead of silently grinding through an enormous computation.
"""

from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = tuple[int, int]
Scalar = Union[int, Fraction, str]

_DEFAULT_EXP_CAP = 256
_VARS = ("x", "y")


class ExponentCapError(ArithmeticError):
    """An operation produced a monomial exponent above the configured cap."""


class PoleEvaluationError(ZeroDivisionError):
    """Exact evaluation of a rational function hit a zero denominator."""


def exponent_cap() -> int:
    """Current exponent cap (env var ``DARBOUX_EXP_CAP`` overrides default)."""
    raw = os.environ.get("DARBOUX_EXP_CAP")
    if raw is None:
        return _DEFAULT_EXP_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"DARBOUX_EXP_CAP must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise ValueError(f"DARBOUX_EXP_CAP must be positive, got {cap}")
    return cap


def as_fraction(value: Scalar) -> Fraction:
    """Coerce ``value`` to an exact rational; floats are deliberately rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a valid coefficient")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def _check_cap(terms: Mapping[Exponent, Fraction]) -> None:
    cap = exponent_cap()
    for i, j in terms:
        if i > cap or j > cap:
            raise ExponentCapError(
                f"monomial {_mono_str(i, j)} exceeds exponent cap {cap} "
                "(raise DARBOUX_EXP_CAP to override)"
            )


class BiPoly:
    """Sparse bivariate polynomial over Q with exponent tuples as keys."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for key, val in terms.items():
                i, j = key
                if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                    raise ValueError(f"invalid exponent pair {key!r}")
                coeff = as_fraction(val)
                if coeff:
                    clean[(i, j)] = coeff
        _check_cap(clean)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> "BiPoly":
        """Internal constructor: trusts exponents, still enforces the cap."""
        _check_cap(terms)
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, value: Scalar) -> "BiPoly":
        c = as_fraction(value)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def variable(cls, var: str) -> "BiPoly":
        if var not in _VARS:
            raise ValueError(f"variable must be 'x' or 'y', got {var!r}")
        key = (1, 0) if var == "x" else (0, 1)
        return cls._raw({key: Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        """Max total degree of a term; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(i + j for i, j in self.terms)

    def degree(self, var: str) -> int:
        if var not in _VARS:
            raise ValueError(f"variable must be 'x' or 'y', got {var!r}")
        if not self.terms:
            return 0
        idx = 0 if var == "x" else 1
        return max(key[idx] for key in self.terms)

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def is_constant(self) -> bool:
        return all(key == (0, 0) for key in self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == BiPoly.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "BiPoly | Scalar") -> "BiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        big, small = (self.terms, other.terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for key, val in small.items():
            acc = out.get(key)
            if acc is None:
                out[key] = val
            else:
                acc = acc + val
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw({key: -val for key, val in self.terms.items()})

    def __sub__(self, other: "BiPoly | Scalar") -> "BiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for key, val in other.terms.items():
            acc = out.get(key)
            if acc is None:
                out[key] = -val
            else:
                acc = acc - val
                if acc:
                    out[key] = acc
                else:
                    del out[key]
        return BiPoly._raw(out)

    def __rsub__(self, other: "BiPoly | Scalar") -> "BiPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: "BiPoly | Scalar") -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return BiPoly._raw({})
            return BiPoly._raw({key: val * other for key, val in self.terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        return BiPoly._raw(_mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "BiPoly":
        if not isinstance(power, int) or power < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = BiPoly.const(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    # -- calculus ----------------------------------------------------------

    def diff(self, var: str) -> "BiPoly":
        if var not in _VARS:
            raise ValueError(f"variable must be 'x' or 'y', got {var!r}")
        out: dict[Exponent, Fraction] = {}
        if var == "x":
            for (i, j), c in self.terms.items():
                if i:
                    out[(i - 1, j)] = c * i
        else:
            for (i, j), c in self.terms.items():
                if j:
                    out[(i, j - 1)] = c * j
        return BiPoly._raw(out)

    # -- evaluation --------------------------------------------------------

    def eval(self, x: Scalar, y: Scalar) -> Fraction:
        """Exact value at a rational point."""
        xv, yv = as_fraction(x), as_fraction(y)
        xp = _frac_powers(xv, self.degree("x"))
        yp = _frac_powers(yv, self.degree("y"))
        total = Fraction(0)
        for (i, j), c in self.terms.items():
            total += c * xp[i] * yp[j]
        return total

    def eval_float(self, x, y):
        """Float (or numpy-array) value; coefficients are rounded to float."""
        xp = _float_powers(x, self.degree("x"))
        yp = _float_powers(y, self.degree("y"))
        total = 0.0 * x * y  # matches the broadcast shape of the inputs
        for (i, j), c in self.terms.items():
            total = total + float(c) * xp[i] * yp[j]
        return total

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return poly_to_str(self)

    def __repr__(self) -> str:
        return f"BiPoly({poly_to_str(self)!r})"


def _coerce_poly(value) -> "BiPoly":
    if isinstance(value, BiPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return BiPoly.const(value)
    return NotImplemented


def _mul_terms(
    a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction]
) -> dict[Exponent, Fraction]:
    """Sparse product with coefficients cleared to integers first.

    Clearing denominators up front keeps the inner loop on machine/long ints
    (one gcd per *result* term instead of one per elementary product), which
    is what makes the large certification runs feasible.
    """
    if not a or not b:
        return {}
    da = 1
    for c in a.values():
        da = da * c.denominator // math.gcd(da, c.denominator)
    db = 1
    for c in b.values():
        db = db * c.denominator // math.gcd(db, c.denominator)
    ai = [(key, c.numerator * (da // c.denominator)) for key, c in a.items()]
    bi = [(key, c.numerator * (db // c.denominator)) for key, c in b.items()]
    if len(ai) < len(bi):
        ai, bi = bi, ai
    acc: dict[Exponent, int] = {}
    get = acc.get
    for (i1, j1), c1 in ai:
        for (i2, j2), c2 in bi:
            key = (i1 + i2, j1 + j2)
            acc[key] = get(key, 0) + c1 * c2
    scale = da * db
    return {key: Fraction(val, scale) for key, val in acc.items() if val}


def _frac_powers(v: Fraction, n: int) -> list[Fraction]:
    powers = [Fraction(1)]
    for _ in range(n):
        powers.append(powers[-1] * v)
    return powers


def _float_powers(v, n: int) -> list:
    powers = [1.0 + 0.0 * v]
    for _ in range(n):
        powers.append(powers[-1] * v)
    return powers


X = BiPoly.variable("x")
Y = BiPoly.variable("y")
ONE = BiPoly.const(1)
ZERO = BiPoly.const(0)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFn:
    """Unreduced quotient of two :class:`BiPoly` values.

    No cancellation is ever attempted (there is no multivariate gcd here, on
    purpose): two representatives of the same function compare equal through
    the cross-multiplied zero test in :meth:`is_zero` / :func:`ratfn_is_zero`.
    Additions between operands that share a denominator *object value* keep
    that denominator instead of squaring it, which is the main guard against
    representative blow-up in long derivative cascades.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly | Scalar, den: BiPoly | Scalar | None = None):
        num = _coerce_poly(num)
        if num is NotImplemented:
            raise TypeError("numerator must be a BiPoly or scalar")
        if den is None:
            den = ONE
        else:
            den = _coerce_poly(den)
            if den is NotImplemented:
                raise TypeError("denominator must be a BiPoly or scalar")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, poly: BiPoly | Scalar) -> "RatFn":
        return cls(poly, ONE)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        """True iff the function is constant (cross-derivative test, exact)."""
        return (self.num.diff("x") * self.den - self.num * self.den.diff("x")).is_zero() and (
            self.num.diff("y") * self.den - self.num * self.den.diff("y")
        ).is_zero()

    def __eq__(self, other: object) -> bool:
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        raise TypeError("RatFn is not hashable (equality is extensional)")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.terms == other.den.terms:
            return RatFn(self.num + other.num, self.den)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __sub__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.terms == other.den.terms:
            return RatFn(self.num - other.num, self.den)
        return RatFn(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFn":
        other = _coerce_ratfn(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    # -- calculus ----------------------------------------------------------

    def diff(self, var: str) -> "RatFn":
        num = self.num.diff(var) * self.den - self.num * self.den.diff(var)
        return RatFn(num, self.den * self.den)

    # -- evaluation --------------------------------------------------------

    def eval(self, x: Scalar, y: Scalar) -> Fraction:
        den = self.den.eval(x, y)
        if den == 0:
            raise PoleEvaluationError(f"denominator vanishes at ({x}, {y})")
        return self.num.eval(x, y) / den

    def eval_float(self, x, y):
        num = self.num.eval_float(x, y)
        den = self.den.eval_float(x, y)
        if isinstance(den, float):
            if den == 0.0:
                return math.nan
            return num / den
        return num / den  # array path: caller handles infs/nans

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return ratfn_to_str(self)

    def __repr__(self) -> str:
        return f"RatFn({ratfn_to_str(self)!r})"


def _coerce_ratfn(value) -> "RatFn":
    if isinstance(value, RatFn):
        return value
    if isinstance(value, BiPoly):
        return RatFn(value, ONE)
    if isinstance(value, (int, Fraction)):
        return RatFn(BiPoly.const(value), ONE)
    return NotImplemented


# ---------------------------------------------------------------------------
# denominator-power ladders
# ---------------------------------------------------------------------------


class PowerBase:
    """Cached powers of one fixed denominator polynomial.

    Derivative cascades of ``n / b**k`` only ever need denominators that are
    powers of the same ``b``; keeping those powers in a shared table lets
    :class:`PowerRat` run quotient rules without re-multiplying denominators.
    """

    __slots__ = ("poly", "_powers")

    def __init__(self, poly: BiPoly):
        if poly.is_zero():
            raise ZeroDivisionError("power base must be a nonzero polynomial")
        self.poly = poly
        self._powers: dict[int, BiPoly] = {0: ONE, 1: poly}

    def pow(self, k: int) -> BiPoly:
        if k < 0:
            raise ValueError("negative denominator power")
        cached = self._powers.get(k)
        if cached is None:
            cached = self.pow(k - 1) * self.poly
            self._powers[k] = cached
        return cached


class PowerRat:
    """Rational function of the special shape ``num / base**power``.

    The derivative of ``n / b**k`` is ``(n' b - k n b') / b**(k+1)``: one
    rung up the same ladder.  All second-order differential expressions in
    this package (potentials, transform coefficients, residuals) stay inside
    a single ladder, which keeps denominators shared and additions cheap.
    """

    __slots__ = ("base", "num", "power")

    def __init__(self, base: PowerBase, num: BiPoly, power: int):
        if power < 0:
            raise ValueError("negative denominator power")
        self.base = base
        self.num = num
        self.power = power

    @classmethod
    def from_ratfn(cls, f: RatFn) -> "PowerRat":
        return cls(PowerBase(f.den), f.num, 1)

    def diff(self, var: str) -> "PowerRat":
        b = self.base.poly
        num = self.num.diff(var) * b - self.num * b.diff(var) * self.power
        return PowerRat(self.base, num, self.power + 1)

    def _lift(self, power: int) -> BiPoly:
        if power < self.power:
            raise ValueError("cannot lower a ladder power")
        if power == self.power:
            return self.num
        return self.num * self.base.pow(power - self.power)

    def __add__(self, other) -> "PowerRat":
        if isinstance(other, PowerRat):
            if other.base is not self.base:
                raise ValueError("PowerRat addition requires a shared base")
            k = max(self.power, other.power)
            return PowerRat(self.base, self._lift(k) + other._lift(k), k)
        if isinstance(other, (int, Fraction, BiPoly)):
            return self + PowerRat(self.base, _coerce_poly(other), 0)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "PowerRat":
        return PowerRat(self.base, -self.num, self.power)

    def __sub__(self, other) -> "PowerRat":
        neg = -other if isinstance(other, PowerRat) else -_coerce_poly(other)
        return self + neg

    def __rsub__(self, other) -> "PowerRat":
        return -(self - other)

    def __mul__(self, other) -> "PowerRat":
        if isinstance(other, PowerRat):
            if other.base is not self.base:
                raise ValueError("PowerRat multiplication requires a shared base")
            return PowerRat(self.base, self.num * other.num, self.power + other.power)
        if isinstance(other, (int, Fraction, BiPoly)):
            return PowerRat(self.base, self.num * _coerce_poly(other), self.power)
        return NotImplemented

    __rmul__ = __mul__

    def to_ratfn(self) -> RatFn:
        return RatFn(self.num, self.base.pow(self.power))

    def is_zero(self) -> bool:
        return self.num.is_zero()


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

_POLY_OPS = ("add", "sub", "mul")
_RATFN_OPS = ("add", "sub", "mul", "div")


def poly_arith(a: BiPoly, b: BiPoly, op: str) -> BiPoly:
    """Ring operation on polynomials; ``op`` is one of add/sub/mul."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"op must be one of {_POLY_OPS}, got {op!r}")


def poly_diff(p: BiPoly, var: str) -> BiPoly:
    return p.diff(var)


def laplacian_poly(p: BiPoly) -> BiPoly:
    return p.diff("x").diff("x") + p.diff("y").diff("y")


def ratfn_arith(a: RatFn, b: RatFn, op: str) -> RatFn:
    """Field operation on rational functions; ``op`` is one of add/sub/mul/div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"op must be one of {_RATFN_OPS}, got {op!r}")


def ratfn_diff(f: RatFn, var: str) -> RatFn:
    return f.diff(var)


def laplacian_ratfn(f: RatFn) -> RatFn:
    return f.diff("x").diff("x") + f.diff("y").diff("y")


def ratfn_is_zero(f: RatFn) -> bool:
    """Exact zero test: the (unreduced) numerator expands to zero."""
    return f.num.is_zero()


def ratfn_eval(f: RatFn, point: tuple) -> "Fraction | float":
    """Evaluate at a point: exact for rational inputs, float otherwise.

    Exact evaluation raises :class:`PoleEvaluationError` on a vanishing
    denominator; float evaluation returns ``nan`` there instead.
    """
    x, y = point
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return f.eval(x, y)
    return f.eval_float(float(x), float(y))


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------


def _mono_str(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def poly_to_str(p: BiPoly) -> str:
    """Canonical text: graded-lex order, x before y, exact coefficients."""
    if not p.terms:
        return "0"
    keys = sorted(p.terms, key=lambda key: (-(key[0] + key[1]), -key[0]))
    pieces: list[str] = []
    for key in keys:
        coeff = p.terms[key]
        mono = _mono_str(*key)
        mag = -coeff if coeff < 0 else coeff
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+(?:/\d+)?)?"
    r"(?:\*?(?P<xs>x(?:\^\d+)?))?"
    r"(?:\*?(?P<ys>y(?:\^\d+)?))?$"
)


def parse_poly(text: str) -> BiPoly:
    """Inverse of :func:`poly_to_str` (also accepts ``**`` and loose spacing)."""
    compact = text.replace(" ", "").replace("**", "^")
    if not compact:
        raise ValueError("empty polynomial text")
    # split into signed chunks at top level (no parentheses in poly text)
    chunks: list[tuple[int, str]] = []
    sign, start = 1, 0
    if compact[0] in "+-":
        sign = -1 if compact[0] == "-" else 1
        start = 1
    cur = []
    for ch in compact[start:]:
        if ch in "+-" and cur and cur[-1] not in "*/^":
            chunks.append((sign, "".join(cur)))
            sign = -1 if ch == "-" else 1
            cur = []
        else:
            cur.append(ch)
    chunks.append((sign, "".join(cur)))

    terms: dict[Exponent, Fraction] = {}
    for sgn, chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m or not chunk:
            raise ValueError(f"cannot parse polynomial term {chunk!r} in {text!r}")
        coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        i = j = 0
        if m.group("xs"):
            i = int(m.group("xs")[2:]) if "^" in m.group("xs") else 1
        if m.group("ys"):
            j = int(m.group("ys")[2:]) if "^" in m.group("ys") else 1
        key = (i, j)
        acc = terms.get(key, Fraction(0)) + sgn * coeff
        if acc:
            terms[key] = acc
        elif key in terms:
            del terms[key]
    return BiPoly._raw(terms)


def ratfn_to_str(f: RatFn) -> str:
    """Canonical text ``(num)/(den)``; a unit denominator prints as plain poly."""
    if f.den == ONE:
        return poly_to_str(f.num)
    return f"({poly_to_str(f.num)})/({poly_to_str(f.den)})"


def parse_ratfn(text: str) -> RatFn:
    stripped = text.strip()
    if stripped.startswith("(") and stripped.endswith(")") and ")/(" in stripped:
        num_text, den_text = stripped[1:-1].split(")/(", 1)
        return RatFn(parse_poly(num_text), parse_poly(den_text))
    return RatFn(parse_poly(stripped), ONE)
