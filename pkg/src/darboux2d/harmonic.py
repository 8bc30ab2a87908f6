"""Harmonic seed machinery.

Seeds for the transform are pairs (Y, Q) solving the first-order system

    Y_x - Q_y = 0,    Y_y + Q_x = 0,

i.e. Q is the harmonic conjugate of Y (both components are then harmonic).
This module builds polynomial seed bases, computes conjugates by exact
monomial-wise path integration, and handles the dipole pole sums

    S_n = sum_i (p_i (x - x_i) + q_i (y - y_i)) / ((x - x_i)^2 + (y - y_i)^2)
        = N_n / M_n

whose cleared numerators N_n, constrained to be harmonic, feed the rational
solution families.  The harmonicity constraint is an exact rational linear
system in the weights (p_i, q_i); its solution space is computed by
fraction-free Gaussian elimination and returned as a canonically scaled basis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from darboux2d.polyrat import (
    ONE,
    X,
    Y,
    ZERO,
    BiPoly,
    Scalar,
    as_fraction,
    laplacian_poly,
)

Point = tuple[Fraction, Fraction]


def _as_point(value) -> Point:
    a, b = value
    return (as_fraction(a), as_fraction(b))


@dataclass(frozen=True)
class PoleConfig:
    """Pole positions, dipole weights, and the positive shift constant C.

    ``poles[i]`` is (x_i, y_i), ``weights[i]`` is (p_i, q_i).  Poles must be
    pairwise distinct here; the confluent quadruple-pole family stores its
    multiplicity structurally (see ``families.build_B3``), not as repeats.
    C's positivity is a *usage* condition (it makes M_n + C positive) and is
    enforced by the family builders rather than by this container.
    """

    poles: tuple[Point, ...]
    weights: tuple[Point, ...]
    C: Fraction

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(_as_point(p) for p in self.poles))
        object.__setattr__(self, "weights", tuple(_as_point(w) for w in self.weights))
        object.__setattr__(self, "C", as_fraction(self.C))
        if not self.poles:
            raise ValueError("at least one pole is required")
        if len(self.poles) != len(self.weights):
            raise ValueError(
                f"{len(self.poles)} poles but {len(self.weights)} weight pairs"
            )
        if len(set(self.poles)) != len(self.poles):
            raise ValueError("poles must be pairwise distinct")

    def to_json(self) -> str:
        payload = {
            "poles": [[str(x), str(y)] for x, y in self.poles],
            "weights": [[str(p), str(q)] for p, q in self.weights],
            "C": str(self.C),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "PoleConfig":
        payload = json.loads(text)
        return cls(
            poles=tuple((Fraction(x), Fraction(y)) for x, y in payload["poles"]),
            weights=tuple((Fraction(p), Fraction(q)) for p, q in payload["weights"]),
            C=Fraction(payload["C"]),
        )


@dataclass(frozen=True)
class HarmonicPair:
    """A seed pair (Y, Q) with Y_x = Q_y and Y_y = -Q_x, checked exactly."""

    Y: BiPoly
    Q: BiPoly

    def __post_init__(self):
        r1 = self.Y.diff("x") - self.Q.diff("y")
        r2 = self.Y.diff("y") + self.Q.diff("x")
        if not (r1.is_zero() and r2.is_zero()):
            raise ValueError("pair does not satisfy the conjugate system")


def harmonic_basis(max_degree: int) -> list[HarmonicPair]:
    """Seed pairs (Re z^k, Im z^k) for k = 0..max_degree, plus (0, 1).

    The final (0, 1) pair is the pure-nonlocal seed: Y = 0 with constant
    potential variable, which the conjugate normalization Q(0,0) = 0 can
    never produce.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    pairs = []
    re_part, im_part = ONE, ZERO
    for _ in range(max_degree + 1):
        pairs.append(HarmonicPair(re_part, im_part))
        re_part, im_part = re_part * X - im_part * Y, re_part * Y + im_part * X
    pairs.append(HarmonicPair(ZERO, ONE))
    return pairs


def conjugate(Y_poly: BiPoly) -> BiPoly:
    """Harmonic conjugate Q of a harmonic polynomial, with Q(0,0) = 0.

    Q is assembled by exact path integration along (0,0) -> (x,0) -> (x,y):
    the y-leg integrates Q_y = Y_x, the x-leg integrates Q_x = -Y_y on the
    axis.  Harmonicity of the input is exactly the integrability condition.
    """
    if not laplacian_poly(Y_poly).is_zero():
        raise ValueError("conjugate requires a harmonic polynomial")
    terms: dict[tuple[int, int], Fraction] = {}
    for (i, j), c in Y_poly.diff("x").terms.items():
        key = (i, j + 1)
        terms[key] = terms.get(key, Fraction(0)) + c / (j + 1)
    for (i, j), c in Y_poly.diff("y").terms.items():
        if j == 0:
            key = (i + 1, 0)
            terms[key] = terms.get(key, Fraction(0)) - c / (i + 1)
    return BiPoly({k: v for k, v in terms.items() if v})


def _pole_factor(pole: Point) -> BiPoly:
    xi, yi = pole
    return (X - xi) ** 2 + (Y - yi) ** 2


def _pole_numerator(poles: Sequence[Point], weights: Sequence[Point]) -> BiPoly:
    factors = [_pole_factor(p) for p in poles]
    total = ZERO
    for i, ((xi, yi), (pi, qi)) in enumerate(zip(poles, weights)):
        linear = pi * (X - xi) + qi * (Y - yi)
        for j, factor in enumerate(factors):
            if j != i:
                linear = linear * factor
        total = total + linear
    return total


def pole_sum(config: PoleConfig) -> tuple[BiPoly, BiPoly]:
    """Cleared numerator and denominator (N_n, M_n) of the dipole sum."""
    N = _pole_numerator(config.poles, config.weights)
    M = ONE
    for pole in config.poles:
        M = M * _pole_factor(pole)
    return N, M


def laplace_constrained_numerator(
    poles: Sequence[tuple[Scalar, Scalar]],
) -> list[tuple[Fraction, ...]]:
    """Basis of weight vectors (p_0, q_0, ..., p_n, q_n) making N_n harmonic.

    The Laplacian of N_n is linear in the weights, so harmonicity is an exact
    homogeneous linear system over Q: one equation per monomial of the
    expanded Laplacian.  The nullspace is computed fraction-free and returned
    as integer-coordinate vectors with content 1, first nonzero entry
    positive, in free-variable order.  An empty list means only the trivial
    weight vector works for this pole layout.
    """
    pts = [_as_point(p) for p in poles]
    if len(set(pts)) != len(pts):
        raise ValueError("poles must be pairwise distinct")
    n_unknowns = 2 * len(pts)

    columns: list[BiPoly] = []
    for k in range(n_unknowns):
        weights = [(Fraction(0), Fraction(0))] * len(pts)
        pair = list(weights[k // 2])
        pair[k % 2] = Fraction(1)
        weights[k // 2] = (pair[0], pair[1])
        columns.append(laplacian_poly(_pole_numerator(pts, weights)))

    monomials = sorted(set().union(*(col.terms.keys() for col in columns)))
    rows = [[col.coeff(*mono) for col in columns] for mono in monomials]
    return _nullspace(rows, n_unknowns)


def _nullspace(rows: list[list[Fraction]], n_cols: int) -> list[tuple[Fraction, ...]]:
    """Nullspace basis by fraction-free (Bareiss) elimination over Z.

    Each row is scaled to primitive integers first (row scaling preserves the
    nullspace), the forward pass uses the exact two-row determinant update
    with division by the previous pivot, and back-substitution for the free
    columns runs over Fractions before canonical integer rescaling.
    """
    mat: list[list[int]] = []
    for row in rows:
        scale = 1
        for v in row:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
        ints = [int(v * scale) for v in row]
        content = 0
        for v in ints:
            content = math.gcd(content, v)
        if content:
            mat.append([v // content for v in ints])

    pivot_cols: list[int] = []
    rank = 0
    prev_pivot = 1
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            factor = mat[r][col]
            for c in range(n_cols):
                q, rem = divmod(mat[r][c] * pivot - factor * mat[rank][c], prev_pivot)
                assert rem == 0, "fraction-free update must divide exactly"
                mat[r][c] = q
        prev_pivot = pivot
        pivot_cols.append(col)
        rank += 1
        if rank == len(mat):
            break

    free_cols = [c for c in range(n_cols) if c not in pivot_cols]
    basis: list[tuple[Fraction, ...]] = []
    for free in free_cols:
        vec = [Fraction(0)] * n_cols
        vec[free] = Fraction(1)
        for idx in reversed(range(len(pivot_cols))):
            col = pivot_cols[idx]
            row = mat[idx]
            acc = sum((Fraction(row[c]) * vec[c] for c in range(col + 1, n_cols)),
                      Fraction(0))
            vec[col] = -acc / row[col]
        basis.append(_canonical_int_vector(vec))
    return basis


def _canonical_int_vector(vec: list[Fraction]) -> tuple[Fraction, ...]:
    scale = 1
    for v in vec:
        scale = scale * v.denominator // math.gcd(scale, v.denominator)
    ints = [int(v * scale) for v in vec]
    content = 0
    for v in ints:
        content = math.gcd(content, v)
    if content:
        ints = [v // content for v in ints]
    lead = next((v for v in ints if v), 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)
