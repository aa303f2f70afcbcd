"""The square map, its involutions, symbolic coding and exact orbits.

The map acts on the half-open unit square O = [0,1)^2:

    F(x, y) = (lam*x - y + s(x, y), x),    s(x, y) = -floor(lam*x - y),

for a rational coefficient ``lam``.  The translation symbol ``s`` takes the
values {0, 1} for 0 <= lam < 1 and {0, 1, 2} for -1 < lam < 0; recording it
along an orbit gives the symbolic code.  Everything here is exact: orbits of
rational points stay rational, and period detection is by exact equality.

Two orientation-reversing involutions generate the map:

    g(x, y) = (y, x)            (time reversal:  F^-1 = g o F o g)
    h(x, y) = ({lam*y - x}, y)  (so that F = h o g)

Affine branch maps z -> C z + (s, 0) with C = [[lam, -1], [1, 0]] describe
the action on each coding atom; compositions over a code word are plane
isometries for the invariant quadratic form (see ``geometry``), and their
matrix parts are exact Chebyshev combinations of powers of C.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import kernel
from .exact import (
    ONE,
    Point,
    ZERO,
    as_rational,
    chebyshev_pair,
    require_lambda,
)

Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

IDENTITY: Matrix = ((ONE, ZERO), (ZERO, ONE))


def in_domain(p: Point) -> bool:
    return 0 <= p.x < 1 and 0 <= p.y < 1


def _require_domain(p: Point) -> None:
    if not in_domain(p):
        raise ValueError(f"point {tuple(p)} outside the half-open unit square")


def alphabet(lam: Fraction) -> tuple[int, ...]:
    """Symbol values the coding function can take at this parameter."""
    return (0, 1) if lam >= 0 else (0, 1, 2)


def iota(p: Point, lam) -> int:
    """Coding symbol -floor(lam*x - y); rejects points outside the square."""
    lam = require_lambda(as_rational(lam))
    _require_domain(p)
    v = lam * p.x - p.y
    return -(v.__floor__())


def step(p: Point, lam) -> tuple[Point, int]:
    """One application of the map, with the symbol it used."""
    lam = require_lambda(as_rational(lam))
    _require_domain(p)
    v = lam * p.x - p.y
    s = -(v.__floor__())
    return Point(v + s, p.x), s


def involution_g(p: Point) -> Point:
    return Point(p.y, p.x)


def involution_h(p: Point, lam) -> Point:
    """(x, y) -> ({lam*y - x}, y); an involution, and F = h o g."""
    lam = as_rational(lam)
    v = lam * p.y - p.x
    return Point(v - v.__floor__(), p.y)


def step_inverse(p: Point, lam) -> Point:
    """F^-1 via the reversal g o F o g."""
    q, _ = step(involution_g(p), lam)
    return involution_g(q)


@dataclass(frozen=True)
class OrbitRecord:
    """An exact orbit segment: points, code, and the period if one was found.

    Invariants: points[k+1] = F(points[k]) and code[k] is the symbol used at
    points[k]; when period = t, points[t] = points[0] exactly.
    """

    points: tuple[Point, ...]
    code: tuple[int, ...]
    period: Optional[int] = None


def iterate(p: Point, lam, steps: int) -> OrbitRecord:
    """Exact orbit of length ``steps``+1, with exact-equality period detection."""
    lam = require_lambda(as_rational(lam))
    _require_domain(p)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    pts = [p]
    code = []
    period = None
    cur = p
    for t in range(1, steps + 1):
        cur, s = step(cur, lam)
        pts.append(cur)
        code.append(s)
        if period is None and cur == p:
            period = t
    return OrbitRecord(tuple(pts), tuple(code), period)


def detect_period(p: Point, lam, cap: int) -> Optional[int]:
    """Smallest t <= cap with F^t(p) = p exactly, else None."""
    lam = require_lambda(as_rational(lam))
    _require_domain(p)
    xn, yn, den = kernel.point_to_ints(p)
    kind, t, _ = kernel.probe(
        xn, yn, den, lam.numerator, lam.denominator, [], cap, True, False, False
    )
    return t if kind == kernel.PERIOD else None


def orbit_radius(record: OrbitRecord) -> Fraction:
    """min over the orbit of min(x_j, 1 - x_j); requires a periodic record."""
    if record.period is None:
        raise ValueError("radius is defined for periodic orbits only")
    pts = record.points[: record.period]
    return min(min(p.x, 1 - p.x) for p in pts)


# ---------------------------------------------------------------------------
# Branch maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchMap:
    """Affine plane map z -> M z + t with exact entries and det M = 1."""

    matrix: Matrix
    translation: Point

    def apply(self, p: Point) -> Point:
        (a, b), (c, d) = self.matrix
        return Point(a * p.x + b * p.y + self.translation.x,
                     c * p.x + d * p.y + self.translation.y)

    def after(self, other: "BranchMap") -> "BranchMap":
        """Composition self o other."""
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        m = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        t = self.apply(other.translation)
        return BranchMap(m, t)

    @property
    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c


def rotation_matrix(lam: Fraction) -> Matrix:
    return ((lam, Fraction(-1)), (ONE, ZERO))


def branch(symbol: int, lam) -> BranchMap:
    lam = as_rational(lam)
    return BranchMap(rotation_matrix(lam), Point(Fraction(symbol), ZERO))


def branch_compose(word: Sequence[int], lam) -> BranchMap:
    """Composition along a code word, first symbol applied first."""
    if not word:
        raise ValueError("empty code word")
    lam = as_rational(lam)
    composed = branch(word[0], lam)
    for s in word[1:]:
        composed = branch(s, lam).after(composed)
    return composed


def matrix_power(k: int, lam) -> Matrix:
    """Exact k-th power of the rotation matrix via Chebyshev recurrences.

    C^k = T_k(lam/2) I + (U_{k-1}(lam/2)/2) [[lam, -2], [2, -lam]], and for
    negative k the second term changes sign.
    """
    lam = as_rational(lam)
    t, u = chebyshev_pair(abs(k), lam / 2)
    if k < 0:
        u = -u
    half_u = u / 2
    return (
        (t + half_u * lam, -2 * half_u),
        (2 * half_u, t - half_u * lam),
    )


def apply_matrix(m: Matrix, p: Point) -> Point:
    (a, b), (c, d) = m
    return Point(a * p.x + b * p.y, c * p.x + d * p.y)


def map_fixed_point(lam) -> Point:
    """The symmetric fixed point (1/(2-lam), 1/(2-lam))."""
    lam = as_rational(lam)
    v = 1 / (2 - lam)
    return Point(v, v)


def two_cycle(lam) -> tuple[Point, Point]:
    """The symmetric 2-cycle with coordinates (2, lam)/(4 - lam^2)."""
    lam = as_rational(lam)
    d = 4 - lam * lam
    return Point(2 / d, lam / d), Point(lam / d, 2 / d)


__all__ = [
    "BranchMap",
    "OrbitRecord",
    "alphabet",
    "apply_matrix",
    "branch",
    "branch_compose",
    "detect_period",
    "in_domain",
    "involution_g",
    "involution_h",
    "iota",
    "iterate",
    "map_fixed_point",
    "matrix_power",
    "orbit_radius",
    "rotation_matrix",
    "step",
    "step_inverse",
    "two_cycle",
]
