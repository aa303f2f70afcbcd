"""First-return structure on the corner entry triangle.

For small positive parameter the orbit structure outside the main island is
organised by the return map to a thin triangle at the north-east corner of
the square (the *entry domain*).  The return map factors into two
involutions; each has a sequence of regular atoms whose vertices are exact
rational functions of the parameter:

* *inward* atoms, indexed by n, with transit time 4(n-1) and code 1^(4(n-1)),
  bounded by two families of vertex points on the top edge and on the long
  hypotenuse of the triangle;
* *outward* atoms, indexed by m, with transit time 4m+3 and code
  (1,1,1,(0,1)^(2m-1),1,1).

A pair (m, n) whose atoms overlap carries a symmetric periodic point - the
intersection of the two symmetry axes - of period 4(m+n)-1 with the
concatenated code.  Everything that feeds quantitative results (vertex
coordinates, admissibility brackets, the periodic points) is exact; the
verification oracle re-derives periods and codes by exact orbit iteration,
independently of these formulas.

Index admissibility is decided by exact monotone comparison of vertex
coordinates, never by rounding a transcendental expression; the continuous
index diagnostics (used by the crossover solver and the equal-area
diagnostic) are explicitly numeric and live in the ``*_numeric`` helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import mpmath as mp

from . import kernel
from .dynamics import BranchMap, branch_compose, involution_g
from .exact import (
    HALF,
    ONE,
    Point,
    ZERO,
    as_rational,
    chebyshev_pair,
    cross,
    from_field,
    p_sub,
    require_lambda,
    tan_ratio,
    to_field,
)
from .geometry import HalfOpenPolygon, main_sector, polygon_meets_sector

# ---------------------------------------------------------------------------
# Counting the regular families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyCounts:
    """Numbers of regular inward/outward atoms, with a degeneracy flag.

    ``nongeneric`` is set when the defining floor argument sits within
    1e-30 of an integer, in which case the last inward atom degenerates to
    a triangle and callers should treat it specially.
    """

    inward: int
    outward: int
    nongeneric: bool


def rotation_counts(lam, dps: int = 60) -> FamilyCounts:
    """Counts floor(pi/(8 theta) - 1/4) and floor(pi/(4 theta) - 1/2),
    theta = asin(lam/2), evaluated in high precision."""
    lam = require_lambda(as_rational(lam))
    if lam <= 0:
        raise ValueError("counts are defined for positive parameters")
    with mp.workdps(dps):
        theta = mp.asin(mp.mpf(lam.numerator) / lam.denominator / 2)
        xn = mp.pi / (8 * theta) - mp.mpf(1) / 4
        xm = mp.pi / (4 * theta) - mp.mpf(1) / 2
        n = int(mp.floor(xn))
        m = int(mp.floor(xm))
        eps = mp.mpf(10) ** -30
        nongeneric = min(xn - mp.floor(xn), mp.ceil(xn) - xn) < eps or min(
            xm - mp.floor(xm), mp.ceil(xm) - xm
        ) < eps
    return FamilyCounts(n, m, bool(nongeneric))


# ---------------------------------------------------------------------------
# Entry domain
# ---------------------------------------------------------------------------

def hypotenuse_ends(lam) -> tuple[Point, Point]:
    """Endpoints of the long edge of the entry triangle: (g, 1) and (1, g'')."""
    lam = as_rational(lam)
    g = (1 + 2 * lam - lam**2 - lam**3) / (2 - lam**2)
    gpp = 1 / (1 + lam - lam**2)
    return Point(g, ONE), Point(ONE, gpp)


def entry_domain(lam) -> HalfOpenPolygon:
    """The entry triangle, clockwise from the hypotenuse's top endpoint."""
    top, side = hypotenuse_ends(lam)
    return HalfOpenPolygon((top, Point(ONE, ONE), side), (False, False, False))


def entry_halfplanes(lam) -> list[tuple[int, int, int, bool]]:
    """Strict-interior constraints of the entry triangle for the kernel."""
    top, side = hypotenuse_ends(lam)
    # x < 1, y < 1, and strictly above the hypotenuse
    d = p_sub(side, top)
    # cross(d, p - top) > 0 on the interior side
    a = -d.y
    b = d.x
    c = d.y * top.x - d.x * top.y
    return kernel.halfplanes_from_rational(
        [(-1, 0, 1, True), (0, -1, 1, True), (a, b, c, True)]
    )


# ---------------------------------------------------------------------------
# Exact atom vertices
# ---------------------------------------------------------------------------

def vertex_top_out(m: int, lam) -> Point:
    """Top-edge vertex of the m-th outward atom (its symmetry-axis end)."""
    lam = as_rational(lam)
    if m < 1:
        raise ValueError("index must be >= 1")
    return Point(HALF * (1 + 2 * lam + tan_ratio(2 * m + 1, lam)), ONE)


def vertex_low_out(m: int, lam) -> Point:
    """Lower symmetry-axis endpoint of the m-th outward family.

    For m = 0 and m = 1 the axis ends on the right edge of the square and
    the coordinates are the closed forms below; from m = 2 on it ends on
    the hypotenuse line.
    """
    lam = as_rational(lam)
    if m < 0:
        raise ValueError("index must be >= 0")
    if m == 0:
        return Point(ONE, (2 - lam - lam**2) / (2 - 4 * lam**2 + lam**4))
    if m == 1:
        return Point(
            ONE,
            (2 - 2 * lam - 4 * lam**2 + lam**3 + lam**4)
            / (2 - 9 * lam**2 + 6 * lam**4 - lam**6),
        )
    r = tan_ratio(2 * m - 1, lam)
    return Point(
        HALF * (1 + 2 * lam - lam**2 + lam**4 + (1 - 3 * lam**2 + lam**4) * r),
        1 + lam**3 / 2 + lam / 2 * (lam**2 - 2) * r,
    )


def first_atom_interior_vertex(lam) -> Point:
    """Fourth vertex of the m = 1 outward atom (the swap partner of (1,1))."""
    lam = as_rational(lam)
    return Point(
        1 - 2 * lam**2 + 6 * lam**3 + lam**4 - 5 * lam**5 + lam**7,
        1 - lam + 3 * lam**2 + lam**3 - 4 * lam**4 + lam**6,
    )


def second_atom_side_vertices(lam) -> tuple[Point, Point]:
    """The two extra vertices of the hexagonal m = 2 outward atom.

    The first lies on the right edge of the square, the second just inside;
    the outward involution swaps them.
    """
    lam = as_rational(lam)
    den = 1 - 6 * lam**2 + 5 * lam**4 - lam**6
    upper = Point(ONE, (1 - lam - 3 * lam**2 + lam**3 + lam**4) / den)
    inner = Point(
        (1 - 6 * lam**2 - 3 * lam**3 + 11 * lam**4 + 4 * lam**5 - 12 * lam**6
         - lam**7 + 6 * lam**8 - lam**10) / den,
        (1 - lam - 4 * lam**2 + 3 * lam**3 + 4 * lam**4 - 7 * lam**5 - lam**6
         + 5 * lam**7 - lam**9) / den,
    )
    return upper, inner


@lru_cache(maxsize=256)
def _cos_sin_pair(n: int, lam: Fraction) -> tuple[Fraction, Fraction]:
    """(cos(4 n theta), sqrt(4 - lam^2) sin(4 n theta)) as exact rationals.

    Cached: admissibility checks and the periodic-point formula ask for the
    same indices back to back, and large indices are costly.
    """
    t, u = chebyshev_pair(4 * n, lam / 2)
    lq = to_field(lam)
    return t, from_field((lq * lq - 4) / 2 * to_field(u))


def vertex_top_in(n: int, lam) -> Point:
    """Top-edge vertex of the n-th inward family (n = 0 gives the corner)."""
    lam = as_rational(lam)
    if n < 0:
        raise ValueError("index must be >= 0")
    c, s = _cos_sin_pair(n, lam)
    c, s, lq = to_field(c), to_field(s), to_field(lam)
    x = (2 - lq - lq**2 - s + (2 + lq) * c) / (-lq * s + (4 - lq**2) * c)
    return Point(from_field(x), ONE)


_Q1_COEFFS: Callable[[Fraction], tuple[Fraction, ...]] = lambda lam: (
    2 - lam - 7 * lam**2 + 3 * lam**3 + 5 * lam**4 - lam**5 - lam**6,   # a
    -1 - 2 * lam - lam**2 + 2 * lam**3 + lam**4,                        # b
    2 + lam - 6 * lam**2 - 3 * lam**3 + 2 * lam**4 + lam**5,            # c
    -lam * (5 - 5 * lam**2 + lam**4),                                   # d
    (4 - lam**2) * (1 - 3 * lam**2 + lam**4),                           # e
    -lam * (4 - 2 * lam - 4 * lam**2 + lam**3 + lam**4),                # f
    lam * (-3 - lam + 2 * lam**2 + lam**3),                             # g
    4 - 7 * lam**2 - 3 * lam**3 + 2 * lam**4 + lam**5,                  # h
)


def vertex_low_in(n: int, lam) -> Point:
    """Hypotenuse vertex of the n-th inward family (n = 0 gives the corner)."""
    lam = as_rational(lam)
    if n < 0:
        raise ValueError("index must be >= 0")
    c, s = _cos_sin_pair(n, lam)
    c, s = to_field(c), to_field(s)
    a, b, cc, d, e, f, g, h = (to_field(v) for v in _Q1_COEFFS(lam))
    den = d * s + e * c
    return Point(from_field((a + b * s + cc * c) / den),
                 from_field((f + g * s + h * c) / den))


# ---------------------------------------------------------------------------
# Numeric vertex evaluation (continuous index diagnostics)
# ---------------------------------------------------------------------------

class NumericVertices:
    """mpmath evaluations of the vertex formulas, allowing continuous
    indices; used by the crossover solver, the covering ledger, and the
    equal-area diagnostic.  Not used for any admissibility decision."""

    def __init__(self, lam, dps: int = 40):
        lam = as_rational(lam)
        self.lam_exact = lam
        self.dps = dps
        with mp.workdps(dps):
            self.lam = mp.mpf(lam.numerator) / lam.denominator
            self.theta = mp.asin(self.lam / 2)

    def tan_ratio(self, k):
        return mp.tan(self.theta) / mp.tan(k * self.theta)

    def top_out(self, m):
        return (0.5 * (1 + 2 * self.lam + self.tan_ratio(2 * m + 1)), mp.mpf(1))

    def low_out(self, m):
        lam = self.lam
        if m == 0:
            return (mp.mpf(1), (2 - lam - lam**2) / (2 - 4 * lam**2 + lam**4))
        if m == 1:
            return (
                mp.mpf(1),
                (2 - 2 * lam - 4 * lam**2 + lam**3 + lam**4)
                / (2 - 9 * lam**2 + 6 * lam**4 - lam**6),
            )
        r = self.tan_ratio(2 * m - 1)
        return (
            0.5 * (1 + 2 * lam - lam**2 + lam**4 + (1 - 3 * lam**2 + lam**4) * r),
            1 + lam**3 / 2 + lam / 2 * (lam**2 - 2) * r,
        )

    def _cs(self, n):
        return mp.cos(4 * n * self.theta), mp.sqrt(4 - self.lam**2) * mp.sin(
            4 * n * self.theta
        )

    def top_in(self, n):
        lam = self.lam
        c, s = self._cs(n)
        return (
            (2 - lam - lam**2 - s + (2 + lam) * c) / (-lam * s + (4 - lam**2) * c),
            mp.mpf(1),
        )

    def low_in(self, n):
        lam = self.lam
        c, s = self._cs(n)
        a, b, cc, d, e, f, g, h = (
            2 - lam - 7 * lam**2 + 3 * lam**3 + 5 * lam**4 - lam**5 - lam**6,
            -1 - 2 * lam - lam**2 + 2 * lam**3 + lam**4,
            2 + lam - 6 * lam**2 - 3 * lam**3 + 2 * lam**4 + lam**5,
            -lam * (5 - 5 * lam**2 + lam**4),
            (4 - lam**2) * (1 - 3 * lam**2 + lam**4),
            -lam * (4 - 2 * lam - 4 * lam**2 + lam**3 + lam**4),
            lam * (-3 - lam + 2 * lam**2 + lam**3),
            4 - 7 * lam**2 - 3 * lam**3 + 2 * lam**4 + lam**5,
        )
        den = d * s + e * c
        return ((a + b * s + cc * c) / den, (f + g * s + h * c) / den)

    def tau_of_index(self, n):
        return mp.tan(mp.pi / 4 - 2 * n * self.theta)

    def index_of_top_x(self, x, hint=None):
        """Continuous inward index with top_in(index)_x = x (monotone bisection)."""
        count = mp.pi / (8 * self.theta)
        lo, hi = mp.mpf(0), count
        for _ in range(self.dps * 4):
            mid = (lo + hi) / 2
            if self.top_in(mid)[0] > x:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    def index_of_low_x(self, x):
        """Continuous inward index with low_in(index)_x = x (monotone bisection)."""
        count = mp.pi / (8 * self.theta)
        lo, hi = mp.mpf(0), count
        for _ in range(self.dps * 4):
            mid = (lo + hi) / 2
            if self.low_in(mid)[0] > x:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    def intersection_point(self, m, n):
        """Axis intersection with both indices continuous (diagnostic twin
        of ``fixed_point``)."""
        u = self.top_out(m)
        v = self.top_in(n - 1)
        w = _v_sub(self.low_out(m - 1), u)
        z = _v_sub(self.low_in(n), v)
        den = w[0] * z[1] - w[1] * z[0]
        uw = u[0] * w[1] - u[1] * w[0]
        vz = v[0] * z[1] - v[1] * z[0]
        return ((-z[0] * uw + w[0] * vz) / den, (-z[1] * uw + w[1] * vz) / den)


def _v_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


# ---------------------------------------------------------------------------
# Atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomRecord:
    """A regular atom with its polygon, transit time and expected code."""

    kind: str  # "in" | "out" | "intersection"
    indices: tuple[int, ...]
    polygon: HalfOpenPolygon
    transit_time: int
    expected_code: tuple[int, ...]
    degenerate: bool = False


def inward_code(n: int) -> tuple[int, ...]:
    return (1,) * (4 * (n - 1))


def outward_code(m: int) -> tuple[int, ...]:
    return (1, 1, 1) + (0, 1) * (2 * m - 1) + (1, 1)


def cycle_code(m: int, n: int) -> tuple[int, ...]:
    """Code of the symmetric periodic orbit for an admissible pair."""
    return (1,) * (4 * n - 1) + (0, 1) * (2 * m - 1) + (1, 1)


def atom_in(n: int, lam, counts: Optional[FamilyCounts] = None) -> AtomRecord:
    """The n-th inward atom; requires 1 <= n <= inward count - 1."""
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    if not 1 <= n <= counts.inward - 1:
        raise ValueError(f"inward index {n} outside 1..{counts.inward - 1}")
    verts = (
        vertex_top_in(n, lam),
        vertex_top_in(n - 1, lam),
        vertex_low_in(n - 1, lam),
        vertex_low_in(n, lam),
    )
    degenerate = counts.nongeneric and n == counts.inward - 1
    poly = HalfOpenPolygon(verts, (False, False, True, True))
    return AtomRecord("in", (n,), poly, 4 * (n - 1), inward_code(n), degenerate)


def atom_out(m: int, lam, counts: Optional[FamilyCounts] = None) -> AtomRecord:
    """The m-th outward atom: quadrilateral for m = 1 and m >= 3, hexagon
    for m = 2, with the half-open boundary convention of the family."""
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    if not 1 <= m <= counts.outward:
        raise ValueError(f"outward index {m} outside 1..{counts.outward}")
    if m == 1:
        verts = (
            vertex_top_out(1, lam),
            Point(ONE, ONE),
            vertex_low_out(0, lam),
            first_atom_interior_vertex(lam),
        )
        flags = (False, False, False, False)
    elif m == 2:
        upper, inner = second_atom_side_vertices(lam)
        verts = (
            vertex_top_out(2, lam),
            vertex_top_out(1, lam),
            upper,
            vertex_low_out(1, lam),
            inner,
            vertex_low_out(2, lam),
        )
        flags = (False, True, False, False, True, False)
    else:
        verts = (
            vertex_top_out(m, lam),
            vertex_top_out(m - 1, lam),
            vertex_low_out(m - 1, lam),
            vertex_low_out(m, lam),
        )
        flags = (False, True, True, False)
    poly = HalfOpenPolygon(verts, flags)
    return AtomRecord("out", (m,), poly, 4 * m + 3, outward_code(m))


# ---------------------------------------------------------------------------
# Admissibility and fixed points
# ---------------------------------------------------------------------------

def admissible(m: int, n: int, lam, counts: Optional[FamilyCounts] = None) -> bool:
    """Exact test that the (m, n) atoms intersect in a symmetric point.

    The two inequalities compare vertex coordinates only; the second is
    automatic for m <= 2, where the outward axis ends on the right edge.
    """
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    if not (1 <= m <= counts.outward and 1 <= n <= counts.inward - 1):
        return False
    if not vertex_top_out(m, lam).x < vertex_top_in(n - 1, lam).x:
        return False
    if m <= 2:
        return True
    return vertex_low_out(m - 1, lam).x > vertex_low_in(n, lam).x


def _last_true(pred, lo: int, hi: int, guess: int) -> int:
    """Largest k in [lo, hi] with pred(k), pred monotone true-then-false;
    lo-1 when none.  ``guess`` only shortens the exact walk."""
    g = min(max(guess, lo), hi)
    if pred(g):
        while g < hi and pred(g + 1):
            g += 1
        return g
    while g > lo:
        g -= 1
        if pred(g):
            return g
    return lo - 1


def n_bounds(m: int, lam, counts: Optional[FamilyCounts] = None) -> tuple[int, int]:
    """Integer bracket of inward indices admissible with m.

    Both ends are decided by exact monotone comparisons of vertex
    abscissas; a floating estimate merely seeds the search position (large
    indices are expensive to evaluate exactly).  An empty bracket comes
    back as (lo, hi) with lo > hi.
    """
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    if not 1 <= m <= counts.outward:
        raise ValueError(f"outward index {m} outside 1..{counts.outward}")
    n_max = counts.inward - 1
    nv = NumericVertices(lam, 30)

    top_limit = vertex_top_out(m, lam).x
    if not vertex_top_in(0, lam).x > top_limit:
        return (1, 0)
    with mp.workdps(30):
        guess_plus = int(mp.floor(nv.index_of_top_x(nv.top_out(m)[0])))
    last = _last_true(lambda k: vertex_top_in(k, lam).x > top_limit, 0, n_max, guess_plus)
    n_plus = min(last + 1, n_max)

    if m <= 2:
        n_minus = 1
    else:
        low_limit = vertex_low_out(m - 1, lam).x
        with mp.workdps(30):
            guess_minus = int(mp.floor(nv.index_of_low_x(nv.low_out(m - 1)[0])))
        last = _last_true(
            lambda k: vertex_low_in(k, lam).x >= low_limit, 1, n_max + 1, guess_minus
        )
        n_minus = last + 1
        if n_minus > n_max:
            return (n_minus, n_max)
    return (n_minus, n_plus)


def atom_intersection(m: int, n: int, lam,
                      counts: Optional[FamilyCounts] = None) -> AtomRecord:
    """Overlap atom of an admissible pair: the convex intersection of the
    outward and inward atoms, carrying the full cycle transit and code."""
    from .geometry import polygon_clip

    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    if not admissible(m, n, lam, counts):
        raise ValueError(f"pair (m={m}, n={n}) is not admissible at {lam}")
    poly = polygon_clip(atom_out(m, lam, counts).polygon,
                        atom_in(n, lam, counts).polygon)
    if poly is None:
        raise RuntimeError("admissible pair produced an empty intersection")
    return AtomRecord("intersection", (m, n), poly, 4 * (m + n) - 1, cycle_code(m, n))


@dataclass(frozen=True)
class FixedPointRecord:
    """A symmetric periodic point of the return map and its claimed data."""

    m: int
    n: int
    point: Point
    period: int
    code: tuple[int, ...]
    verified: bool = False
    observed_period: Optional[int] = None
    observed_code: Optional[tuple[int, ...]] = None


def fixed_point(m: int, n: int, lam, counts: Optional[FamilyCounts] = None) -> FixedPointRecord:
    """Intersection of the two symmetry axes for an admissible pair."""
    lam = as_rational(lam)
    if not admissible(m, n, lam, counts):
        raise ValueError(f"pair (m={m}, n={n}) is not admissible at {lam}")
    u = tuple(map(to_field, vertex_top_out(m, lam)))
    v = tuple(map(to_field, vertex_top_in(n - 1, lam)))
    p1 = tuple(map(to_field, vertex_low_out(m - 1, lam)))
    q1 = tuple(map(to_field, vertex_low_in(n, lam)))
    w = (p1[0] - u[0], p1[1] - u[1])
    z = (q1[0] - v[0], q1[1] - v[1])
    den = cross(w, z)
    uw = cross(u, w)
    vz = cross(v, z)
    pt = Point(from_field((-z[0] * uw + w[0] * vz) / den),
               from_field((-z[1] * uw + w[1] * vz) / den))
    return FixedPointRecord(m, n, pt, 4 * (m + n) - 1, cycle_code(m, n))


def verify_fixed_point(rec: FixedPointRecord, lam) -> FixedPointRecord:
    """Exact-iteration oracle: the orbit must first return to the point at
    exactly the claimed period, with exactly the claimed code."""
    lam = require_lambda(as_rational(lam))
    xn, yn, den = kernel.point_to_ints(rec.point)
    p, q = lam.numerator, lam.denominator
    kind, t, code = kernel.probe(xn, yn, den, p, q, [], rec.period + 1, True, False, True)
    ok = kind == kernel.PERIOD and t == rec.period and tuple(code) == rec.code
    return replace(
        rec,
        verified=ok,
        observed_period=t if kind == kernel.PERIOD else None,
        observed_code=tuple(code),
    )


def admissible_pairs(lam, m_max: int, counts: Optional[FamilyCounts] = None):
    """All admissible (m, n) with m <= m_max, ascending."""
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    out = []
    for m in range(1, min(m_max, counts.outward) + 1):
        lo, hi = n_bounds(m, lam, counts)
        for n in range(lo, hi + 1):
            out.append((m, n))
    return out


# ---------------------------------------------------------------------------
# Involution verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvolutionReport:
    kind: str
    indices: tuple[int, ...]
    involutive: bool
    vertex_map_ok: bool
    stays_clear_of_sector: Optional[bool]
    failures: tuple[str, ...] = ()


def verify_atom_involution(atom: AtomRecord, lam) -> InvolutionReport:
    """Check the involution acts on the atom as the theory prescribes.

    The composed map (branch word after the mirror) must square to the
    identity, fix the two symmetry-axis vertices, swap the other pair(s),
    and - for outward atoms - keep every intermediate image polygon away
    from the open corner sector.
    """
    lam = as_rational(lam)
    failures: list[str] = []
    word = atom.expected_code

    # the inward return is mirror-after-word, the outward one word-after-mirror
    gm = BranchMap(((ZERO, ONE), (ONE, ZERO)), Point(ZERO, ZERO))
    if word:
        comp = branch_compose(word, lam)
        lmap = gm.after(comp) if atom.kind == "in" else comp.after(gm)
    else:
        lmap = gm

    def mapped(p: Point) -> Point:
        return lmap.apply(p)

    # involution property as an exact affine identity
    sq = lmap.after(lmap)
    involutive = sq.matrix == ((ONE, ZERO), (ZERO, ONE)) and sq.translation == Point(
        ZERO, ZERO
    )
    if not involutive:
        failures.append("composed map does not square to the identity")

    verts = atom.polygon.vertices
    if atom.kind == "in":
        n = atom.indices[0]
        fixed = (vertex_low_in(n, lam), vertex_top_in(n - 1, lam))
        swaps = [(vertex_top_in(n, lam), vertex_low_in(n - 1, lam))]
    else:
        m = atom.indices[0]
        fixed = (vertex_top_out(m, lam), vertex_low_out(m - 1, lam))
        if m == 1:
            swaps = [(Point(ONE, ONE), first_atom_interior_vertex(lam))]
        elif m == 2:
            upper, inner = second_atom_side_vertices(lam)
            swaps = [(vertex_top_out(1, lam), vertex_low_out(2, lam)), (upper, inner)]
        else:
            swaps = [(vertex_top_out(m - 1, lam), vertex_low_out(m, lam))]

    vertex_ok = True
    for p in fixed:
        if mapped(p) != p:
            vertex_ok = False
            failures.append(f"axis vertex {tuple(p)} not fixed")
    for p, q in swaps:
        if mapped(p) != q or mapped(q) != p:
            vertex_ok = False
            failures.append(f"vertices {tuple(p)} and {tuple(q)} not swapped")

    sector_ok: Optional[bool] = None
    if atom.kind == "out":
        sector = main_sector(lam)
        sector_ok = True
        current = [involution_g(v) for v in verts]
        for step_idx, sym in enumerate(word[:-1], start=1):
            bm = branch_compose((sym,), lam)
            current = [bm.apply(v) for v in current]
            if polygon_meets_sector(current, sector):
                sector_ok = False
                failures.append(f"intermediate image {step_idx} meets the corner sector")
                break

    return InvolutionReport(
        atom.kind,
        atom.indices,
        involutive,
        vertex_ok,
        sector_ok,
        tuple(failures),
    )


# ---------------------------------------------------------------------------
# Crossover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossoverRecord:
    """Family index at which the two vertex ladders align, with the
    perturbative series value for comparison."""

    m_root: mp.mpf
    n_root: mp.mpf
    m_series: mp.mpf
    n_series: mp.mpf


def crossover(lam, dps: int = 50) -> CrossoverRecord:
    """Solve (4 m + 4 n(m) + 3) asin(lam/2) = pi/2 for the continuous
    outward index, n(m) being the continuous inward index of the outward
    atom's top vertex; also evaluate the asymptotic series for both."""
    lam = require_lambda(as_rational(lam))
    if lam <= 0:
        raise ValueError("crossover is defined for positive parameters")
    nv = NumericVertices(lam, dps)
    with mp.workdps(dps):
        theta = nv.theta
        lamf = nv.lam

        def n_of_m(m):
            return nv.index_of_top_x(nv.top_out(m)[0])

        def phi(m):
            return (4 * m + 4 * n_of_m(m) + 3) * theta - mp.pi / 2

        lo, hi = mp.mpf(1), mp.pi / (4 * theta)
        if phi(lo) > 0:
            raise ValueError("no crossover in range")
        for _ in range(dps * 4):
            mid = (lo + hi) / 2
            if phi(mid) <= 0:
                lo = mid
            else:
                hi = mid
        m_root = (lo + hi) / 2
        n_root = n_of_m(m_root)
        m_series = (1 / mp.sqrt(2 * lamf)) * (
            1 + lamf / 3 + lamf**2 / 120 + 31 * lamf**3 / 1008
        )
        n_series = (
            mp.pi / (4 * lamf)
            - 1 / mp.sqrt(2 * lamf)
            - mp.mpf(3) / 4
            - mp.sqrt(lamf) / (3 * mp.sqrt(2))
            - mp.pi * lamf / 96
            - lamf ** mp.mpf("1.5") / (120 * mp.sqrt(2))
        )
        return CrossoverRecord(m_root, n_root, m_series, n_series)


# ---------------------------------------------------------------------------
# Return-code scanning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeFamily:
    code: tuple[int, ...]
    transit_time: Optional[int]
    sample_count: int


@dataclass(frozen=True)
class ScanReport:
    families: tuple[CodeFamily, ...]
    unresolved: int
    boundary_discards: int
    samples: int


def scan_return_codes(
    region: HalfOpenPolygon,
    lam,
    max_steps: int,
    grid: int = 48,
    fixed_steps: Optional[int] = None,
) -> ScanReport:
    """Sample a convex region on a dyadic barycentric grid and group the
    first-return codes to the entry triangle.

    With ``fixed_steps`` the orbit is cut after exactly that many steps and
    the code up to there is recorded instead (used for the four-step sector
    codes).  Samples that land exactly on the coding discontinuity are
    discarded and counted separately.
    """
    lam = require_lambda(as_rational(lam))
    p, q = lam.numerator, lam.denominator
    planes = entry_halfplanes(lam)
    groups: dict[tuple[Optional[int], tuple[int, ...]], int] = {}
    unresolved = 0
    discarded = 0
    samples = 0
    verts = region.vertices
    anchor = verts[0]
    fans = [(verts[i], verts[i + 1]) for i in range(1, len(verts) - 1)]
    for b, c in fans:
        for i in range(1, grid):
            for j in range(1, grid - i):
                s = Fraction(i, grid)
                t = Fraction(j, grid)
                x = anchor.x + s * (b.x - anchor.x) + t * (c.x - anchor.x)
                y = anchor.y + s * (b.y - anchor.y) + t * (c.y - anchor.y)
                samples += 1
                xn, yn, den = kernel.point_to_ints(Point(x, y))
                if fixed_steps is not None:
                    (_, code, on_b) = kernel.orbit_code(xn, yn, den, p, q, fixed_steps)
                    if on_b:
                        discarded += 1
                        continue
                    groups[(fixed_steps, tuple(code))] = (
                        groups.get((fixed_steps, tuple(code)), 0) + 1
                    )
                    continue
                kind, t_hit, code = kernel.probe(
                    xn, yn, den, p, q, planes, max_steps, False, True, True
                )
                if kind == kernel.BOUNDARY:
                    discarded += 1
                elif kind == kernel.HIT:
                    groups[(t_hit, tuple(code))] = groups.get((t_hit, tuple(code)), 0) + 1
                else:
                    unresolved += 1
    families = tuple(
        CodeFamily(code, t, count)
        for (t, code), count in sorted(groups.items(), key=lambda kv: (-kv[1], kv[0][0] or 0))
    )
    return ScanReport(families, unresolved, discarded, samples)


def side_pocket(lam) -> HalfOpenPolygon:
    """The small triangle between the first outward atom and the right edge.

    Its mirror (swap coordinates) is the natural scan region for the slow
    outward excursions: families of codes shadowing the short cycles
    outside the corner sector accumulate there.
    """
    lam = as_rational(lam)
    axis_end = vertex_low_out(0, lam)
    top = vertex_top_out(1, lam)
    interior = first_atom_interior_vertex(lam)
    t = (1 - top.x) / (interior.x - top.x)
    on_edge = Point(ONE, top.y + t * (interior.y - top.y))
    return HalfOpenPolygon((axis_end, on_edge, interior), (False, False, False))


def mirrored(region: HalfOpenPolygon) -> HalfOpenPolygon:
    verts = tuple(Point(v.y, v.x) for v in region.vertices)
    return HalfOpenPolygon(verts, region.edge_included)


_TEN_BLOCK = (1, 1, 0, 1, 1, 0, 1, 0, 1, 0)
_THREE_BLOCK = (1, 1, 0)


def pocket_family_code(family: str, m: int) -> tuple[tuple[int, ...], int]:
    """Expected code and transit time of the three pocket families.

    'A': 1 X^(2m-1) 110111           transit 20m - 3
    'B': 1 Y^(4m) 111                transit 12m + 4
    'C': 1 Y^(4m-1) X Y^(4m) 111     transit 24m + 11
    with X the ten-symbol block 1101101010 and Y the block 110.
    """
    if family == "A":
        return (1,) + _TEN_BLOCK * (2 * m - 1) + (1, 1, 0, 1, 1, 1), 20 * m - 3
    if family == "B":
        return (1,) + _THREE_BLOCK * (4 * m) + (1, 1, 1), 12 * m + 4
    if family == "C":
        return (
            (1,) + _THREE_BLOCK * (4 * m - 1) + _TEN_BLOCK + _THREE_BLOCK * (4 * m) + (1, 1, 1),
            24 * m + 11,
        )
    raise ValueError("family must be 'A', 'B' or 'C'")


def classify_pocket_code(code: tuple[int, ...], transit: int) -> Optional[tuple[str, int]]:
    for family, period_fn in (("A", lambda m: 20 * m - 3), ("B", lambda m: 12 * m + 4),
                              ("C", lambda m: 24 * m + 11)):
        m, rem = _invert_affine(family, transit)
        if m is not None and pocket_family_code(family, m)[0] == code:
            return family, m
    return None


def _invert_affine(family: str, transit: int):
    if family == "A":
        m, rem = divmod(transit + 3, 20)
    elif family == "B":
        m, rem = divmod(transit - 4, 12)
    else:
        m, rem = divmod(transit - 11, 24)
    if rem != 0 or m < 1:
        return None, rem
    return m, 0
