"""Exact planar geometry for the square map.

Lengths and areas are measured with the invariant inner product

    q(u, v) = u_x v_x + u_y v_y - (lam/2)(u_x v_y + u_y v_x),

under which every branch map is an isometry; at lam = 0 it is the Euclidean
one.  Areas split into an exact rational shoelace part and the common metric
factor sqrt(1 - lam^2/4), which is applied only when a numeric value is
requested, so all comparisons stay rational.

Segments of the discontinuity structure are kept in *lifted* coordinates:
an image segment that crosses the generating vertical line is stored
unbroken, with the part that would wrap around carrying coordinates shifted
by one.  Under this convention one application of the map to a segment is a
single affine image, optionally split where the segment crosses the
generator, and optionally translated back into the square; the generator's
orientation (first endpoint included, second excluded) propagates through.

Polygons are convex, listed clockwise, with a per-edge inclusion flag
(half-open boundary).  Sectors - the corner regions between an invariant
ellipse and its two tangent lines - are handled by exact predicates, never
materialised as polygons with arcs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath as mp

from .exact import ONE, Point, ZERO, as_rational, cross, p_sub
from .dynamics import map_fixed_point


# ---------------------------------------------------------------------------
# Quadratic form
# ---------------------------------------------------------------------------

def q_inner(u, v, lam) -> Fraction:
    lam = as_rational(lam)
    return u[0] * v[0] + u[1] * v[1] - lam / 2 * (u[0] * v[1] + u[1] * v[0])


def q_norm_sq(u, lam) -> Fraction:
    return q_inner(u, u, lam)


def metric_factor_sq(lam) -> Fraction:
    """Square of the area scale between shoelace and q-area."""
    lam = as_rational(lam)
    return 1 - lam * lam / 4


def q_dist_sq_to_line(p: Point, a: Point, b: Point, lam) -> Fraction:
    """Squared q-distance from p to the line through a, b."""
    u = p_sub(p, a)
    v = p_sub(b, a)
    return q_norm_sq(u, lam) - q_inner(u, v, lam) ** 2 / q_norm_sq(v, lam)


def ellipse_radius_sq(lam) -> Fraction:
    """Squared q-radius of the main invariant ellipse, (1-lam)^2 (2+lam) / (4(2-lam))."""
    lam = as_rational(lam)
    return (1 - lam) ** 2 * (2 + lam) / (4 * (2 - lam))


# ---------------------------------------------------------------------------
# Polygons
# ---------------------------------------------------------------------------

def signed_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed shoelace area (negative for clockwise lists)."""
    total = ZERO
    n = len(vertices)
    for i in range(n):
        total += cross(vertices[i], vertices[(i + 1) % n])
    return total


@dataclass(frozen=True)
class HalfOpenPolygon:
    """Convex polygon, clockwise vertices, per-edge inclusion flags.

    Edge i runs from vertices[i] to vertices[i+1 mod n]; a boundary point on
    edge i belongs to the polygon iff edge_included[i].  A point sitting on
    a vertex is resolved by the flag of the edge starting there.
    """

    vertices: tuple[Point, ...]
    edge_included: tuple[bool, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edge_included):
            raise ValueError("one inclusion flag per edge required")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated vertex in polygon")

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n], self.edge_included[i]

    def contains(self, p: Point, *, strict: bool = False) -> bool:
        n = len(self.vertices)
        on_edges = []
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            side = cross(p_sub(b, a), p_sub(p, a))
            if side > 0:
                return False
            if side == 0:
                on_edges.append(i)
        if not on_edges:
            return True
        if strict:
            return False
        if p in self.vertices:
            i = self.vertices.index(p)
            return self.edge_included[i]
        return all(self.edge_included[i] for i in on_edges)

    def shoelace_area(self) -> Fraction:
        a2 = signed_area2(self.vertices)
        if a2 == 0:
            raise ValueError("degenerate polygon")
        return abs(a2) / 2


def polygon(vertices: Iterable[Point], included: Iterable[bool] | None = None) -> HalfOpenPolygon:
    verts = tuple(vertices)
    if included is None:
        flags = tuple(False for _ in verts)
    else:
        flags = tuple(bool(f) for f in included)
    return HalfOpenPolygon(verts, flags)


def _check_simple(vertices: Sequence[Point]) -> None:
    n = len(vertices)
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    if len(set(vertices)) != n:
        raise ValueError("repeated vertex")
    for i in range(n):
        a1, a2 = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j in (i, (i + 1) % n) or (j + 1) % n == i:
                continue
            b1, b2 = vertices[j], vertices[(j + 1) % n]
            if _segments_cross(a1, a2, b1, b2):
                raise ValueError("self-intersecting polygon")


def _segments_cross(a1, a2, b1, b2) -> bool:
    d1 = cross(p_sub(a2, a1), p_sub(b1, a1))
    d2 = cross(p_sub(a2, a1), p_sub(b2, a1))
    d3 = cross(p_sub(b2, b1), p_sub(a1, b1))
    d4 = cross(p_sub(b2, b1), p_sub(a2, b1))
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def q_area(poly: HalfOpenPolygon, lam) -> tuple[Fraction, Fraction]:
    """(exact shoelace area, squared metric factor 1 - lam^2/4).

    The metric area is shoelace * sqrt(factor); the square root is left
    symbolic so the return value stays exact.
    """
    _check_simple(poly.vertices)
    return poly.shoelace_area(), metric_factor_sq(lam)


def q_area_numeric(poly: HalfOpenPolygon, lam, dps: int = 30):
    area, fac2 = q_area(poly, lam)
    with mp.workdps(dps):
        return mp.mpf(area.numerator) / area.denominator * mp.sqrt(
            mp.mpf(fac2.numerator) / fac2.denominator
        )


# ---------------------------------------------------------------------------
# Oriented segments and images under the map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedSegment:
    """Plane segment with endpoint inclusion flags, in lifted coordinates."""

    first: Point
    second: Point
    include_first: bool = True
    include_second: bool = False

    def swapped(self) -> "OrientedSegment":
        return OrientedSegment(
            Point(self.first.y, self.first.x),
            Point(self.second.y, self.second.x),
            self.include_first,
            self.include_second,
        )

    def translated(self, dx: Fraction, dy: Fraction) -> "OrientedSegment":
        return OrientedSegment(
            Point(self.first.x + dx, self.first.y + dy),
            Point(self.second.x + dx, self.second.y + dy),
            self.include_first,
            self.include_second,
        )


def generator_segment() -> OrientedSegment:
    """The generating segment: (0,0) included to (0,1) excluded."""
    return OrientedSegment(Point(ZERO, ZERO), Point(ZERO, ONE), True, False)


def _split_at_vertical(seg: OrientedSegment) -> list[OrientedSegment]:
    """Split at x = 0 and translate the negative part into the square.

    The split point stays with the non-negative piece (the map is continuous
    from that side).
    """
    ax, bx = seg.first.x, seg.second.x
    if ax >= 0 and bx >= 0:
        return [seg]
    if ax <= 0 and bx <= 0:
        return [seg.translated(ONE, ZERO)]
    t = ax / (ax - bx)
    y_split = seg.first.y + t * (seg.second.y - seg.first.y)
    split = Point(ZERO, y_split)
    left = OrientedSegment(seg.first, split, seg.include_first, False)
    right = OrientedSegment(split, seg.second, True, seg.include_second)
    if ax < 0:
        return [left.translated(ONE, ZERO), right]
    return [left, right.translated(ONE, ZERO)]


def segment_image(seg: OrientedSegment, lam) -> list[OrientedSegment]:
    """Image of a lifted segment under one map step.

    The image is computed with the translation-free branch, so a piece whose
    coding symbol changes along its length comes out as one lifted segment
    crossing x = 0; a piece mapped entirely to non-positive x is translated
    back into the square.  Pieces are returned in parameter order.
    """
    lam = as_rational(lam)
    out = []
    for piece in _split_at_vertical(seg):
        a, b = piece.first, piece.second
        ia = Point(lam * a.x - a.y, a.x)
        ib = Point(lam * b.x - b.y, b.x)
        img = OrientedSegment(ia, ib, piece.include_first, piece.include_second)
        if max(ia.x, ib.x) <= 0:
            img = img.translated(ONE, ZERO)
        out.append(img)
    return out


def segments_image(segs: Iterable[OrientedSegment], lam) -> list[OrientedSegment]:
    out = []
    for s in segs:
        out.extend(segment_image(s, lam))
    return out


def segments_preimage(segs: Iterable[OrientedSegment], lam) -> list[OrientedSegment]:
    """Preimage under the map, via reversal: F^-1 = g o F o g."""
    mirrored = [s.swapped() for s in segs]
    return [s.swapped() for s in segments_image(mirrored, lam)]


def discontinuity_set(lam, depth: int) -> dict[int, list[OrientedSegment]]:
    """All images of the generator for |t| <= depth, keyed by iterate index."""
    lam = as_rational(lam)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    table: dict[int, list[OrientedSegment]] = {0: [generator_segment()]}
    for t in range(1, depth + 1):
        table[t] = segments_image(table[t - 1], lam)
    for t in range(1, depth + 1):
        table[-t] = segments_preimage(table[-t + 1], lam)
    return table


def canonical_segment_key(seg: OrientedSegment):
    """Torus-canonical unordered key: translate midpoint into the square."""
    mx = (seg.first.x + seg.second.x) / 2
    my = (seg.first.y + seg.second.y) / 2
    dx = -(mx.__floor__())
    dy = -(my.__floor__())
    a = (seg.first.x + dx, seg.first.y + dy)
    b = (seg.second.x + dx, seg.second.y + dy)
    return (a, b) if a <= b else (b, a)


def torus_pieces(seg: OrientedSegment):
    """Canonical unordered keys of the segment's pieces on the torus.

    The lifted segment is split wherever a coordinate crosses an integer,
    each piece is translated so its midpoint lies in the unit square, and
    zero-length pieces are dropped.  Lifted representations that differ only
    by where they wrap produce identical piece sets.
    """

    def split_axis(pieces, axis):
        out = []
        for a, b in pieces:
            ca, cb = a[axis], b[axis]
            lo, hi = min(ca, cb), max(ca, cb)
            cuts = []
            k = lo.__floor__() + 1
            while k < hi or (k == hi and hi != cb and hi != ca):
                if lo < k < hi:
                    cuts.append(Fraction(k))
                k += 1
            if not cuts:
                out.append((a, b))
                continue
            cuts.sort(key=lambda c: (c - ca) / (cb - ca))
            prev = a
            for c in cuts:
                t = (c - ca) / (cb - ca)
                mid = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
                out.append((prev, mid))
                prev = mid
            out.append((prev, b))
        return out

    pieces = [(seg.first, seg.second)]
    pieces = split_axis(pieces, 0)
    pieces = split_axis(pieces, 1)
    keys = []
    for a, b in pieces:
        if a == b:
            continue
        keys.append(canonical_segment_key(OrientedSegment(a, b)))
    return keys


def _merge_collinear(keys):
    """Merge contiguous collinear pieces so subdivision points don't matter."""
    pieces = [(Point(*a), Point(*b)) for a, b in keys]
    changed = True
    while changed:
        changed = False
        for i in range(len(pieces)):
            if changed:
                break
            for j in range(i + 1, len(pieces)):
                a1, b1 = pieces[i]
                a2, b2 = pieces[j]
                d1 = p_sub(b1, a1)
                if cross(d1, p_sub(b2, a2)) != 0 or cross(d1, p_sub(a2, a1)) != 0:
                    continue
                shared = {a1, b1} & {a2, b2}
                if not shared:
                    continue
                ends = sorted({a1, b1, a2, b2})
                if len(ends) != 3:
                    continue
                pieces[i] = (ends[0], ends[-1])
                del pieces[j]
                changed = True
                break
    return sorted(canonical_segment_key(OrientedSegment(a, b)) for a, b in pieces)


def same_segment_set(xs: Iterable[OrientedSegment], ys: Iterable[OrientedSegment]) -> bool:
    """Setwise equality on the torus: wrap-normalised, merge-normalised."""
    kx = _merge_collinear([k for s in xs for k in torus_pieces(s)])
    ky = _merge_collinear([k for s in ys for k in torus_pieces(s)])
    return kx == ky


# ---------------------------------------------------------------------------
# Segment intersection and convex clipping
# ---------------------------------------------------------------------------

def segment_intersection(a: OrientedSegment, b: OrientedSegment):
    """Exact intersection of two closed segments.

    Returns a Point for a transversal or endpoint meeting, an
    OrientedSegment for a collinear overlap, and None when disjoint.
    """
    p, r = a.first, p_sub(a.second, a.first)
    q, s = b.first, p_sub(b.second, b.first)
    denom = cross(r, s)
    qp = p_sub(q, p)
    if denom == 0:
        if cross(qp, r) != 0:
            return None
        rr = q_dot(r, r)
        t0 = q_dot(qp, r) / rr
        t1 = t0 + q_dot(s, r) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        lo = max(lo, Fraction(0))
        hi = min(hi, Fraction(1))
        if lo > hi:
            return None
        pa = Point(p.x + lo * r.x, p.y + lo * r.y)
        pb = Point(p.x + hi * r.x, p.y + hi * r.y)
        if pa == pb:
            return pa
        return OrientedSegment(pa, pb, True, True)
    t = cross(qp, s) / denom
    u = cross(qp, r) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return Point(p.x + t * r.x, p.y + t * r.y)
    return None


def q_dot(u, v) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def clip_convex_vertices(subject: Sequence[Point], clipper: Sequence[Point]) -> list[Point]:
    """Sutherland-Hodgman intersection of closed convex clockwise polygons."""
    output = list(subject)
    n = len(clipper)
    for i in range(n):
        if not output:
            return []
        a = clipper[i]
        b = clipper[(i + 1) % n]
        edge = p_sub(b, a)
        keep = []
        prev = output[-1]
        prev_side = cross(edge, p_sub(prev, a))
        for cur in output:
            cur_side = cross(edge, p_sub(cur, a))
            if cur_side <= 0:  # inside (clockwise polygons keep the right side)
                if prev_side > 0:
                    keep.append(_line_cut(prev, cur, a, b))
                keep.append(cur)
            elif prev_side <= 0:
                keep.append(_line_cut(prev, cur, a, b))
            prev, prev_side = cur, cur_side
        deduped = []
        for v in keep:
            if not deduped or deduped[-1] != v:
                deduped.append(v)
        if len(deduped) > 1 and deduped[0] == deduped[-1]:
            deduped.pop()
        output = deduped
    return output


def _line_cut(p: Point, q: Point, a: Point, b: Point) -> Point:
    d = p_sub(q, p)
    e = p_sub(b, a)
    denom = cross(e, d)
    t = cross(e, p_sub(a, p)) / denom
    return Point(p.x + t * d.x, p.y + t * d.y)


def polygon_clip(a: HalfOpenPolygon, b: HalfOpenPolygon) -> Optional[HalfOpenPolygon]:
    """Convex intersection with inclusion flags inherited from the parents.

    An output edge collinear with an edge of a parent takes that parent's
    flag (both parents' flags must agree to be included when collinear with
    both); freshly cut edges take the clipping parent's flag.
    """
    verts = clip_convex_vertices(a.vertices, b.vertices)
    if len(verts) < 3:
        return None

    def edge_flag(u: Point, v: Point) -> bool:
        flags = []
        for parent in (a, b):
            for pa, pb, inc in parent.edges():
                if cross(p_sub(pb, pa), p_sub(u, pa)) == 0 and cross(
                    p_sub(pb, pa), p_sub(v, pa)
                ) == 0:
                    flags.append(inc)
                    break
        if not flags:
            return False
        return all(flags)

    n = len(verts)
    flags = tuple(edge_flag(verts[i], verts[(i + 1) % n]) for i in range(n))
    return HalfOpenPolygon(tuple(verts), flags)


# ---------------------------------------------------------------------------
# Sectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorSpec:
    """Corner region outside an invariant ellipse, between two tangent lines.

    Invariant: q(tangency - center) = radius_sq for both tangency points.
    """

    center: Point
    radius_sq: Fraction
    tangency_a: Point
    tangency_b: Point
    lam: Fraction


def main_sector(lam) -> SectorSpec:
    """The corner sector at the main fixed point's ellipse."""
    lam = as_rational(lam)
    c = map_fixed_point(lam)
    tau = (1 + lam) / 2
    return SectorSpec(c, ellipse_radius_sq(lam), Point(tau, ONE), Point(ONE, tau), lam)


def mirror_sector(lam) -> SectorSpec:
    """The analogous sector of the symmetric 2-cycle (element with symbol 1)."""
    lam = as_rational(lam)
    d = 4 - lam * lam
    c = Point(lam / d, 2 / d)
    ta = Point(ZERO, Fraction(1, 2))
    tb = Point(lam / 2, Fraction(1, 2))
    r2 = q_norm_sq(p_sub(ta, c), lam)
    return SectorSpec(c, r2, ta, tb, lam)


def sector_contains(p: Point, spec: SectorSpec) -> bool:
    """Strict membership: outside the ellipse, beyond the chord, inside the
    two tangent lines (sector taken open)."""
    lam = spec.lam
    if q_norm_sq(p_sub(p, spec.center), lam) <= spec.radius_sq:
        return False
    d = p_sub(spec.tangency_b, spec.tangency_a)
    side_p = cross(d, p_sub(p, spec.tangency_a))
    side_c = cross(d, p_sub(spec.center, spec.tangency_a))
    if side_p == 0 or (side_p > 0) == (side_c > 0):
        return False
    for t in (spec.tangency_a, spec.tangency_b):
        normal = p_sub(t, spec.center)
        if q_inner(p_sub(p, t), normal, lam) >= 0:
            return False
    return True


def _tangent_corner(spec: SectorSpec) -> Point:
    """Intersection point of the two tangent lines."""
    lam = spec.lam
    pts = []
    for t in (spec.tangency_a, spec.tangency_b):
        n = p_sub(t, spec.center)
        # line: q(z - t, n) = 0  ->  alpha x + beta y = gamma
        alpha = n.x - lam / 2 * n.y
        beta = n.y - lam / 2 * n.x
        gamma = alpha * t.x + beta * t.y
        pts.append((alpha, beta, gamma))
    (a1, b1, c1), (a2, b2, c2) = pts
    det = a1 * b2 - a2 * b1
    if det == 0:
        raise ValueError("parallel tangent lines")
    return Point((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


def polygon_meets_sector(vertices: Sequence[Point], spec: SectorSpec) -> bool:
    """Whether a closed convex polygon meets the open sector.

    The polygon is clipped against the closed tangent-line corner triangle;
    since the quadratic form is convex, the clip lies inside the closed
    ellipse iff all its vertices do, which decides the generic case exactly.
    Degenerate clips fall back to strict point tests on vertices and edge
    midpoints.
    """
    corner = _tangent_corner(spec)
    tri = _clockwise([spec.tangency_a, corner, spec.tangency_b])
    clip = clip_convex_vertices(_clockwise(list(vertices)), tri)
    if len(clip) == 0:
        return False
    lam = spec.lam
    q_vals = [q_norm_sq(p_sub(v, spec.center), lam) for v in clip]
    if max(q_vals) <= spec.radius_sq:
        return False
    if len(clip) >= 3 and signed_area2(clip) != 0:
        return True
    candidates = list(clip)
    for i in range(len(clip)):
        a, b = clip[i], clip[(i + 1) % len(clip)]
        candidates.append(Point((a.x + b.x) / 2, (a.y + b.y) / 2))
    return any(sector_contains(p, spec) for p in candidates)


def _clockwise(vertices: list[Point]) -> list[Point]:
    if signed_area2(vertices) > 0:
        return list(reversed(vertices))
    return vertices
