from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorlab import geometry as ge
from rotorlab.dynamics import apply_matrix, map_fixed_point, rotation_matrix
from rotorlab.exact import Point, p_sub
from rotorlab.return_map import rotation_counts, atom_out

LAM = Fraction(1, 64)

coords = st.fractions(min_value=-2, max_value=2, max_denominator=512).map(Fraction)
vectors = st.tuples(coords, coords)


def test_q_inner_reduces_to_euclid_at_zero():
    u, v = (Fraction(3), Fraction(-2)), (Fraction(1, 2), Fraction(5))
    assert ge.q_inner(u, v, 0) == u[0] * v[0] + u[1] * v[1]
    assert ge.q_norm_sq(u, 0) == 13


@given(u=vectors, v=vectors)
@settings(max_examples=80, deadline=None)
def test_q_inner_invariance(u, v):
    m = rotation_matrix(LAM)
    mu = apply_matrix(m, Point(*u))
    mv = apply_matrix(m, Point(*v))
    assert ge.q_inner(mu, mv, LAM) == ge.q_inner(u, v, LAM)


def test_tangency_radius_closed_form():
    lam = LAM
    c = map_fixed_point(lam)
    t0 = Point((1 + lam) / 2, Fraction(1))
    closed = (1 - lam) ** 2 * (2 + lam) / (4 * (2 - lam))
    assert ge.q_norm_sq(p_sub(t0, c), lam) == closed
    assert ge.ellipse_radius_sq(lam) == closed
    for lam2 in (Fraction(1, 10), Fraction(1, 3)):
        c2 = map_fixed_point(lam2)
        t2 = Point((1 + lam2) / 2, Fraction(1))
        assert ge.q_norm_sq(p_sub(t2, c2), lam2) == ge.ellipse_radius_sq(lam2)


def test_q_area_unit_square_and_errors():
    square = ge.polygon(
        [Point(Fraction(0), Fraction(1)), Point(Fraction(1), Fraction(1)),
         Point(Fraction(1), Fraction(0)), Point(Fraction(0), Fraction(0))]
    )
    area, fac2 = ge.q_area(square, LAM)
    assert area == 1
    assert fac2 == 1 - LAM * LAM / 4
    with pytest.raises(ValueError):
        ge.polygon([Point(Fraction(0), Fraction(0)), Point(Fraction(0), Fraction(0)),
                    Point(Fraction(1), Fraction(1))])
    bow = ge.polygon([Point(Fraction(0), Fraction(0)), Point(Fraction(1), Fraction(1)),
                      Point(Fraction(1), Fraction(0)), Point(Fraction(0), Fraction(1))])
    with pytest.raises(ValueError):
        ge.q_area(bow, LAM)


def test_outward_atom_area_matches_product_form():
    """Exact shoelace against the trigonometric product, 30 digits."""
    from rotorlab.areas import outward_atom_area_closed_form

    counts = rotation_counts(LAM)
    with mp.workdps(45):
        for m in range(3, 9):
            atom = atom_out(m, LAM, counts)
            exact = ge.q_area_numeric(atom.polygon, LAM, dps=45)
            closed = outward_atom_area_closed_form(m, LAM, dps=45)
            assert abs(exact - closed) < mp.mpf(10) ** -30


# ---------------------------------------------------------------------------
# Segment images
# ---------------------------------------------------------------------------

def _expected_rows(lam):
    one = Fraction(1)
    g = (1 + 2 * lam - lam**2 - lam**3) / (2 - lam**2)
    gp = (1 - lam**2) / (2 - lam**2)
    return {
        0: [((0, 0), (0, 1))],
        1: [((1, 0), (0, 0))],
        2: [((lam, 1), (0, 0))],
        3: [((lam**2, lam), (1, 0))],
        4: [((-lam + lam**3, lam**2), (lam, 1))],
        5: [
            ((lam - 2 * lam**2 + lam**4, 1 - lam + lam**3), (g - 1, one)),
            ((gp, 0), (lam**2, lam)),
        ],
    }


@pytest.mark.parametrize("lam", [Fraction(1, 64), Fraction(1, 10)])
def test_generator_images_exact(lam):
    table = ge.discontinuity_set(lam, 5)
    for t, rows in _expected_rows(lam).items():
        got = [((s.first.x, s.first.y), (s.second.x, s.second.y)) for s in table[t]]
        assert got == [tuple(map(lambda xy: (Fraction(xy[0]), Fraction(xy[1])), row))
                       for row in rows]


def test_generator_flags_propagate():
    table = ge.discontinuity_set(LAM, 5)
    for t, segs in table.items():
        for s in segs:
            assert s.include_first and not s.include_second


def test_mirror_symmetry_of_images():
    """The mirror of the t-th image is the (1-t)-th image, setwise."""
    table = ge.discontinuity_set(LAM, 6)
    for m in range(-4, 6):
        mirrored = [s.swapped() for s in table[m]]
        assert ge.same_segment_set(mirrored, table[-m + 1]), m


def test_second_mirror_symmetry_of_images():
    """Applying the second involution sends image m to image 2-m, setwise.

    The involution's formula needs actual torus coordinates in y (its
    x-output moves by lam per unit of y-lift), so segments are normalised
    into torus pieces before mapping.
    """
    lam = LAM
    table = ge.discontinuity_set(lam, 5)

    def h_image(seg):
        def h(p):
            v = lam * p.y - p.x
            return Point(v, p.y)

        return ge.OrientedSegment(h(seg.first), h(seg.second))

    for m in range(-3, 6):
        pieces = [
            ge.OrientedSegment(Point(*a), Point(*b))
            for s in table[m]
            for a, b in ge.torus_pieces(s)
        ]
        mirrored = [h_image(p) for p in pieces]
        assert ge.same_segment_set(mirrored, table[-m + 2]), m


def test_image_pieces_are_parallel_isometric():
    """All image pieces share the rotated direction (q-lengths add)."""
    lam = LAM
    table = ge.discontinuity_set(lam, 4)
    seg = table[4][0]  # crosses the generator, so its image splits
    direction = p_sub(seg.second, seg.first)
    img_dir = apply_matrix(rotation_matrix(lam), Point(*direction))
    assert ge.q_norm_sq(img_dir, lam) == ge.q_norm_sq(direction, lam)
    pieces = ge.segment_image(seg, lam)
    assert len(pieces) == 2
    for piece in pieces:
        d = p_sub(piece.second, piece.first)
        assert d.x * img_dir.y == d.y * img_dir.x


def test_image_pieces_partition_parameter():
    """Piece y-extents sum exactly to the source x-extent: the image covers
    the source once (the lift shifts only x, never y)."""
    lam = LAM
    for seg in (
        ge.OrientedSegment(Point(Fraction(1, 5), Fraction(9, 10)),
                           Point(Fraction(9, 10), Fraction(1, 7))),
        ge.discontinuity_set(lam, 4)[4][0],
    ):
        pieces = ge.segment_image(seg, lam)
        span = seg.second.x - seg.first.x
        covered = sum((p.second.y - p.first.y) for p in pieces)
        assert covered == span


# ---------------------------------------------------------------------------
# Intersections, clipping, sectors
# ---------------------------------------------------------------------------

def test_segment_intersection_cases():
    a = ge.OrientedSegment(Point(Fraction(0), Fraction(0)), Point(Fraction(1), Fraction(1)))
    b = ge.OrientedSegment(Point(Fraction(0), Fraction(1)), Point(Fraction(1), Fraction(0)))
    assert ge.segment_intersection(a, b) == Point(Fraction(1, 2), Fraction(1, 2))
    c = ge.OrientedSegment(Point(Fraction(2), Fraction(2)), Point(Fraction(3), Fraction(2)))
    assert ge.segment_intersection(a, c) is None
    d = ge.OrientedSegment(Point(Fraction(1, 2), Fraction(1, 2)), Point(Fraction(2), Fraction(2)))
    overlap = ge.segment_intersection(a, d)
    assert isinstance(overlap, ge.OrientedSegment)
    assert {overlap.first, overlap.second} == {Point(Fraction(1, 2), Fraction(1, 2)),
                                               Point(Fraction(1), Fraction(1))}


def _square(x0, y0, size):
    s = Fraction(size)
    return [Point(Fraction(x0), Fraction(y0) + s), Point(Fraction(x0) + s, Fraction(y0) + s),
            Point(Fraction(x0) + s, Fraction(y0)), Point(Fraction(x0), Fraction(y0))]


def test_clip_disjoint_and_flags():
    a = ge.polygon(_square(0, 0, 1), [True, True, False, False])
    b = ge.polygon(_square(2, 2, 1))
    assert ge.polygon_clip(a, b) is None
    c = ge.polygon(_square(Fraction(1, 2), Fraction(1, 2), 1), [True] * 4)
    clipped = ge.polygon_clip(a, c)
    assert clipped is not None
    assert clipped.shoelace_area() == Fraction(1, 4)


def test_clip_associativity(rng):
    for _ in range(25):
        sqs = []
        for _k in range(3):
            x0 = Fraction(rng.randint(-4, 4), 8)
            y0 = Fraction(rng.randint(-4, 4), 8)
            size = Fraction(rng.randint(4, 12), 8)
            sqs.append(ge.polygon(_square(x0, y0, size)))
        a, b, c = sqs

        def verts(p):
            return None if p is None else sorted(p.vertices)

        ab = ge.polygon_clip(a, b)
        bc = ge.polygon_clip(b, c)
        left = None if ab is None else ge.polygon_clip(ab, c)
        right = None if bc is None else ge.polygon_clip(a, bc)
        assert verts(left) == verts(right)


def test_sector_membership():
    lam = LAM
    spec = ge.main_sector(lam)
    # centre of the ellipse is not in the sector
    assert not ge.sector_contains(map_fixed_point(lam), spec)
    # the tangency point itself is excluded (open sector)
    assert not ge.sector_contains(spec.tangency_a, spec)
    # a point tucked into the corner is inside
    tau = (1 + lam) / 2
    probe = Point((1 + tau) / 2 + Fraction(1, 64), 1 - Fraction(1, 2**12))
    assert ge.sector_contains(probe, spec)
    # corner of the two tangent lines
    assert ge._tangent_corner(spec) == Point(Fraction(1), Fraction(1))


def test_polygon_meets_sector():
    lam = LAM
    spec = ge.main_sector(lam)
    near_corner = _square(Fraction(31, 32), Fraction(31, 32), Fraction(1, 64))
    assert ge.polygon_meets_sector(near_corner, spec)
    far_away = _square(Fraction(1, 8), Fraction(1, 8), Fraction(1, 8))
    assert not ge.polygon_meets_sector(far_away, spec)
    inside_ellipse = _square(Fraction(3, 8), Fraction(3, 8), Fraction(1, 4))
    assert not ge.polygon_meets_sector(inside_ellipse, spec)
