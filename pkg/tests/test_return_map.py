from fractions import Fraction

import mpmath as mp
import pytest

from rotorlab import return_map as rm
from rotorlab import geometry as ge
from rotorlab.dynamics import detect_period, involution_g, step
from rotorlab.exact import Point

LAM = Fraction(1, 64)


@pytest.fixture(scope="module")
def counts64():
    return rm.rotation_counts(LAM)


def test_family_counts(counts64):
    assert (counts64.inward, counts64.outward) == (50, 100)
    assert not counts64.nongeneric
    # the outward count approaches pi/(2 lam)
    lam = Fraction(1, 2**14)
    c = rm.rotation_counts(lam)
    with mp.workdps(30):
        assert abs(c.outward * mp.mpf(1) / 2**14 - mp.pi / 2) < 0.02 * mp.pi / 2
    # counts remain defined near the top of the parameter range
    high = rm.rotation_counts(Fraction(3, 2))
    assert high.inward >= 0 and high.outward >= 0
    assert rm.rotation_counts(Fraction(1, 128)).inward > counts64.inward


def test_vertex_closed_forms():
    lam = LAM
    assert rm.vertex_low_out(0, lam) == Point(
        Fraction(1), (2 - lam - lam**2) / (2 - 4 * lam**2 + lam**4)
    )
    assert rm.vertex_low_out(1, lam) == Point(
        Fraction(1),
        (2 - 2 * lam - 4 * lam**2 + lam**3 + lam**4)
        / (2 - 9 * lam**2 + 6 * lam**4 - lam**6),
    )
    # the inward corner vertices: the square corner and the hypotenuse's end
    assert rm.vertex_top_in(0, lam) == Point(Fraction(1), Fraction(1))
    _, side = rm.hypotenuse_ends(lam)
    assert rm.vertex_low_in(0, lam) == side


def test_low_in_vertices_sit_on_hypotenuse(counts64):
    lam = LAM
    top, side = rm.hypotenuse_ends(lam)
    for n in (0, 1, 2, 10, 25, counts64.inward - 1):
        q = rm.vertex_low_in(n, lam)
        assert (side.x - top.x) * (q.y - top.y) == (side.y - top.y) * (q.x - top.x)


def test_top_in_strictly_decreasing(counts64):
    lam = LAM
    xs = [rm.vertex_top_in(n, lam).x for n in range(0, counts64.inward)]
    assert all(a > b for a, b in zip(xs, xs[1:]))


def test_vertex_leading_order_small_parameter():
    """Top outward vertex: x - (m+1)/(2m+1) - lam ~ -m(m+1) lam^2 / (6(2m+1))."""
    lam = Fraction(1, 10**5)
    for m in range(2, 6):
        x = rm.vertex_top_out(m, lam).x
        lead = -Fraction(m * (m + 1), 6 * (2 * m + 1)) * lam**2
        residual = x - Fraction(m + 1, 2 * m + 1) - lam
        assert abs(residual - lead) < 2 * lam**3 * (m + 1) ** 2


def test_vertex_ordering_in_cutoff_regime():
    lam = Fraction(1, 10**5)
    for m in (2, 5, 11):
        a = rm.vertex_top_out(m, lam).x
        b = rm.vertex_low_out(m, lam).x
        c = rm.vertex_top_out(m - 1, lam).x
        d = rm.vertex_low_out(m - 1, lam).x
        assert a < b < c < d


def test_atoms_and_entry_domain(counts64):
    lam = LAM
    a1 = rm.atom_in(1, lam, counts64)
    assert a1.transit_time == 0 and a1.expected_code == ()
    # the first inward atom is the overlap of the entry triangle and its mirror
    entry = rm.entry_domain(lam)
    mirror = ge.polygon([involution_g(v) for v in reversed(entry.vertices)])
    clipped = ge.polygon_clip(ge.polygon(entry.vertices), mirror)
    assert sorted(clipped.vertices) == sorted(a1.polygon.vertices)

    out1 = rm.atom_out(1, lam, counts64)
    assert out1.transit_time == 7
    assert out1.expected_code == (1, 1, 1, 0, 1, 1, 1)
    assert all(not f for f in out1.polygon.edge_included)  # open atom
    assert len(rm.atom_out(2, lam, counts64).polygon.vertices) == 6
    assert rm.atom_out(5, lam, counts64).expected_code == rm.outward_code(5)
    with pytest.raises(ValueError):
        rm.atom_in(counts64.inward, lam, counts64)
    with pytest.raises(ValueError):
        rm.atom_out(0, lam, counts64)


def test_bracket_matches_admissibility(counts64):
    lam = LAM
    for m in (1, 2, 3, 5, 8, 10):
        lo, hi = rm.n_bounds(m, lam, counts64)
        for n in range(1, counts64.inward - 1):
            assert rm.admissible(m, n, lam, counts64) == (lo <= n <= hi), (m, n)


def test_bracket_examples(counts64):
    assert rm.admissible(3, 34, LAM, counts64)
    lo, hi = rm.n_bounds(3, LAM, counts64)
    assert not rm.admissible(3, lo - 1, LAM, counts64)
    assert not rm.admissible(3, hi + 1, LAM, counts64)


def test_bracket_width_grows():
    widths = []
    for k in (6, 8, 10):
        lam = Fraction(1, 2**k)
        lo, hi = rm.n_bounds(3, lam)
        widths.append(hi - lo)
    assert widths[0] < widths[1] < widths[2]


def test_fixed_point_in_atom_interior(counts64):
    lam = LAM
    for m in (1, 2, 3, 6):
        lo, hi = rm.n_bounds(m, lam, counts64)
        for n in (lo, (lo + hi) // 2, hi):
            rec = rm.fixed_point(m, n, lam, counts64)
            inter = ge.polygon_clip(
                rm.atom_out(m, lam, counts64).polygon, rm.atom_in(n, lam, counts64).polygon
            )
            assert inter is not None
            assert inter.contains(rec.point, strict=True)
    with pytest.raises(ValueError):
        rm.fixed_point(3, 1, lam, counts64)


def test_fixed_point_on_mirror_line(counts64):
    """Symmetric points: the inward return fixes them, so does the outward."""
    lam = LAM
    rec = rm.fixed_point(3, 34, lam, counts64)
    z = rec.point
    cur = z
    for _ in range(4 * 34 - 4):
        cur, _ = step(cur, lam)
    assert involution_g(cur) == z  # inward involution fixes z
    cur = involution_g(z)
    for _ in range(4 * 3 + 3):
        cur, _ = step(cur, lam)
    assert cur == z  # outward involution fixes z


def test_verify_fixed_point_diagnostics(counts64):
    lam = LAM
    rec = rm.verify_fixed_point(rm.fixed_point(3, 34, lam, counts64), lam)
    assert rec.verified and rec.period == 147
    assert rec.code == rm.cycle_code(3, 34)
    # a nearby point in the same disk repeats the code but is not fixed
    z = rec.point
    nearby = Point(z.x + Fraction(1, 10**9), z.y)
    assert detect_period(nearby, lam, 400) is None
    cur = nearby
    code = []
    for _ in range(147):
        cur, s = step(cur, lam)
        code.append(s)
    assert tuple(code) == rec.code and cur != nearby
    # tampering with the point is reported with observations attached
    from dataclasses import replace
    bad = rm.verify_fixed_point(replace(rec, point=nearby, verified=False), lam)
    assert not bad.verified
    assert bad.observed_code is not None


def test_fixed_point_expansion_leading_order():
    """Vertical coordinate: one less than the periodic point height ~ (lam/4)(1 - (2m+1) tau) for small lam."""
    lam = Fraction(1, 2**14)
    counts = rm.rotation_counts(lam)
    m = 4
    lo, hi = rm.n_bounds(m, lam, counts)
    n = (lo + hi) // 2
    rec = rm.fixed_point(m, n, lam, counts)
    with mp.workdps(40):
        theta = mp.asin(mp.mpf(1) / 2**15)
        tau = mp.tan(mp.pi / 4 - 2 * n * theta)
        lead = mp.mpf(1) / 2**14 / 4 * (1 - (2 * m + 1) * tau)
        zy = mp.mpf(rec.point.y.numerator) / rec.point.y.denominator
        assert abs((zy - 1) - lead) < mp.mpf(2) ** -26  # next order is lam^2


def test_disk_tangency_all_sides(counts64):
    """The minimal disk fits in the overlap atom and touches >= 3 sides."""
    from rotorlab.areas import disk_coeffs
    from rotorlab.geometry import q_dist_sq_to_line

    lam = LAM
    m, n = 3, 34
    rec = rm.fixed_point(m, n, lam, counts64)
    top, hyp = disk_coeffs(m, n, lam, counts64)
    r_sq = min(top, hyp)  # squared metric distance to the tangency line
    inter = ge.polygon_clip(
        rm.atom_out(m, lam, counts64).polygon, rm.atom_in(n, lam, counts64).polygon
    )
    dists = []
    for i in range(len(inter.vertices)):
        a = inter.vertices[i]
        b = inter.vertices[(i + 1) % len(inter.vertices)]
        d = q_dist_sq_to_line(rec.point, a, b, lam)
        assert d >= r_sq  # the disk fits
        dists.append(d)
    assert sum(1 for d in dists if d == r_sq) >= 3  # tangent to >= 3 sides


def test_involution_reports(counts64):
    lam = LAM
    for n in (1, 2, 7, 30):
        rep = rm.verify_atom_involution(rm.atom_in(n, lam, counts64), lam)
        assert rep.involutive and rep.vertex_map_ok, rep.failures
    for m in (1, 2, 3, 8):
        rep = rm.verify_atom_involution(rm.atom_out(m, lam, counts64), lam)
        assert rep.involutive and rep.vertex_map_ok, rep.failures
        assert rep.stays_clear_of_sector, rep.failures


def test_crossover_records():
    rec = rm.crossover(Fraction(1, 64))
    with mp.workdps(30):
        assert int(mp.nint(rec.m_root)) == 6
        assert abs(rec.m_root - rec.m_series) / rec.m_root < mp.mpf("1e-6")
    rec_small = rm.crossover(Fraction(1, 1024))
    assert rec_small.m_root > rec.m_root  # alignment index diverges


def test_scan_four_step_sector_codes():
    """Four-step codes: all-ones deep in the sector, trailing zero in the
    exit overlap near the corner."""
    lam = LAM
    eps = Fraction(1, 2**9)
    deep = ge.polygon([Point(Fraction(49, 50), Fraction(9, 10) + eps),
                       Point(Fraction(49, 50) + eps, Fraction(9, 10)),
                       Point(Fraction(49, 50) - eps, Fraction(9, 10))])
    rep = rm.scan_return_codes(deep, lam, max_steps=4, grid=8, fixed_steps=4)
    assert [f.code for f in rep.families] == [(1, 1, 1, 1)]

    c = Fraction(1) - Fraction(1, 2**9)
    near = ge.polygon([Point(c, c + Fraction(1, 2**12)),
                       Point(c + Fraction(1, 2**12), c),
                       Point(c - Fraction(1, 2**12), c)])
    rep2 = rm.scan_return_codes(near, lam, max_steps=4, grid=8, fixed_steps=4)
    assert [f.code for f in rep2.families] == [(1, 1, 1, 0)]


def test_pocket_families_scan():
    lam = LAM
    region = rm.mirrored(rm.side_pocket(lam))
    rep = rm.scan_return_codes(region, lam, max_steps=100, grid=48)
    labels = {}
    for fam in rep.families:
        lbl = rm.classify_pocket_code(fam.code, fam.transit_time or 0)
        if lbl:
            labels[lbl] = fam.sample_count
    for fam, m in (("A", 1), ("B", 1), ("B", 2), ("C", 1)):
        assert (fam, m) in labels
    # expected codes and transits agree with the generators
    code, t = rm.pocket_family_code("B", 2)
    assert t == 28 and len(code) == 28
    code, t = rm.pocket_family_code("C", 1)
    assert t == 35 and len(code) == 35
    assert rm.classify_pocket_code(code, t) == ("C", 1)


def test_intersection_atom(counts64):
    lam = LAM
    atom = rm.atom_intersection(3, 34, lam, counts64)
    assert atom.kind == "intersection"
    assert atom.transit_time == 147
    assert len(atom.expected_code) == atom.transit_time
    z = rm.fixed_point(3, 34, lam, counts64).point
    assert atom.polygon.contains(z, strict=True)
    with pytest.raises(ValueError):
        rm.atom_intersection(3, 1, lam, counts64)
