from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorlab import dynamics as dy
from rotorlab.exact import Point

LAM = Fraction(1, 64)

unit_coord = st.integers(0, 2**10 - 1).map(lambda n: Fraction(n, 2**10))
points = st.tuples(unit_coord, unit_coord).map(lambda t: Point(*t))


def test_symbol_examples():
    assert dy.iota(Point(Fraction(0), Fraction(0)), LAM) == 0
    assert dy.iota(Point(Fraction(1, 2), Fraction(1, 2)), LAM) == 1
    with pytest.raises(ValueError):
        dy.iota(Point(Fraction(1), Fraction(0)), LAM)


def test_symbols_stay_in_alphabet(rng):
    for _ in range(300):
        p = Point(Fraction(rng.randint(0, 4095), 4096), Fraction(rng.randint(0, 4095), 4096))
        assert dy.iota(p, LAM) in dy.alphabet(LAM)
    neg = Fraction(-1, 3)
    for _ in range(300):
        p = Point(Fraction(rng.randint(0, 4095), 4096), Fraction(rng.randint(0, 4095), 4096))
        assert dy.iota(p, neg) in dy.alphabet(neg)


def test_step_examples():
    fp = dy.map_fixed_point(LAM)
    assert fp == Point(Fraction(64, 127), Fraction(64, 127))
    assert dy.step(fp, LAM) == (fp, 1)

    a, b = dy.two_cycle(LAM)
    img_a, sym_a = dy.step(a, LAM)
    assert img_a == b and sym_a == 0
    img_b, sym_b = dy.step(b, LAM)
    assert img_b == a and sym_b == 1

    mid = Point(Fraction(1, 2), Fraction(1, 2))
    assert dy.step(mid, LAM) == (Point(Fraction(65, 128), Fraction(1, 2)), 1)


@given(p=points)
@settings(max_examples=200, deadline=None)
def test_reversibility_and_involutions(p):
    g = dy.involution_g
    h = dy.involution_h
    assert g(g(p)) == p
    assert h(h(p, LAM), LAM) == p
    # the map is mirror after mirror
    assert h(g(p), LAM) == dy.step(p, LAM)[0]
    # inverse contract
    q = dy.step(p, LAM)[0]
    assert dy.step_inverse(q, LAM) == p
    assert g(dy.step(g(dy.step(p, LAM)[0]), LAM)[0]) == p


def test_step_inverse_on_cycles():
    fp = dy.map_fixed_point(LAM)
    assert dy.step_inverse(fp, LAM) == fp
    a, b = dy.two_cycle(LAM)
    assert dy.step_inverse(b, LAM) == a
    assert dy.step_inverse(a, LAM) == b


def test_iterate_and_radius():
    fp = dy.map_fixed_point(LAM)
    rec = dy.iterate(fp, LAM, 4)
    assert rec.period == 1 and rec.code == (1, 1, 1, 1)
    assert dy.orbit_radius(rec) == Fraction(63, 127)

    a, _ = dy.two_cycle(LAM)
    rec2 = dy.iterate(a, LAM, 2)
    assert rec2.period == 2 and rec2.code == (0, 1)
    assert dy.orbit_radius(rec2) == Fraction(64, 16383)  # the small coordinate

    with pytest.raises(ValueError):
        dy.orbit_radius(dy.iterate(Point(Fraction(1, 3), Fraction(1, 7)), LAM, 3))


def test_radius_degenerates_at_zero():
    a, _ = dy.two_cycle(Fraction(0))
    rec = dy.iterate(a, Fraction(0), 2)
    assert rec.period == 2
    assert dy.orbit_radius(rec) == 0


def test_coding_consistency(rng):
    for _ in range(20):
        p = Point(Fraction(rng.randint(0, 4095), 4096), Fraction(rng.randint(0, 4095), 4096))
        rec = dy.iterate(p, LAM, 30)
        recomputed = tuple(dy.iota(q, LAM) for q in rec.points[:-1])
        assert recomputed == rec.code


def test_branch_maps():
    b1 = dy.branch_compose((1,), LAM)
    assert b1.translation == Point(Fraction(1), Fraction(0))
    assert b1.matrix == dy.rotation_matrix(LAM)
    assert b1.determinant == 1

    ab = dy.branch_compose((0, 1), LAM)
    ba = dy.branch_compose((1, 0), LAM)
    assert ab.after(ba).translation != ba.after(ab).translation  # non-commuting

    word = (1, 1, 0, 1) * 7
    assert dy.branch_compose(word, LAM).determinant == 1


def test_branch_word_chain():
    """Four exact branch steps across a corner triangle, checked setwise."""
    lam = LAM
    t2 = [Point(Fraction(0), Fraction(0)), Point(Fraction(0), Fraction(1)),
          Point(lam, lam * lam)]
    t3 = [Point(Fraction(0), Fraction(0)), Point(Fraction(1), lam), Point(Fraction(1), Fraction(0))]
    t4 = [Point(Fraction(0), Fraction(0)), Point(Fraction(0), Fraction(1)), Point(lam, Fraction(1))]
    t5 = [Point(Fraction(0), Fraction(0)), Point(lam * lam, lam), Point(Fraction(1), Fraction(0))]
    for word, src, dst in (((1,), t2, t3), ((0,), t3, t4), ((1,), t4, t5)):
        bm = dy.branch_compose(word, lam)
        assert {bm.apply(p) for p in src} == set(dst)
    # and the composite word sends the first triangle's top-left vertex through
    # the whole chain
    chain = dy.branch_compose((1, 1, 0, 1), lam)
    assert chain.apply(Point(Fraction(0), Fraction(1))) == Point(lam * lam, lam)


def test_matrix_power_chebyshev():
    ident = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    assert dy.matrix_power(0, LAM) == ident
    assert dy.matrix_power(1, LAM) == dy.rotation_matrix(LAM)

    # exact agreement with repeated multiplication up to |k| = 64
    acc = ident
    c = dy.rotation_matrix(LAM)
    for k in range(1, 65):
        (a, b), (cc, d) = acc
        (e, f), (g, h) = c
        acc = ((a * e + b * g, a * f + b * h), (cc * e + d * g, cc * f + d * h))
        assert dy.matrix_power(k, LAM) == acc

    # inverse powers compose to the identity
    for k in (1, 5, 17):
        m = dy.matrix_power(k, LAM)
        minv = dy.matrix_power(-k, LAM)
        (a, b), (cc, d) = m
        (e, f), (g, h) = minv
        prod = ((a * e + b * g, a * f + b * h), (cc * e + d * g, cc * f + d * h))
        assert prod == ident


def test_matrix_power_matches_high_precision_rotation():
    """The quadruple-step powers match the cosine/sine closed form."""
    with mp.workdps(50):
        lamf = mp.mpf(1) / 64
        theta = mp.asin(lamf / 2)
        root = mp.sqrt(4 - lamf**2)
        for ell in range(1, 6):
            m = dy.matrix_power(4 * ell, LAM)
            cos4l = mp.cos(4 * ell * theta)
            sin4l = mp.sin(4 * ell * theta)
            expected = (
                (cos4l - sin4l / root * lamf, sin4l / root * 2),
                (-sin4l / root * 2, cos4l + sin4l / root * lamf),
            )
            for row, erow in zip(m, expected):
                for entry, eentry in zip(row, erow):
                    got = mp.mpf(entry.numerator) / entry.denominator
                    assert abs(got - eentry) < mp.mpf(10) ** -45
