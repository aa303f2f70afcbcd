"""The two orbit kernels must agree exactly; speed is a separate question
(scripts/benchmark_kernel.py)."""

import random
from fractions import Fraction

import pytest

from rotorlab import _orbit_py
from rotorlab import kernel

try:
    from rotorlab import _orbit as _orbit_ext
except ImportError:  # pragma: no cover
    _orbit_ext = None

IMPLS = [_orbit_py] + ([_orbit_ext] if _orbit_ext else [])


def _random_triple(rng):
    den = 2 ** rng.randint(4, 12)
    return rng.randint(0, den - 1), rng.randint(0, den - 1), den


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.__name__)
def test_step_matches_fraction_arithmetic(impl):
    rng = random.Random(7)
    lam = Fraction(1, 64)
    for _ in range(200):
        xn, yn, den = _random_triple(rng)
        x, y = Fraction(xn, den), Fraction(yn, den)
        nx, ny, nden, s, on_b = impl.step_ints(xn, yn, den, 1, 64)
        v = lam * x - y
        sym = -(v.__floor__())
        assert s == sym
        assert Fraction(nx, nden) == v + sym
        assert Fraction(ny, nden) == x
        assert on_b == (v == v.__floor__() and v != 0)


@pytest.mark.skipif(_orbit_ext is None, reason="compiled kernel not built")
def test_twins_agree_on_probe():
    rng = random.Random(11)
    planes = [(-64, 0, 63, True), (0, -64, 63, True)]  # x < 63/64 and y < 63/64
    for _ in range(60):
        xn, yn, den = _random_triple(rng)
        for want_period, want_hit in ((True, False), (False, True), (True, True)):
            a = _orbit_py.probe(xn, yn, den, 1, 64, planes, 200, want_period, want_hit, True)
            b = _orbit_ext.probe(xn, yn, den, 1, 64, planes, 200, want_period, want_hit, True)
            assert a == b


@pytest.mark.skipif(_orbit_ext is None, reason="compiled kernel not built")
def test_twins_agree_on_orbit_code():
    rng = random.Random(13)
    for _ in range(40):
        xn, yn, den = _random_triple(rng)
        a = _orbit_py.orbit_code(xn, yn, den, 3, 128, 80)
        b = _orbit_ext.orbit_code(xn, yn, den, 3, 128, 80)
        assert a == b


def test_selected_kernel_exposes_contract():
    assert kernel.KERNEL_NAME in ("py", "ext")
    assert kernel.probe is not None
    xn, yn, den = kernel.point_to_ints((Fraction(1, 3), Fraction(2, 7)))
    assert (Fraction(xn, den), Fraction(yn, den)) == (Fraction(1, 3), Fraction(2, 7))
