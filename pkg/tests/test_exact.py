from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorlab.exact import (
    as_rational,
    chebyshev_pair,
    chebyshev_pair_fast,
    chebyshev_t,
    chebyshev_u,
    lambda_in_range,
    power_bracket,
    root_bracket,
    tan_ratio,
)

rationals = st.fractions(min_value=-2, max_value=2, max_denominator=10**6).map(Fraction)


def test_parse_and_range():
    assert as_rational("1/64") == Fraction(1, 64)
    assert lambda_in_range(Fraction(1, 64))
    assert lambda_in_range(Fraction(3, 2))          # below the cubic root
    assert not lambda_in_range(Fraction(8, 5))      # above it
    assert not lambda_in_range(Fraction(-1))
    with pytest.raises(TypeError):
        as_rational(0.015625)


@given(k=st.integers(0, 40), t=rationals)
@settings(max_examples=60, deadline=None)
def test_chebyshev_recurrence_identity(k, t):
    # T_{k+1} = 2 t T_k - T_{k-1}, U likewise
    if k >= 1:
        assert chebyshev_t(k + 1, t) == 2 * t * chebyshev_t(k, t) - chebyshev_t(k - 1, t)
        assert chebyshev_u(k + 1, t) == 2 * t * chebyshev_u(k, t) - chebyshev_u(k - 1, t)
    # Pell-type identity: T_k^2 - (t^2 - 1) U_{k-1}^2 = 1
    tk, uk1 = chebyshev_pair_fast(k, t)
    assert tk == chebyshev_t(k, t)
    assert uk1 == chebyshev_u(k - 1, t)
    assert tk * tk - (t * t - 1) * uk1 * uk1 == 1


def test_chebyshev_pair_cutover_consistency():
    t = Fraction(1, 128)
    big = 700  # above the fast-doubling cutover
    assert chebyshev_pair(big, t) == (chebyshev_t(big, t), chebyshev_u(big - 1, t))


@pytest.mark.parametrize("k", [1, 3, 5, 9, 21])
def test_tan_ratio_matches_trig(k):
    lam = Fraction(1, 64)
    exact = tan_ratio(k, lam)
    with mp.workdps(50):
        theta = mp.asin(mp.mpf(1) / 128)
        ref = mp.tan(theta) / mp.tan(k * theta)
        got = mp.mpf(exact.numerator) / exact.denominator
        assert abs(got - ref) < mp.mpf(10) ** -45


def test_root_bracket_contains():
    x = Fraction(2)
    lo, hi = root_bracket(x, 2, bits=100)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo < Fraction(1, 2**99)
    lo, hi = power_bracket(Fraction(1, 10**4), 3, 4)  # lam0^(3/4)
    assert lo ** 4 <= Fraction(1, 10**4) ** 3 <= hi ** 4


@given(x=st.fractions(min_value="1/1000", max_value=1000, max_denominator=10**9).map(Fraction),
       k=st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_root_bracket_property(x, k):
    lo, hi = root_bracket(x, k, bits=64)
    assert 0 <= lo <= hi
    assert lo**k <= x <= hi**k
