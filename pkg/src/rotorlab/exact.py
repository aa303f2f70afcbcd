"""Shared exact-arithmetic scaffolding.

Every coordinate in this package is an exact rational number
(``fractions.Fraction``: always in lowest terms, denominator > 0).  This
module collects the pieces everything else leans on:

* parsing/formatting of rationals as ``"p/q"`` strings,
* the admissible parameter range for the map coefficient,
* exact Chebyshev evaluation, including a parity-reduced form that turns
  the tangent ratios appearing in atom-vertex formulas into plain
  rationals, and a fast-doubling form for very large indices,
* directed rational enclosures of square roots and rational powers,
  used wherever a half-integer power of the parameter is needed.

When gmpy2 is importable, its mpz/mpq types back the heavy integer work
(the fast-doubling recurrences can involve million-bit integers); the
results are converted back to ``Fraction`` at the boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

try:  # pragma: no cover - exercised only when gmpy2 is installed
    from gmpy2 import mpq as _mpq, mpz as _mpz

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    _mpq = Fraction
    _mpz = int
    HAVE_GMPY2 = False

Rational = Fraction


def _mpq_to_fraction(q) -> Fraction:
    # plain ints only: Fractions built from gmpy2 integers would carry mpz
    # internals, which breaks later mixed arithmetic.  The value is already
    # canonical (gmpy2 keeps lowest terms, positive denominator), so the
    # constructor's gcd pass is skipped - it dominates run time for
    # million-bit operands.
    f = Fraction.__new__(Fraction)
    f._numerator = int(q.numerator)
    f._denominator = int(q.denominator)
    return f

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def p_sub(a: Point, b: Point) -> Point:
    return Point(a.x - b.x, a.y - b.y)


def p_add(a: Point, b: Point) -> Point:
    return Point(a.x + b.x, a.y + b.y)


def cross(a, b) -> Fraction:
    """2-vector cross product a_x b_y - a_y b_x."""
    return a[0] * b[1] - a[1] * b[0]


def to_field(x: Fraction):
    """The fast rational field: gmpy2-backed when available."""
    if HAVE_GMPY2:
        return _mpq(x.numerator, x.denominator)
    return x


def from_field(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return _mpq_to_fraction(x)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and 'p/q' or decimal strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact inputs; pass a string or Fraction")
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def lambda_in_range(lam: Fraction) -> bool:
    """True iff the map coefficient lies in the supported open interval.

    The upper end is the algebraic number 2*cos(2*pi/9), the middle root of
    x^3 - 3x + 1, so the test stays exact for rational input.
    """
    if lam <= -1:
        return False
    if lam <= 1:
        return True
    if lam >= 2:
        return False
    return lam**3 - 3 * lam + 1 < 0


def require_lambda(lam: Fraction) -> Fraction:
    lam = as_rational(lam)
    if not lambda_in_range(lam):
        raise ValueError(f"parameter {lam} outside the supported range (-1, 2cos(2pi/9))")
    return lam


# ---------------------------------------------------------------------------
# Chebyshev machinery
# ---------------------------------------------------------------------------

def chebyshev_t(k: int, t: Fraction) -> Fraction:
    """First-kind Chebyshev value T_k(t), exact, k may be negative."""
    k = abs(k)
    if k == 0:
        return ONE
    a, b = _mpq(1), _mpq(t.numerator, t.denominator)
    tt = 2 * b
    for _ in range(k - 1):
        a, b = b, tt * b - a
    return _mpq_to_fraction(b)


def chebyshev_u(k: int, t: Fraction) -> Fraction:
    """Second-kind Chebyshev value U_k(t), exact.  U_{-1} = 0, U_{-k-1} = -U_{k-1}."""
    if k == -1:
        return ZERO
    if k < -1:
        return -chebyshev_u(-k - 2, t)
    tq = _mpq(t.numerator, t.denominator)
    a, b = _mpq(1), 2 * tq
    if k == 0:
        return ONE
    tt = 2 * tq
    for _ in range(k - 1):
        a, b = b, tt * b - a
    return _mpq_to_fraction(b)


def chebyshev_pair_fast(k: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """(T_k(t), U_{k-1}(t)) by integer matrix fast doubling.

    Uses the identity  [[t, t^2-1], [1, t]]^k = [[T_k, (t^2-1) U_{k-1}],
    [U_{k-1}, T_k]], scaled to integers; intended for the very large indices
    occurring in the inner-atom vertex formulas, where the linear recurrence
    would be quadratic in k.
    """
    if k < 0:
        raise ValueError("index must be non-negative")
    if k == 0:
        return ONE, ZERO
    tn, td = t.numerator, t.denominator
    a = _mpz(tn * td)
    b = _mpz(tn * tn - td * td)
    c = _mpz(td * td)

    def mul(m1, m2):
        a1, b1, c1 = m1
        a2, b2, c2 = m2
        return (a1 * a2 + b1 * c2, a1 * b2 + b1 * a2, c1 * a2 + a1 * c2)

    result = None
    power = (a, b, c)
    n = k
    while n:
        if n & 1:
            result = power if result is None else mul(result, power)
        n >>= 1
        if n:
            power = mul(power, power)
    big_a, _big_b, big_c = result
    denom = _mpz(td) ** (2 * k)
    tk = _mpq(big_a, denom)
    uk1 = _mpq(big_c, denom)
    return _mpq_to_fraction(tk), _mpq_to_fraction(uk1)


_FAST_CUTOVER = 512


def chebyshev_pair(k: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """(T_k(t), U_{k-1}(t)) choosing recurrence or fast doubling by size."""
    if k > _FAST_CUTOVER:
        return chebyshev_pair_fast(k, t)
    return chebyshev_t(k, t), chebyshev_u(k - 1, t)


def tan_ratio(k: int, lam: Fraction) -> Fraction:
    """tan(theta)/tan(k*theta) for odd k, with theta = asin(lam/2), exact.

    With c = cos(theta) the ratio equals T_k(c) / (c U_{k-1}(c)); for odd k
    both Chebyshev values have a single factor of c which cancels, leaving a
    rational function of c^2 = 1 - lam^2/4.  The reduced values r with
    T_k(c) = c^(k mod 2) r are produced by the usual three-term recurrence,
    which alternates between the coefficients 2c^2 and 2.
    """
    if k % 2 != 1 or k < 1:
        raise ValueError("tan_ratio is defined for odd positive indices")
    c2 = 1 - lam * lam / 4
    c2q = _mpq(c2.numerator, c2.denominator)

    def reduced(idx: int, r0, r1):
        vals = [r0, r1]
        for j in range(1, idx):
            if j % 2 == 1:
                vals.append(2 * c2q * vals[-1] - vals[-2])
            else:
                vals.append(2 * vals[-1] - vals[-2])
        return vals[idx]

    num = reduced(k, _mpq(1), _mpq(1))       # T_k(c)/c, k odd
    den = reduced(k - 1, _mpq(1), _mpq(2))   # U_{k-1}(c), k-1 even
    return _mpq_to_fraction(num / den)


# ---------------------------------------------------------------------------
# Directed rational enclosures of roots and rational powers
# ---------------------------------------------------------------------------

def _int_nth_root(n: int, k: int) -> int:
    """floor(n**(1/k)) for non-negative integer n (integer Newton)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << -(-n.bit_length() // k)  # 2**ceil(bits/k) >= n**(1/k)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def root_bracket(x: Fraction, k: int, bits: int = 128) -> tuple[Fraction, Fraction]:
    """Rational lo <= x**(1/k) <= hi with hi - lo <= 2**-bits * scale."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return ZERO, ZERO
    num, den = x.numerator, x.denominator
    # x^(1/k) = (num * den^(k-1))^(1/k) / den
    shift = 1 << bits
    radicand = num * den ** (k - 1) * shift**k
    r = _int_nth_root(radicand, k)
    lo = Fraction(r, den * shift)
    hi = Fraction(r + 1, den * shift)
    return lo, hi


def power_bracket(x: Fraction, num: int, den: int, bits: int = 128) -> tuple[Fraction, Fraction]:
    """Rational enclosure of x**(num/den) for x >= 0."""
    if den == 1:
        v = x**num
        return v, v
    base = x**num if num >= 0 else 1 / (x ** (-num))
    return root_bracket(base, den, bits)
