"""Certified interval arithmetic with rational rounding.

Intervals have exact rational endpoints and are combined with five
elementary rules (sum, product, reciprocal of a sign-definite interval,
integer power, negative integer power of a positive interval).  To keep
denominators small, endpoints may be rounded *outward* to the nearest
rationals with a power-of-ten denominator and a fixed number of significant
digits in the numerator (four by default), so enclosures stay valid after
every step.

Polynomial range bounding evaluates each monomial over a box of variable
ranges.  A dedicated cut-off device handles boxes in which an integer
variable ``m`` is bounded only by ``lam**(-1/4)``: monomials with a negative
power of m use m >= 2, and monomials with lam-degree a and m-degree
b <= 4a use lam^a m^b in [0, lam0^(a - b/4)]; any other shape is rejected,
never silently bounded.

Transcendental inputs (the angle asin(lam/2), tangents of derived angles,
pi) enter as verified enclosures: a high-precision approximation is
bracketed and the bracket is confirmed with directed interval evaluations,
after which everything downstream is exact interval arithmetic.

The remainder-check catalogue at the bottom compares exact vertex,
periodic-point and disk-area values against truncated expansions, scaled by
the stated power of the parameter, and tests whether the enclosure lands
inside a bundled reference interval.  A violation is reported with its
witness sample, never absorbed.  One bundled reference (``fix_y``) is
inconsistent with exact evaluation (its printed cubic coefficient cannot
match; see README) and is retained only to exercise the reporting path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import mpmath as mp

from .exact import ONE, ZERO, as_rational, power_bracket
from .geometry import metric_factor_sq
from .return_map import (
    NumericVertices,
    admissible,
    fixed_point,
    vertex_low_in,
    vertex_low_out,
    vertex_top_in,
    vertex_top_out,
)


# ---------------------------------------------------------------------------
# Intervals and the elementary rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, value) -> bool:
        value = as_rational(value)
        return self.lo <= value <= self.hi

    def contains_interval(self, other: "RInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def point_interval(x) -> RInterval:
    x = as_rational(x)
    return RInterval(x, x)


def iv_add(a: RInterval, b: RInterval) -> RInterval:
    return RInterval(a.lo + b.lo, a.hi + b.hi)


def iv_neg(a: RInterval) -> RInterval:
    return RInterval(-a.hi, -a.lo)


def iv_sub(a: RInterval, b: RInterval) -> RInterval:
    return iv_add(a, iv_neg(b))


def iv_mul(a: RInterval, b: RInterval) -> RInterval:
    products = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return RInterval(min(products), max(products))


def iv_inv(a: RInterval) -> RInterval:
    if a.lo * a.hi <= 0:
        raise ZeroDivisionError(
            f"reciprocal of {a} undefined: the rule requires a sign-definite interval"
        )
    vals = (1 / a.lo, 1 / a.hi)
    return RInterval(min(vals), max(vals))


def iv_div(a: RInterval, b: RInterval) -> RInterval:
    return iv_mul(a, iv_inv(b))


def iv_pow(a: RInterval, n: int) -> RInterval:
    if n < 0:
        return iv_pow_neg(a, -n)
    if n == 0:
        return point_interval(ONE)
    lo, hi = a.lo**n, a.hi**n
    if n % 2 == 0 and a.lo < 0 < a.hi:
        return RInterval(ZERO, max(lo, hi))
    return RInterval(min(lo, hi), max(lo, hi))


def iv_pow_neg(a: RInterval, n: int) -> RInterval:
    if a.lo <= 0:
        raise ValueError("negative power requires a strictly positive interval")
    return iv_inv(iv_pow(a, n))


def iv_scale(a: RInterval, c) -> RInterval:
    return iv_mul(point_interval(c), a)


def iv_poly1(coeffs: Sequence, x: RInterval) -> RInterval:
    """sum coeffs[k] * x^k with rational coefficients, no rounding."""
    total = point_interval(ZERO)
    for k, c in enumerate(coeffs):
        if c:
            total = iv_add(total, iv_scale(iv_pow(x, k), c))
    return total


# ---------------------------------------------------------------------------
# Outward rational rounding
# ---------------------------------------------------------------------------

def _round_directed(x: Fraction, digits: int, up: bool) -> Fraction:
    if x == 0:
        return ZERO
    sign = 1 if x > 0 else -1
    mag = abs(x)
    k = 0
    lo_lim = Fraction(10) ** (digits - 1)
    hi_lim = Fraction(10) ** digits
    while mag < lo_lim:
        mag *= 10
        k += 1
    while mag >= hi_lim:
        mag /= 10
        k -= 1
    num = mag.numerator // mag.denominator
    exact = num == mag
    if not exact and ((up and sign > 0) or (not up and sign < 0)):
        num += 1
    return sign * Fraction(num) * Fraction(10) ** (-k)


def round_outward(a: RInterval, digits: int) -> RInterval:
    """Round endpoints outward to ``digits`` significant decimal digits.

    The lower endpoint moves down, the upper up, so the result always
    contains the input; common factors are reduced afterwards (which leaves
    the value unchanged).
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    return RInterval(
        _round_directed(a.lo, digits, up=False),
        _round_directed(a.hi, digits, up=True),
    )


# ---------------------------------------------------------------------------
# Polynomial range bounding with the cut-off device
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialTerm:
    """coefficient * prod(var ** exponent)."""

    coefficient: Fraction
    exponents: tuple[tuple[str, int], ...]

    @staticmethod
    def make(coefficient, **exponents: int) -> "MonomialTerm":
        return MonomialTerm(
            as_rational(coefficient),
            tuple(sorted((v, e) for v, e in exponents.items() if e)),
        )

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        out = self.coefficient
        for var, exp in self.exponents:
            out *= values[var] ** exp
        return out


@dataclass(frozen=True)
class CutoffConstraint:
    """Variable ``m_var`` is an integer >= 2 bounded by lam ** (-1/4),
    with lam in (0, lam0]."""

    lam_var: str
    m_var: str
    lam0: Fraction


def bound_polynomial(
    terms: Sequence[MonomialTerm],
    box: Mapping[str, RInterval],
    constraint: Optional[CutoffConstraint] = None,
    digits: int = 4,
) -> RInterval:
    """Interval enclosure of a sum of monomials over a box, rounding outward
    after every elementary operation.

    With a cut-off constraint the (lam, m) part of each monomial is bounded
    by the cut-off device; a monomial it cannot bound raises a ValueError
    naming the term.
    """
    total = point_interval(ZERO)
    for term in terms:
        acc = point_interval(term.coefficient)
        exps = dict(term.exponents)
        if constraint is not None and constraint.m_var in exps:
            a = exps.pop(constraint.lam_var, 0)
            b = exps.pop(constraint.m_var)
            if a < 0:
                raise ValueError(f"monomial {term}: negative lam-degree under cut-off")
            if b < 0:
                acc = round_outward(iv_mul(acc, RInterval(ZERO, Fraction(2) ** b)), digits)
                if a:
                    acc = round_outward(iv_mul(acc, iv_pow(box[constraint.lam_var], a)), digits)
            elif b <= 4 * a:
                _, hi = power_bracket(constraint.lam0, 4 * a - b, 4)
                acc = round_outward(iv_mul(acc, RInterval(ZERO, hi)), digits)
            else:
                raise ValueError(
                    f"monomial {term} not boundable: m-degree {b} exceeds 4 * lam-degree {4 * a}"
                )
        for var, exp in exps.items():
            acc = round_outward(iv_mul(acc, iv_pow(box[var], exp)), digits)
        total = round_outward(iv_add(total, acc), digits)
    return total


def poly_derivative(coeffs: Sequence[Fraction]) -> list[Fraction]:
    return [as_rational(c) * k for k, c in enumerate(coeffs)][1:]


def derivative_positivity_certificate(
    coeffs: Sequence[Fraction], x_range: RInterval, digits: int = 4
) -> RInterval:
    """Interval bound of the derivative of a one-variable polynomial over a
    range; a strictly positive result certifies monotone growth."""
    dcoeffs = poly_derivative(coeffs)
    terms = [MonomialTerm.make(c, x=k) for k, c in enumerate(dcoeffs)]
    return bound_polynomial(terms, {"x": x_range}, digits=digits)


#: Reference sextic for the monotonicity demo: direct interval bounding of
#: the polynomial straddles zero, but its derivative bounds positive over
#: [0, 6171/10000], so it is increasing there and its sign follows from the
#: endpoint values.
MONOTONE_DEMO_POLY: tuple[Fraction, ...] = (
    Fraction(-1728000),
    Fraction(3456000),
    Fraction(-11513088, 5),
    Fraction(1433600),
    Fraction(2328576, 25),
    Fraction(384768768, 3125),
    Fraction(24096096064, 1953125),
)

MONOTONE_DEMO_RANGE = RInterval(Fraction(0), Fraction(6171, 10000))


# ---------------------------------------------------------------------------
# Verified transcendental enclosures
# ---------------------------------------------------------------------------

def mpf_to_fraction(x) -> Fraction:
    # read the raw mantissa/exponent so no context rounding sneaks in, and
    # coerce to plain ints (mpmath may hand back gmpy2 integers)
    if isinstance(x, tuple):
        raw = x
    elif hasattr(x, "_mpf_"):
        raw = x._mpf_
    else:
        raw = mp.mpf(x)._mpf_
    sign, man, exp, _ = raw
    man = int(man)
    exp = int(exp)
    if man == 0:
        if exp == 0:
            return ZERO
        raise ValueError("non-finite value")
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def pi_interval(dps: int = 40) -> RInterval:
    old = mp.iv.dps
    mp.iv.dps = dps
    try:
        v = mp.iv.pi
        lo_raw, hi_raw = v._mpi_
        return RInterval(mpf_to_fraction(lo_raw), mpf_to_fraction(hi_raw))
    finally:
        mp.iv.dps = old


def theta_interval(lam, dps: int = 40) -> RInterval:
    """Verified enclosure of asin(lam/2) for rational 0 < lam < 2.

    The candidate bracket around a high-precision approximation is checked
    by directed interval evaluation of the sine; it is widened (never
    narrowed) until both one-sided checks pass.
    """
    lam = as_rational(lam)
    if not 0 < lam < 2:
        raise ValueError("angle enclosure needs 0 < lam < 2")
    half = lam / 2
    old = mp.iv.dps
    mp.iv.dps = dps + 15
    try:
        with mp.workdps(dps + 15):
            approx = mp.asin(mp.mpf(lam.numerator) / lam.denominator / 2)
            eps = mp.mpf(10) ** (-dps)
            for _ in range(20):
                lo = approx - eps
                hi = approx + eps
                sin_lo = mp.iv.sin(mp.iv.mpf(lo))
                sin_hi = mp.iv.sin(mp.iv.mpf(hi))
                if (mpf_to_fraction(sin_lo._mpi_[1]) < half
                        < mpf_to_fraction(sin_hi._mpi_[0])):
                    return RInterval(mpf_to_fraction(lo), mpf_to_fraction(hi))
                eps *= 10
        raise RuntimeError("could not verify the angle bracket")
    finally:
        mp.iv.dps = old


def tau_interval(n, lam, dps: int = 40) -> RInterval:
    """Verified enclosure of tan(pi/4 - 2 n asin(lam/2)); n may be any
    non-negative rational (enclosed exactly)."""
    theta = theta_interval(lam, dps)
    n = as_rational(n)
    old = mp.iv.dps
    mp.iv.dps = dps + 10
    try:
        # endpoint conversions must happen at full working precision; the
        # default context would collapse the bracket to double width
        with mp.workdps(dps + 20):
            th = mp.iv.mpf([mp.mpf(theta.lo.numerator) / theta.lo.denominator,
                            mp.mpf(theta.hi.numerator) / theta.hi.denominator])
            nn = mp.iv.mpf([mp.mpf(n.numerator) / n.denominator,
                            mp.mpf(n.numerator) / n.denominator])
            angle = mp.iv.pi / 4 - 2 * nn * th
            t = mp.iv.tan(angle)
            lo_raw, hi_raw = t._mpi_
            return RInterval(mpf_to_fraction(lo_raw), mpf_to_fraction(hi_raw))
    finally:
        mp.iv.dps = old


def sqrt_interval(x, bits: int = 128) -> RInterval:
    lo, hi = power_bracket(as_rational(x), 1, 2, bits)
    return RInterval(lo, hi)


def lam_half_power_interval(lam, half_exponent: int, bits: int = 128) -> RInterval:
    """Enclosure of lam ** (half_exponent / 2) for positive rational lam."""
    lo, hi = power_bracket(as_rational(lam), half_exponent, 2, bits)
    return RInterval(lo, hi)


# ---------------------------------------------------------------------------
# Remainder-membership catalogue
# ---------------------------------------------------------------------------

@dataclass
class CutoffSample:
    """One sampling point in the cut-off regime, with lazy exact values."""

    lam: Fraction
    m: Optional[int] = None
    n: Optional[int] = None
    dps: int = 40
    _cache: dict = field(default_factory=dict, repr=False)

    def describe(self) -> str:
        parts = [f"lam={self.lam}"]
        if self.m is not None:
            parts.append(f"m={self.m}")
        if self.n is not None:
            parts.append(f"n={self.n}")
        return " ".join(parts)

    def get(self, key: str, builder: Callable):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def tau(self) -> RInterval:
        return self.get("tau", lambda: tau_interval(self.n, self.lam, self.dps))

    @property
    def z(self):
        return self.get("z", lambda: fixed_point(self.m, self.n, self.lam).point)


@dataclass(frozen=True)
class RemainderSpec:
    """A bundled reference interval and the recipe that reproduces it.

    ``power_halves`` is twice the exponent of lam that scales the remainder
    (so 6 means lam^3, 5 means lam^(5/2)).  ``min_m`` restricts the sampler
    to the indices the reference interval covers; ``sampler`` names which
    family of samples applies.  ``expected_violation`` marks the one entry
    kept for negative testing of the reporting path.
    """

    name: str
    published: RInterval
    power_halves: int
    sampler: str
    evaluate: Callable[[CutoffSample], RInterval]
    min_m: int = 2
    expected_violation: bool = False


def tighten(x, digits: int = 70) -> RInterval:
    """Outward-round an exact value into a narrow interval.

    Exact vertex and periodic-point coordinates can be million-bit
    rationals; combining them with the (much wider) transcendental
    enclosures at full size is pointless.  Outward rounding keeps the
    containment guarantee and caps operand sizes.
    """
    return round_outward(point_interval(x), digits)


def _scale_by_lam_power(value: RInterval, lam: Fraction, power_halves: int) -> RInterval:
    if power_halves % 2 == 0:
        return iv_div(value, point_interval(lam ** (power_halves // 2)))
    return iv_div(value, lam_half_power_interval(lam, power_halves))


def _spec_top_out_x(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    px = vertex_top_out(m, lam).x
    mu = 2 * m + 1
    value = (Fraction(m + 1, mu) + lam - lam**2 * m * (m + 1) / (6 * mu) - px) * mu
    return _scale_by_lam_power(point_interval(value), lam, 6)


def _spec_low_out_x(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    px = vertex_low_out(m, lam).x
    mu = 2 * m - 1
    value = (Fraction(m, mu) + lam - lam**2 * (m + 2) * (m + 3) / (6 * mu) - px) * mu
    return _scale_by_lam_power(point_interval(value), lam, 6)


def _spec_low_out_y(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    py = vertex_low_out(m, lam).y
    mu = 2 * m - 1
    value = (py - 1) * mu + lam - lam**3 * m * (m + 2) / 3
    return _scale_by_lam_power(point_interval(value), lam, 8)


def _spec_top_out_first_x(s: CutoffSample) -> RInterval:
    lam = s.lam
    px = vertex_top_out(1, lam).x
    value = px - Fraction(2, 3) - lam + lam**2 / 9
    return _scale_by_lam_power(point_interval(value), lam, 8)


def _spec_low_out_zero_y(s: CutoffSample) -> RInterval:
    lam = s.lam
    py = vertex_low_out(0, lam).y
    value = py - (1 - lam / 2 + 3 * lam**2 / 2 - lam**3)
    return _scale_by_lam_power(point_interval(value), lam, 8)


def _spec_low_out_one_y(s: CutoffSample) -> RInterval:
    lam = s.lam
    py = vertex_low_out(1, lam).y
    value = py - (1 - lam + 5 * lam**2 / 2 - 4 * lam**3)
    return _scale_by_lam_power(point_interval(value), lam, 8)


def _spec_top_in_x(s: CutoffSample) -> RInterval:
    lam = s.lam
    qx = tighten(vertex_top_in(s.n, lam).x)
    tau = s.tau
    expansion = iv_add(
        iv_add(
            iv_scale(iv_add(point_interval(ONE), tau), Fraction(1, 2)),
            iv_scale(iv_poly1((3, -2, -1), tau), lam / 8),
        ),
        iv_scale(iv_poly1((2, -5, 2, 1), tau), lam**2 / 32),
    )
    return _scale_by_lam_power(iv_sub(qx, expansion), lam, 6)


def _spec_low_in_x(s: CutoffSample) -> RInterval:
    lam = s.lam
    qx = tighten(vertex_low_in(s.n, lam).x)
    tau = s.tau
    expansion = iv_add(
        iv_add(
            iv_scale(iv_add(point_interval(ONE), tau), Fraction(1, 2)),
            iv_scale(iv_poly1((7, -2, -5), tau), lam / 8),
        ),
        iv_scale(iv_poly1((-6, -29, 10, 25), tau), lam**2 / 32),
    )
    return _scale_by_lam_power(iv_sub(qx, expansion), lam, 6)


def _spec_low_in_y(s: CutoffSample) -> RInterval:
    lam = s.lam
    qy = tighten(vertex_low_in(s.n, lam).y)
    tau = s.tau
    expansion = iv_add(
        iv_add(
            iv_sub(point_interval(ONE), iv_scale(tau, lam)),
            iv_scale(iv_poly1((1, 2, 5), tau), lam**2 / 4),
        ),
        iv_scale(iv_poly1((2, 11, 10, 25), tau), -(lam**3) / 16),
    )
    return _scale_by_lam_power(iv_sub(qy, expansion), lam, 8)


def _spec_fix_x(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    zx = tighten(s.z.x)
    tau = s.tau
    expansion = iv_add(
        iv_add(
            iv_scale(iv_add(point_interval(ONE), tau), Fraction(1, 2)),
            iv_scale(iv_poly1((7, 0, 1 - 4 * m), tau), lam / 8),
        ),
        iv_scale(
            iv_poly1((4, -(5 + 16 * m), 0, 1 - 8 * m + 16 * m * m), tau), lam**2 / 32
        ),
    )
    return _scale_by_lam_power(iv_sub(zx, expansion), lam, 5)


def _spec_fix_y(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    zy = tighten(s.z.y)
    tau = s.tau
    expansion = iv_add(
        iv_add(
            iv_add(
                point_interval(ONE),
                iv_scale(iv_poly1((1, -(2 * m + 1)), tau), lam / 4),
            ),
            iv_scale(iv_poly1((1 + 2 * m, 0, 8 * m * m + 2 * m - 1), tau), lam**2 / 16),
        ),
        iv_scale(
            iv_poly1(
                (
                    -20 + 48 * m - 16 * m * m,
                    23 + 6 * m - 80 * m * m,
                    0,
                    -(3 - 18 * m + 96 * m**3),
                ),
                tau,
            ),
            lam**3 / 192,
        ),
    )
    return _scale_by_lam_power(iv_sub(zy, expansion), lam, 7)


def _disk_coeff_top(s: CutoffSample) -> RInterval:
    # interval form from tightened coordinates: exact squaring of the huge
    # rationals is pointless below the reference-interval resolution
    lam = s.lam
    zy = tighten(s.z.y)
    return iv_scale(iv_pow(iv_sub(zy, point_interval(1)), 2), metric_factor_sq(lam))


def _disk_coeff_hyp(s: CutoffSample) -> RInterval:
    lam = s.lam
    zx, zy = tighten(s.z.x), tighten(s.z.y)
    base = iv_add(
        iv_sub(point_interval(1 + lam - lam**2 - lam**3), iv_scale(zy, 1 + lam**4)),
        iv_add(
            iv_scale(zx, -2 * lam + lam**3),
            iv_scale(zy, 3 * lam**2),
        ),
    )
    return iv_scale(iv_pow(base, 2), metric_factor_sq(lam))


def _spec_disk_top(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    tau = s.tau
    lead = iv_scale(iv_pow(iv_poly1((1, -(2 * m + 1)), tau), 2), lam**2 / 16)
    inner = iv_sub(_disk_coeff_top(s), lead)
    return _scale_by_lam_power(iv_mul(pi_interval(s.dps), inner), lam, 5)


def _spec_disk_hyp(s: CutoffSample) -> RInterval:
    lam, m = s.lam, s.m
    tau = s.tau
    lead = iv_scale(iv_pow(iv_poly1((1, -(2 * m - 3)), tau), 2), lam**2 / 16)
    inner = iv_sub(_disk_coeff_hyp(s), lead)
    return _scale_by_lam_power(iv_mul(pi_interval(s.dps), inner), lam, 5)


def _spec_m_tau(s: CutoffSample) -> RInterval:
    return iv_scale(s.tau, s.m)


def _spec_tau_mid(s: CutoffSample) -> RInterval:
    from .areas import equal_area_tau  # local import to avoid a cycle

    lam, m = s.lam, s.m
    with mp.workdps(50):
        tau_star = equal_area_tau(m, lam, dps=50)
        pad = mp.mpf(10) ** -25
        enclosure = RInterval(
            mpf_to_fraction(tau_star - pad), mpf_to_fraction(tau_star + pad)
        )
    shifted = iv_sub(enclosure, point_interval(Fraction(1, 2 * m - 1)))
    return iv_div(shifted, lam_half_power_interval(lam, 1))


def remainder_specs() -> dict[str, RemainderSpec]:
    """The bundled reference intervals, keyed by quantity name."""
    specs = [
        RemainderSpec("top_out_x", RInterval(Fraction(-1697, 10**8), Fraction(1507, 10**5)),
                      6, "vertex", _spec_top_out_x),
        RemainderSpec("low_out_x", RInterval(Fraction(-8523, 10**6), Fraction(1243, 10**5)),
                      6, "vertex", _spec_low_out_x),
        RemainderSpec("low_out_y", RInterval(Fraction(-5449, 10**6), Fraction(1203, 50000)),
                      8, "vertex", _spec_low_out_y),
        RemainderSpec("top_out_first_x", RInterval(Fraction(-463, 12500), Fraction(-3703, 10**5)),
                      8, "lam_only", _spec_top_out_first_x),
        RemainderSpec("low_out_zero_y", RInterval(Fraction(1249, 500), Fraction(313, 125)),
                      8, "lam_only", _spec_low_out_zero_y),
        RemainderSpec("low_out_one_y", RInterval(Fraction(8739, 1000), Fraction(8763, 1000)),
                      8, "lam_only", _spec_low_out_one_y),
        RemainderSpec("top_in_x", RInterval(Fraction(-2051, 5000), Fraction(4499, 10000)),
                      6, "inward", _spec_top_in_x),
        RemainderSpec("low_in_x", RInterval(Fraction(-23, 20), Fraction(389, 250)),
                      6, "inward", _spec_low_in_x),
        RemainderSpec("low_in_y", RInterval(Fraction(519, 5000), Fraction(539, 100)),
                      8, "inward", _spec_low_in_y),
        RemainderSpec("fix_x", RInterval(Fraction(-1033, 2000), Fraction(2671, 5000)),
                      5, "pair", _spec_fix_x, min_m=3),
        RemainderSpec("fix_y", RInterval(Fraction(-5563, 1000), Fraction(7373, 1000)),
                      7, "pair", _spec_fix_y, min_m=3, expected_violation=True),
        RemainderSpec("disk_top", RInterval(Fraction(-6347, 10**5), Fraction(183, 6250)),
                      5, "pair", _spec_disk_top, min_m=3),
        RemainderSpec("disk_hyp", RInterval(Fraction(-7091, 10**5), Fraction(2857, 50000)),
                      5, "pair", _spec_disk_hyp, min_m=3),
        RemainderSpec("m_tau", RInterval(Fraction(2, 5), Fraction(1001, 1000)),
                      0, "pair", _spec_m_tau, min_m=3),
        RemainderSpec("tau_mid", RInterval(Fraction(-2189, 10**5), Fraction(599, 25000)),
                      1, "mid", _spec_tau_mid, min_m=3),
    ]
    return {s.name: s for s in specs}


@dataclass(frozen=True)
class MembershipReport:
    name: str
    published: RInterval
    tested: int
    violations: tuple[tuple[str, RInterval], ...]
    lo_seen: Optional[float] = None
    hi_seen: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "published": [str(self.published.lo), str(self.published.hi)],
            "samples_tested": self.tested,
            "min_observed": self.lo_seen,
            "max_observed": self.hi_seen,
            "pass": self.ok,
            "violations": [
                {"sample": w, "enclosure": [str(e.lo), str(e.hi)]}
                for w, e in self.violations
            ],
        }


def check_remainder_membership(
    spec: RemainderSpec, samples: Sequence[CutoffSample]
) -> MembershipReport:
    """Evaluate a remainder enclosure on each sample and test containment."""
    violations = []
    lo_seen = None
    hi_seen = None
    for s in samples:
        enclosure = spec.evaluate(s)
        lo_seen = float(enclosure.lo) if lo_seen is None else min(lo_seen, float(enclosure.lo))
        hi_seen = float(enclosure.hi) if hi_seen is None else max(hi_seen, float(enclosure.hi))
        if not spec.published.contains_interval(enclosure):
            violations.append((s.describe(), enclosure))
    return MembershipReport(
        spec.name, spec.published, len(samples), tuple(violations), lo_seen, hi_seen
    )


# ---------------------------------------------------------------------------
# Samplers for the cut-off regime
# ---------------------------------------------------------------------------

#: ceiling of the small-parameter regime the reference intervals cover
LAM0 = Fraction(1, 10**4)

_DYADIC_EXPONENTS = (14, 14, 15, 15, 16)


def _m_limit(lam: Fraction) -> int:
    # largest integer m with m <= lam**(-1/4)
    m = 2
    while (m + 1) ** 4 <= 1 / lam:
        m += 1
    return m


def make_samples(kind: str, count: int, seed: int, dps: int = 40) -> list[CutoffSample]:
    """Random samples in the cut-off regime (lam <= 1e-4, 2 <= m <= lam^(-1/4)).

    'vertex'   rational lam, m only (cheap exact vertices);
    'lam_only' rational lam;
    'inward'   rational lam and an inward index (tau enclosure included);
    'pair'     dyadic lam and an exactly admissibility-checked pair (m, n);
    'mid'      dyadic lam and m for the equal-area diagnostic.
    """
    rng = random.Random(seed)
    out: list[CutoffSample] = []
    guard = 0
    while len(out) < count:
        guard += 1
        if guard > 50 * count:
            raise RuntimeError(f"sampler for {kind!r} failed to fill the quota")
        if kind in ("vertex", "lam_only", "inward"):
            lam = Fraction(rng.randint(1, 10**4), 10**8)
            assert lam <= LAM0
            if kind == "vertex":
                out.append(CutoffSample(lam, m=rng.randint(2, _m_limit(lam)), dps=dps))
            elif kind == "lam_only":
                out.append(CutoffSample(lam, dps=dps))
            else:
                out.append(CutoffSample(lam, n=rng.randint(1, 400), dps=dps))
        elif kind == "pair":
            k = rng.choice(_DYADIC_EXPONENTS)
            lam = Fraction(1, 2**k)
            m = rng.randint(3, _m_limit(lam))
            nv = NumericVertices(lam, 30)
            with mp.workdps(30):
                n_lo = int(mp.ceil(nv.index_of_low_x(nv.low_out(m - 1)[0])))
                n_hi = int(mp.ceil(nv.index_of_top_x(nv.top_out(m)[0])))
            if n_hi < n_lo:
                continue
            n = rng.randint(n_lo, n_hi)
            for candidate in (n, n - 1, n + 1):
                if candidate >= 1 and admissible(m, candidate, lam):
                    sample = CutoffSample(lam, m=m, n=candidate, dps=dps)
                    sample.z  # materialise while the vertex cache is hot
                    out.append(sample)
                    break
        elif kind == "mid":
            k = rng.choice(_DYADIC_EXPONENTS)
            lam = Fraction(1, 2**k)
            out.append(CutoffSample(lam, m=rng.randint(3, _m_limit(lam)), dps=dps))
        else:
            raise ValueError(f"unknown sample kind {kind!r}")
    return out
