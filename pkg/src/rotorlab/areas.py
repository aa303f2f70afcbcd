"""Stability-disk areas, family totals, their small-parameter limit, and
the covering ledger.

Each admissible pair (m, n) carries a symmetric periodic point whose
stability disk is tangent to the top edge of the entry triangle or to its
hypotenuse, whichever is closer in the invariant metric.  Both squared
distances are exact rationals; pi enters exactly once, at reporting time.
The per-family total weights each disk by its orbit length 4(m+n)-1.

As the parameter tends to zero the family totals converge to parameter-free
integrals

    I(a, b, c) = pi/4 * int_{acot(2a-1)}^{acot(2b-1)}
                       ((2c-1) tan(eta) - 1)^2 (pi/4 - eta) d eta,

with the m-th limit equal to I(2,1,2) for m = 1 and
I(m+1,m,m+1) + I(m,m-1,m-1) otherwise; the large-m behaviour is
pi^2/(48 m^4) + pi(pi-1)/(24 m^5) + O(m^-6).

The covering ledger accounts the square's metric area against the main
ellipse, the transit-weighted outward atoms and the transit-weighted inward
atoms; the residual is O(lambda^2).  The big sums over whole families are
evaluated in high-precision floating point from the same vertex formulas
(the exact route is reserved for small indices, where the tests compare the
two), with a fixed ascending summation order for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .exact import as_rational, from_field, require_lambda, to_field
from .geometry import ellipse_radius_sq, metric_factor_sq
from .quadrature import adaptive_quadrature
from .return_map import (
    FamilyCounts,
    NumericVertices,
    fixed_point,
    n_bounds,
    rotation_counts,
)


# ---------------------------------------------------------------------------
# Disk areas for admissible pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiskAreaRecord:
    """Areas of the two candidate tangent disks at a periodic point.

    ``top_coeff`` and ``hyp_coeff`` are the exact rational factors that
    multiply pi (squared metric distances to the top edge and to the
    hypotenuse); ``chosen`` names the smaller one. ``weight`` is the orbit
    length.  ``area`` is the numeric value pi * min(coeffs).
    """

    m: int
    n: int
    top_coeff: Fraction
    hyp_coeff: Fraction
    chosen: str
    weight: int
    area: mp.mpf


def disk_coeffs(m: int, n: int, lam, counts: Optional[FamilyCounts] = None):
    """Exact rational parts of the two disk areas for an admissible pair."""
    lam = as_rational(lam)
    z = fixed_point(m, n, lam, counts).point
    fac = to_field(metric_factor_sq(lam))
    zx, zy, lq = to_field(z.x), to_field(z.y), to_field(lam)
    top = fac * (zy - 1) ** 2
    hyp = fac * (
        1
        - zy
        + (1 - 2 * zx) * lq
        - (1 - 3 * zy) * lq**2
        - (1 - zx) * lq**3
        - zy * lq**4
    ) ** 2
    return from_field(top), from_field(hyp)


def disk_area(m: int, n: int, lam, dps: int = 30,
              counts: Optional[FamilyCounts] = None) -> DiskAreaRecord:
    lam = as_rational(lam)
    top, hyp = disk_coeffs(m, n, lam, counts)
    chosen = "top" if top <= hyp else "hyp"
    coeff = min(top, hyp)
    with mp.workdps(dps):
        area = mp.pi * mp.mpf(coeff.numerator) / coeff.denominator
    return DiskAreaRecord(m, n, top, hyp, chosen, 4 * (m + n) - 1, area)


def family_total(m: int, lam, dps: int = 30,
                 counts: Optional[FamilyCounts] = None) -> mp.mpf:
    """Transit-weighted sum of the minimal disk areas over the admissible
    bracket of m; the rational parts are summed exactly, then scaled by pi."""
    lam = as_rational(lam)
    counts = counts or rotation_counts(lam)
    lo, hi = n_bounds(m, lam, counts)
    total = to_field(Fraction(0))  # exact; the common denominator grows large
    for n in range(lo, hi + 1):
        top, hyp = disk_coeffs(m, n, lam, counts)
        total += to_field(min(top, hyp)) * (4 * (m + n) - 1)
    total = from_field(total)
    with mp.workdps(dps):
        return mp.pi * mp.mpf(total.numerator) / total.denominator


# ---------------------------------------------------------------------------
# The parameter-free limit
# ---------------------------------------------------------------------------

def I_integral(a: int, b: int, c: int, abs_tol: float = 1e-15, dps: int = 30) -> mp.mpf:
    """The limit integral I(a, b, c); adaptive quadrature, absolute error
    bounded by ``abs_tol`` (self-checked in the tests by re-running at a
    tighter tolerance)."""
    if not (a > b >= 1 and c >= 1):
        raise ValueError("indices must satisfy a > b >= 1, c >= 1")
    with mp.workdps(dps):
        lo = mp.acot(2 * a - 1)
        hi = mp.acot(2 * b - 1)
        k = 2 * c - 1

        def f(eta):
            return (k * mp.tan(eta) - 1) ** 2 * (mp.pi / 4 - eta)

        val, _err = adaptive_quadrature(f, lo, hi, abs_tol, dps=dps)
        return mp.pi / 4 * val


def limit_family_total(m: int, abs_tol: float = 1e-15, dps: int = 30) -> mp.mpf:
    """Limit of the m-th family total as the parameter tends to zero."""
    if m < 1:
        raise ValueError("family index must be >= 1")
    if m == 1:
        return I_integral(2, 1, 2, abs_tol, dps)
    return I_integral(m + 1, m, m + 1, abs_tol, dps) + I_integral(
        m, m - 1, m - 1, abs_tol, dps
    )


def limit_series(m_max: int, abs_tol: float = 1e-15, dps: int = 30) -> mp.mpf:
    """Partial sum of the limit family totals, ascending order."""
    with mp.workdps(dps):
        total = mp.mpf(0)
        for m in range(1, m_max + 1):
            total += limit_family_total(m, abs_tol, dps)
        return total


def asymptotic_family_total(m: int, dps: int = 30) -> mp.mpf:
    """Large-m asymptotic form of the limit family total."""
    with mp.workdps(dps):
        m_ = mp.mpf(m)
        return mp.pi**2 / (48 * m_**4) + mp.pi * (mp.pi - 1) / (24 * m_**5)


# ---------------------------------------------------------------------------
# Ellipse area and the covering ledger
# ---------------------------------------------------------------------------

def ellipse_area_coeff(lam) -> Fraction:
    """Exact rational factor of pi in the main ellipse's metric area.

    (2 - 3 lam + lam^3)/(8 - 4 lam); equal, as it must be, to the squared
    metric radius at the tangency point."""
    lam = as_rational(lam)
    coeff = (2 - 3 * lam + lam**3) / (8 - 4 * lam)
    assert coeff == ellipse_radius_sq(lam)
    return coeff


def ellipse_area_main(lam, dps: int = 30) -> mp.mpf:
    coeff = ellipse_area_coeff(lam)
    with mp.workdps(dps):
        return mp.pi * mp.mpf(coeff.numerator) / coeff.denominator


@dataclass(frozen=True)
class AreaLedger:
    """Covering accounting at one parameter value (high-precision reals)."""

    lam: Fraction
    square: mp.mpf
    ellipse: mp.mpf
    outward_sum: mp.mpf
    inward_sum: mp.mpf
    residual: mp.mpf


def _shoelace_abs(pts) -> mp.mpf:
    total = mp.mpf(0)
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2


def covering_report(lam, dps: int = 40,
                    counts: Optional[FamilyCounts] = None) -> AreaLedger:
    """Transit-weighted area ledger: square vs ellipse + outward + inward.

    Atom areas are metric shoelace areas of the vertex formulas evaluated
    in high precision; summation is in ascending family order.
    """
    lam = require_lambda(as_rational(lam))
    counts = counts or rotation_counts(lam)
    nv = NumericVertices(lam, dps)
    with mp.workdps(dps):
        metric = mp.sqrt(1 - nv.lam**2 / 4)

        out_sum = mp.mpf(0)
        upper = (mp.mpf(1), (1 - nv.lam - 3 * nv.lam**2 + nv.lam**3 + nv.lam**4)
                 / (1 - 6 * nv.lam**2 + 5 * nv.lam**4 - nv.lam**6))
        inner = (
            (1 - 6 * nv.lam**2 - 3 * nv.lam**3 + 11 * nv.lam**4 + 4 * nv.lam**5
             - 12 * nv.lam**6 - nv.lam**7 + 6 * nv.lam**8 - nv.lam**10)
            / (1 - 6 * nv.lam**2 + 5 * nv.lam**4 - nv.lam**6),
            (1 - nv.lam - 4 * nv.lam**2 + 3 * nv.lam**3 + 4 * nv.lam**4
             - 7 * nv.lam**5 - nv.lam**6 + 5 * nv.lam**7 - nv.lam**9)
            / (1 - 6 * nv.lam**2 + 5 * nv.lam**4 - nv.lam**6),
        )
        interior1 = (
            1 - 2 * nv.lam**2 + 6 * nv.lam**3 + nv.lam**4 - 5 * nv.lam**5 + nv.lam**7,
            1 - nv.lam + 3 * nv.lam**2 + nv.lam**3 - 4 * nv.lam**4 + nv.lam**6,
        )
        for m in range(1, counts.outward + 1):
            if m == 1:
                pts = [nv.top_out(1), (mp.mpf(1), mp.mpf(1)), nv.low_out(0), interior1]
            elif m == 2:
                pts = [nv.top_out(2), nv.top_out(1), upper, nv.low_out(1), inner,
                       nv.low_out(2)]
            else:
                pts = [nv.top_out(m), nv.top_out(m - 1), nv.low_out(m - 1), nv.low_out(m)]
            out_sum += (4 * m + 3) * _shoelace_abs(pts)
        out_sum *= metric

        in_sum = mp.mpf(0)
        top_prev, low_prev = nv.top_in(0), nv.low_in(0)
        for n in range(1, counts.inward):
            top_cur, low_cur = nv.top_in(n), nv.low_in(n)
            in_sum += 4 * (n - 1) * _shoelace_abs([top_cur, top_prev, low_prev, low_cur])
            top_prev, low_prev = top_cur, low_cur
        in_sum *= metric

        square = metric
        ellipse = ellipse_area_main(lam, dps)
        residual = square - ellipse - out_sum - in_sum
        return AreaLedger(lam, square, ellipse, out_sum, in_sum, residual)


def outward_atom_area_closed_form(m: int, lam, dps: int = 40) -> mp.mpf:
    """Product form of the m-th outward atom's metric area (m >= 3):
    lam^4 cos((2m-1) theta) / (8 prod_{k=-1,0,1} sin((2m+2k-1) theta))."""
    if m < 3:
        raise ValueError("closed form applies from m = 3 on")
    lam = as_rational(lam)
    with mp.workdps(dps):
        lamf = mp.mpf(lam.numerator) / lam.denominator
        theta = mp.asin(lamf / 2)
        denom = mp.mpf(8)
        for k in (-1, 0, 1):
            denom *= mp.sin((2 * m + 2 * k - 1) * theta)
        return lamf**4 * mp.cos((2 * m - 1) * theta) / denom


# ---------------------------------------------------------------------------
# Equal-area diagnostic (where the two tangent disks coincide)
# ---------------------------------------------------------------------------

def equal_area_tau(m: int, lam, dps: int = 50) -> mp.mpf:
    """The tau-value at which the two candidate disk areas agree, found by
    bisection over the continuous inward index; diagnostic only (production
    sums take the minimum per pair, which needs no such split)."""
    if m < 2:
        raise ValueError("the equal-area point is defined for m >= 2")
    lam = require_lambda(as_rational(lam))
    nv = NumericVertices(lam, dps)
    with mp.workdps(dps):
        lamf = nv.lam
        theta = nv.theta

        def diff_of_tau(tau):
            n = (mp.pi / 4 - mp.atan(tau)) / (2 * theta)
            zx, zy = nv.intersection_point(m, n)
            top = (1 - lamf**2 / 4) * (zy - 1) ** 2
            hyp = (1 - lamf**2 / 4) * (
                1 - zy + (1 - 2 * zx) * lamf - (1 - 3 * zy) * lamf**2
                - (1 - zx) * lamf**3 - zy * lamf**4
            ) ** 2
            return top - hyp

        lo = mp.mpf(1) / (2 * m + 1)
        hi = mp.mpf(1) / (2 * m - 3) if m > 2 else mp.mpf("0.999")
        if not diff_of_tau(lo) < 0 < diff_of_tau(hi):
            raise RuntimeError("equal-area bracket failed")
        for _ in range(120):  # width ~ 1e-36, far below the enclosure pad
            mid = (lo + hi) / 2
            if diff_of_tau(mid) < 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2
