"""Kernel selection: compiled orbit core with pure-Python fallback.

The compiled extension ``rotorlab._orbit`` is preferred when it has been
built; ``ROTORLAB_KERNEL=py`` or ``=ext`` forces a choice (``ext`` raises if
the extension is absent).  Both implementations share one contract, tested
against each other, so selection never changes results, only speed.
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import _orbit_py

_choice = os.environ.get("ROTORLAB_KERNEL", "").strip().lower()
if _choice == "py":
    impl = _orbit_py
elif _choice == "ext":
    from . import _orbit as impl  # type: ignore[no-redef]
else:
    try:
        from . import _orbit as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _orbit_py

KERNEL_NAME = "ext" if impl is not _orbit_py else "py"

NONE = _orbit_py.NONE
PERIOD = _orbit_py.PERIOD
HIT = _orbit_py.HIT
BOUNDARY = _orbit_py.BOUNDARY

step_ints = impl.step_ints
reduce_triple = impl.reduce_triple
in_region = impl.in_region
orbit_code = impl.orbit_code
probe = impl.probe


def point_to_ints(p) -> tuple[int, int, int]:
    """(x, y) with Fraction coordinates -> common-denominator triple."""
    xd, yd = p[0].denominator, p[1].denominator
    g = xd * yd // _gcd(xd, yd)
    return p[0].numerator * (g // xd), p[1].numerator * (g // yd), g


def ints_to_point(triple):
    xn, yn, den = triple
    return Fraction(xn, den), Fraction(yn, den)


def lam_to_ints(lam: Fraction) -> tuple[int, int]:
    return lam.numerator, lam.denominator


def halfplanes_from_rational(planes) -> list[tuple[int, int, int, bool]]:
    """Clear denominators in rational half-planes (a, b, c, strict)."""
    out = []
    for a, b, c, strict in planes:
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        m = _lcm(_lcm(a.denominator, b.denominator), c.denominator)
        out.append((int(a * m), int(b * m), int(c * m), bool(strict)))
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b)
