"""Exact orbit kernel, pure-Python reference implementation.

A point is carried as an integer triple ``(xn, yn, den)`` standing for
``(xn/den, yn/den)`` with ``den > 0``; the map coefficient is ``p/q`` in
lowest terms.  One step of the square map sends

    (x, y)  ->  (p/q * x - y + s, x),      s = -floor(p/q * x - y),

so on scaled integers the new denominator is ``q*den`` and everything stays
in integer arithmetic.  A gcd reduction after every step keeps the operands
near their minimal size.

Regions are lists of integer half-plane constraints ``(a, b, c, strict)``
meaning ``a*x + b*y + c > 0`` (or ``>= 0`` when ``strict`` is falsy); a
point is inside when every constraint holds.

``BOUNDARY`` is reported when an iterate lands exactly on the coding
discontinuity (the floor argument hits an integer), so callers can discard
those samples explicitly instead of trusting a tie-break.

The compiled twin in ``_orbit.pyx`` implements the same contract; the two
are cross-checked in the test suite and compared in
``scripts/benchmark_kernel.py``.
"""

from math import gcd

NONE = 0
PERIOD = 1
HIT = 2
BOUNDARY = 3


def reduce_triple(xn, yn, den):
    g = gcd(gcd(xn, yn), den)
    if g > 1:
        return xn // g, yn // g, den // g
    return xn, yn, den


def step_ints(xn, yn, den, p, q):
    """One exact map step; returns (xn', yn', den', symbol, on_boundary)."""
    d2 = q * den
    v = p * xn - q * yn
    s = -(v // d2)
    return v + s * d2, q * xn, d2, s, (v % d2 == 0 and v != 0)


def in_region(xn, yn, den, planes):
    for a, b, c, strict in planes:
        t = a * xn + b * yn + c * den
        if t < 0 or (strict and t == 0):
            return False
    return True


def orbit_code(xn, yn, den, p, q, steps):
    """Iterate ``steps`` times; returns (final triple, code list, boundary flag)."""
    code = []
    hit_boundary = False
    for _ in range(steps):
        xn, yn, den, s, on_b = step_ints(xn, yn, den, p, q)
        hit_boundary = hit_boundary or on_b
        xn, yn, den = reduce_triple(xn, yn, den)
        code.append(s)
    return (xn, yn, den), code, hit_boundary


def probe(xn, yn, den, p, q, planes, max_steps, want_period, want_hit, collect_code):
    """Iterate until an exact return to the start (PERIOD), entry into the
    region (HIT), a boundary landing (BOUNDARY), or ``max_steps`` (NONE).

    Returns (kind, t, code) with ``t`` the 1-based step count of the event
    (0 for NONE) and ``code`` the symbol list up to and including the event
    when ``collect_code`` is set, else an empty list.
    """
    x0, y0, d0 = reduce_triple(xn, yn, den)
    xn, yn, den = x0, y0, d0
    code = []
    for t in range(1, max_steps + 1):
        xn, yn, den, s, on_b = step_ints(xn, yn, den, p, q)
        if on_b:
            return BOUNDARY, t, code
        xn, yn, den = reduce_triple(xn, yn, den)
        if collect_code:
            code.append(s)
        if want_period and xn == x0 and yn == y0 and den == d0:
            return PERIOD, t, code
        if want_hit and in_region(xn, yn, den, planes):
            return HIT, t, code
    return NONE, 0, code
