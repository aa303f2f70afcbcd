# cython: language_level=3
"""Exact orbit kernel, compiled twin of ``_orbit_py``.

Same integer-triple contract as the pure-Python module; the arbitrary
precision arithmetic still runs on Python ints (they are the right tool for
exact work), the compilation removes the interpreter dispatch around the
inner loops.  See ``_orbit_py`` for the full contract documentation.
"""

from math import gcd

NONE = 0
PERIOD = 1
HIT = 2
BOUNDARY = 3


cpdef tuple reduce_triple(xn, yn, den):
    g = gcd(gcd(xn, yn), den)
    if g > 1:
        return xn // g, yn // g, den // g
    return xn, yn, den


cpdef tuple step_ints(xn, yn, den, p, q):
    d2 = q * den
    v = p * xn - q * yn
    s = -(v // d2)
    return v + s * d2, q * xn, d2, s, (v % d2 == 0 and v != 0)


cpdef bint in_region(xn, yn, den, list planes):
    cdef bint strict
    for a, b, c, strict in planes:
        t = a * xn + b * yn + c * den
        if t < 0 or (strict and t == 0):
            return False
    return True


cpdef tuple orbit_code(xn, yn, den, p, q, long steps):
    cdef list code = []
    cdef bint hit_boundary = False
    cdef long i
    for i in range(steps):
        d2 = q * den
        v = p * xn - q * yn
        s = -(v // d2)
        if v % d2 == 0 and v != 0:
            hit_boundary = True
        yn = q * xn
        xn = v + s * d2
        den = d2
        g = gcd(gcd(xn, yn), den)
        if g > 1:
            xn //= g
            yn //= g
            den //= g
        code.append(s)
    return (xn, yn, den), code, hit_boundary


cpdef tuple probe(xn, yn, den, p, q, list planes, long max_steps,
                  bint want_period, bint want_hit, bint collect_code):
    cdef long t
    cdef list code = []
    x0, y0, d0 = reduce_triple(xn, yn, den)
    xn, yn, den = x0, y0, d0
    for t in range(1, max_steps + 1):
        d2 = q * den
        v = p * xn - q * yn
        s = -(v // d2)
        if v % d2 == 0 and v != 0:
            return BOUNDARY, t, code
        yn = q * xn
        xn = v + s * d2
        den = d2
        g = gcd(gcd(xn, yn), den)
        if g > 1:
            xn //= g
            yn //= g
            den //= g
        if collect_code:
            code.append(s)
        if want_period and xn == x0 and yn == y0 and den == d0:
            return PERIOD, t, code
        if want_hit and in_region(xn, yn, den, planes):
            return HIT, t, code
    return NONE, 0, code
