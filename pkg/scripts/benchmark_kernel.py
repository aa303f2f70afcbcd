#!/usr/bin/env python3
"""Benchmark the compiled orbit kernel against its pure-Python twin.

Times three representative workloads on identical inputs and prints
per-step costs and the speedup factor.  Run after building the extension
in place (python setup.py build_ext --inplace).
"""

import random
import time
from fractions import Fraction

from rotorlab import _orbit_py

try:
    from rotorlab import _orbit as _orbit_ext
except ImportError:
    _orbit_ext = None

from rotorlab.return_map import entry_halfplanes


def bench(impl, planes, *, seed=1):
    rng = random.Random(seed)
    t_orbit = t_probe = t_period = 0.0
    steps_orbit = steps_probe = steps_period = 0

    # long code-collecting orbits (scanning workload)
    pts = [(rng.randint(1, 4095), rng.randint(1, 4095), 4096) for _ in range(120)]
    t0 = time.perf_counter()
    for xn, yn, den in pts:
        impl.orbit_code(xn, yn, den, 1, 64, 400)
        steps_orbit += 400
    t_orbit = time.perf_counter() - t0

    # first-hit probes (portrait / scan workload)
    t0 = time.perf_counter()
    for xn, yn, den in pts:
        kind, t, _ = impl.probe(xn, yn, den, 1, 64, planes, 400, False, True, False)
        steps_probe += t if t else 400
    t_probe = time.perf_counter() - t0

    # period detection (verification workload)
    t0 = time.perf_counter()
    for xn, yn, den in pts:
        kind, t, _ = impl.probe(xn, yn, den, 1, 64, [], 300, True, False, False)
        steps_period += t if t else 300
    t_period = time.perf_counter() - t0

    return (
        ("orbit_code", t_orbit, steps_orbit),
        ("probe/hit", t_probe, steps_probe),
        ("probe/period", t_period, steps_period),
    )


def main():
    planes = entry_halfplanes(Fraction(1, 64))
    rows_py = bench(_orbit_py, planes)
    print(f"{'workload':<14} {'pure-python':>14} {'compiled':>14} {'speedup':>9}")
    if _orbit_ext is None:
        print("compiled kernel not built; showing pure-python timings only")
        for name, t, steps in rows_py:
            print(f"{name:<14} {t / steps * 1e6:>11.2f} us/step")
        return
    rows_ext = bench(_orbit_ext, planes)
    for (name, t_py, s_py), (_, t_ext, s_ext) in zip(rows_py, rows_ext):
        us_py = t_py / s_py * 1e6
        us_ext = t_ext / s_ext * 1e6
        print(f"{name:<14} {us_py:>11.2f} us {us_ext:>11.2f} us {us_py / us_ext:>8.2f}x")


if __name__ == "__main__":
    main()
