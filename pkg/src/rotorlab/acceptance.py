"""The verification gate: every release-blocking check as a callable.

Each criterion returns a result with a pass flag and a human-readable
detail string; the CLI ``verify`` subcommand runs them in order and exits
non-zero on any failure, and the test suite asserts each one individually.
Tolerances are fixed here, not configurable: they are the contract.

Reference values bundled below (the family-total table, the series total,
its fraction of the complementary area, the rounding example) were frozen
from independent evaluations: the integrals against a second quadrature at
tighter tolerance, the exact-arithmetic items against the exact kernels.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath as mp

from . import areas, dynamics, geometry, interval, return_map
from .exact import Point

#: family-total limits (ascending family index, 20+ digits each)
LIMIT_TABLE = {
    1: "0.04394252102495575454",
    2: "0.027915747684440153071",
    3: "0.0043390573122902285760",
    4: "0.0011842200753144612564",
    5: "0.00044544206984605774866",
    6: "0.00020336198417268636974",
    7: "0.00010566669827864850788",
    8: "0.0000602301047692083869367",
}

SERIES_TOTAL_2000 = "0.0783220277996"

#: frozen regression band for residual / lam^2 in the covering ledger
RESIDUAL_BAND = (0.0, 8.0)


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    elapsed: float


def _result(number, name, ok, detail, t0) -> CriterionResult:
    return CriterionResult(number, name, bool(ok), detail, time.time() - t0)


# ---------------------------------------------------------------------------

def criterion_1_limit_table(ctx) -> CriterionResult:
    t0 = time.time()
    with mp.workdps(30):
        errs = []
        for m in range(1, 9):
            val = areas.limit_family_total(m)
            errs.append(abs(val - mp.mpf(LIMIT_TABLE[m])))
        worst = max(errs)
        elapsed = time.time() - t0
        ok = worst <= mp.mpf("1e-12") and elapsed < 10.0
        return _result(
            1, "limit family-total table",
            ok, f"worst |error| = {mp.nstr(worst, 3)}, elapsed {elapsed:.2f}s (< 10s)", t0,
        )


def criterion_2_series_sum(ctx) -> CriterionResult:
    t0 = time.time()
    with mp.workdps(30):
        total = areas.limit_series(2000)
        ctx["series_total"] = total
        err = abs(total - mp.mpf(SERIES_TOTAL_2000))
        elapsed = time.time() - t0
        ok = err <= mp.mpf("1e-10") and elapsed < 120.0
        return _result(
            2, "2000-term series total",
            ok, f"total = {mp.nstr(total, 13)}, |error| = {mp.nstr(err, 3)}, "
                f"elapsed {elapsed:.1f}s (< 120s)", t0,
        )


def criterion_3_percentage(ctx) -> CriterionResult:
    t0 = time.time()
    with mp.workdps(30):
        total = ctx.get("series_total")
        if total is None:
            total = areas.limit_series(2000)
        ratio = total / (1 - mp.pi / 4)
        ok = mp.mpf("0.355") <= ratio <= mp.mpf("0.370")
        return _result(3, "fraction of the complementary area", ok,
                       f"ratio = {mp.nstr(ratio, 6)} in [0.355, 0.370]", t0)


def criterion_4_period_code_oracle(ctx) -> CriterionResult:
    t0 = time.time()
    lam = Fraction(1, 64)
    counts = return_map.rotation_counts(lam)
    pairs = return_map.admissible_pairs(lam, 10, counts)
    failures = []
    for m, n in pairs:
        rec = return_map.verify_fixed_point(return_map.fixed_point(m, n, lam, counts), lam)
        if not rec.verified:
            failures.append((m, n))
    elapsed = time.time() - t0
    ok = not failures and len(pairs) > 0 and elapsed < 60.0
    return _result(
        4, "exact period/code oracle",
        ok, f"{len(pairs)} admissible pairs verified, failures: {failures or 'none'}, "
            f"elapsed {elapsed:.1f}s (< 60s)", t0,
    )


def _sample_in_atom(poly, rng) -> Point:
    verts = poly.vertices
    weights = [Fraction(rng.randint(1, 64), 64) for _ in verts]
    total = sum(weights)
    x = sum(w * v.x for w, v in zip(weights, verts)) / total
    y = sum(w * v.y for w, v in zip(weights, verts)) / total
    return Point(x, y)


def criterion_5_involution_suite(ctx) -> CriterionResult:
    t0 = time.time()
    rng = random.Random(20260808)
    point_checks = 0
    failures = []
    for lam in (Fraction(1, 64), Fraction(1, 256)):
        counts = return_map.rotation_counts(lam)
        n_values = sorted({1, 2, 3, counts.inward // 2, counts.inward - 2})
        m_values = sorted({1, 2, 3, 5, 8, min(counts.outward, 20)})
        while point_checks < 500 * (1 if lam == Fraction(1, 64) else 2):
            for n in n_values:
                atom = return_map.atom_in(n, lam, counts)
                z = _sample_in_atom(atom.polygon, rng)
                if not atom.polygon.contains(z, strict=True):
                    continue
                z1, code = _apply_inward(z, n, lam)
                z2, _ = _apply_inward(z1, n, lam)
                if z2 != z or tuple(code) != atom.expected_code:
                    failures.append(("in", lam, n))
                point_checks += 1
            for m in m_values:
                atom = return_map.atom_out(m, lam, counts)
                z = _sample_in_atom(atom.polygon, rng)
                if not atom.polygon.contains(z, strict=True):
                    continue
                z1, code = _apply_outward(z, m, lam)
                z2, _ = _apply_outward(z1, m, lam)
                if z2 != z or tuple(code) != atom.expected_code:
                    failures.append(("out", lam, m))
                point_checks += 1
        for m in range(1, min(counts.outward, 20) + 1):
            report = return_map.verify_atom_involution(return_map.atom_out(m, lam, counts), lam)
            if not (report.involutive and report.vertex_map_ok and report.stays_clear_of_sector):
                failures.append(("vertex-map", lam, m, report.failures))
    ok = not failures and point_checks >= 1000
    return _result(
        5, "involution and vertex-exchange suite",
        ok, f"{point_checks} sample points, vertex maps to index 20 at two parameters, "
            f"failures: {failures[:3] or 'none'}", t0,
    )


def _run_steps(z: Point, lam: Fraction, steps: int) -> tuple[Point, list[int]]:
    from . import kernel

    xn, yn, den = kernel.point_to_ints(z)
    triple, code, _ = kernel.orbit_code(xn, yn, den, lam.numerator, lam.denominator, steps)
    return Point(*kernel.ints_to_point(triple)), code


def _apply_inward(z: Point, n: int, lam) -> tuple[Point, list[int]]:
    cur, code = _run_steps(z, lam, 4 * (n - 1))
    return dynamics.involution_g(cur), code


def _apply_outward(z: Point, m: int, lam) -> tuple[Point, list[int]]:
    return _run_steps(dynamics.involution_g(z), lam, 4 * m + 3)


def _expected_generator_rows(lam: Fraction):
    one = Fraction(1)
    g = (1 + 2 * lam - lam**2 - lam**3) / (2 - lam**2)
    gp = (1 - lam**2) / (2 - lam**2)
    return {
        0: [((0, 0), (0, 1))],
        1: [((1, 0), (0, 0))],
        2: [((lam, 1), (0, 0))],
        3: [((lam * lam, lam), (1, 0))],
        4: [((-lam + lam**3, lam * lam), (lam, 1))],
        5: [
            ((lam - 2 * lam**2 + lam**4, 1 - lam + lam**3), (g - 1, one)),
            ((gp, 0), (lam * lam, lam)),
        ],
    }


def criterion_6_generator_table(ctx) -> CriterionResult:
    t0 = time.time()
    bad = []
    for lam in (Fraction(1, 64), Fraction(1, 10)):
        table = geometry.discontinuity_set(lam, 5)
        expected = _expected_generator_rows(lam)
        for t, rows in expected.items():
            got = [((s.first.x, s.first.y), (s.second.x, s.second.y)) for s in table[t]]
            if got != rows:
                bad.append((lam, t))
    ok = not bad
    return _result(6, "generator-table regression", ok,
                   f"rows 0..5 exact at two parameters, mismatches: {bad or 'none'}", t0)


def criterion_7_covering_ledger(ctx) -> CriterionResult:
    t0 = time.time()
    with mp.workdps(40):
        ledgers = {k: areas.covering_report(Fraction(1, 2**k)) for k in range(6, 13)}
        ratios = {k: float(led.residual / led.lam**2) for k, led in
                  ((k, ledgers[k]) for k in ledgers)}
        band_ok = all(RESIDUAL_BAND[0] <= r <= RESIDUAL_BAND[1] for r in ratios.values())
        out_ratio = ledgers[10].outward_sum / mp.mpf(2) ** -10
        out_ok = abs(out_ratio - mp.mpf(9) / 4) / (mp.mpf(9) / 4) < 0.05
        xs = [mp.mpf(1) / 2**k for k in range(8, 13)]
        ys = [ledgers[k].inward_sum for k in range(8, 13)]
        n = len(xs)
        sx, sy = sum(xs), sum(ys)
        sxx = sum(x * x for x in xs)
        sxy = sum(x * y for x, y in zip(xs, ys))
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        intercept = (sy - slope * sx) / n
        target = 1 - mp.pi / 4
        int_ok = abs(intercept - target) < mp.mpf("1e-3")
        slope_target = (mp.pi - 9) / 4
        slope_ok = abs(slope - slope_target) / abs(slope_target) < 0.05
        ok = band_ok and out_ok and int_ok and slope_ok
        return _result(
            7, "covering ledger",
            ok, f"residual/lam^2 in {sorted(set(round(r, 2) for r in ratios.values()))}, "
                f"outward/lam at k=10: {mp.nstr(out_ratio, 6)} vs 2.25, inward fit "
                f"intercept {mp.nstr(intercept, 8)} vs {mp.nstr(target, 8)}, "
                f"slope {mp.nstr(slope, 4)} vs {mp.nstr(slope_target, 4)}", t0,
        )


def criterion_8_crossover(ctx) -> CriterionResult:
    t0 = time.time()
    rec64 = return_map.crossover(Fraction(1, 64))
    nearest = int(mp.nint(rec64.m_root))
    rec4 = return_map.crossover(Fraction(1, 10**4))
    rel = abs(rec4.m_root - rec4.m_series) / rec4.m_root
    bound = 10 * mp.mpf(10) ** -8
    ok = nearest == 6 and rel <= bound
    return _result(
        8, "crossover index",
        ok, f"nearest integer at 2^-6: {nearest} (expect 6); relative root/series gap "
            f"at 1e-4: {mp.nstr(rel, 3)} <= {mp.nstr(bound, 3)}", t0,
    )


def _fuzz_soundness(trials: int, seed: int) -> int:
    rng = random.Random(seed)
    violations = 0
    var_names = ("x", "y", "z")
    for _ in range(trials):
        nvars = rng.randint(1, 3)
        names = var_names[:nvars]
        box = {}
        for v in names:
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            w = Fraction(rng.randint(1, 30), rng.randint(1, 7))
            box[v] = interval.RInterval(a, a + w)
        terms = []
        for _ in range(rng.randint(1, 4)):
            coeff = Fraction(rng.randint(-50, 50), rng.randint(1, 11))
            exps = {v: rng.randint(0, 3) for v in names}
            terms.append(interval.MonomialTerm.make(coeff, **exps))
        enclosure = interval.bound_polynomial(terms, box, digits=4)
        for _ in range(3):
            values = {}
            for v in names:
                t = Fraction(rng.randint(0, 128), 128)
                values[v] = box[v].lo + t * (box[v].hi - box[v].lo)
            exact = sum(t.evaluate(values) for t in terms)
            if exact not in enclosure:
                violations += 1
    return violations


def criterion_9_interval_engine(ctx) -> CriterionResult:
    t0 = time.time()
    with mp.workdps(40):
        pi_iv = interval.pi_interval(40)
    sample = interval.RInterval(pi_iv.lo / 2, pi_iv.hi)
    rounded = interval.round_outward(sample, 4)
    # Four-digit outward rounding of [pi/2, pi]; the upper endpoint reduces
    # from 3142/1000. (The containment property forces the /1000 scale.)
    example_ok = rounded == interval.RInterval(Fraction(157, 100), Fraction(3142, 1000))
    violations = _fuzz_soundness(10_000, seed=414213)
    cert = interval.derivative_positivity_certificate(
        interval.MONOTONE_DEMO_POLY, interval.MONOTONE_DEMO_RANGE
    )
    cert_ok = cert.lo > 0
    ok = example_ok and violations == 0 and cert_ok
    return _result(
        9, "interval engine",
        ok, f"rounding example {'ok' if example_ok else 'FAILED: ' + str(rounded)}; "
            f"soundness fuzz violations: {violations}/10000; derivative bound "
            f"[{float(cert.lo):.0f}, {float(cert.hi):.0f}] positive: {cert_ok}", t0,
    )


def criterion_10_remainder_membership(ctx) -> CriterionResult:
    t0 = time.time()
    specs = interval.remainder_specs()
    required = ("top_out_x", "top_in_x", "fix_x", "disk_top", "tau_mid", "m_tau")
    sample_cache: dict[str, list] = {}
    bad = []
    for name in required:
        spec = specs[name]
        if spec.sampler not in sample_cache:
            sample_cache[spec.sampler] = interval.make_samples(spec.sampler, 100, seed=97)
        report = interval.check_remainder_membership(spec, sample_cache[spec.sampler])
        if not report.ok:
            bad.append((name, report.violations[:2]))
    elapsed = time.time() - t0
    ok = not bad and elapsed < 300.0
    return _result(
        10, "remainder membership",
        ok, f"six enclosure families x 100 samples, violations: {bad or 'none'}, "
            f"elapsed {elapsed:.1f}s (< 300s)", t0,
    )


def criterion_11_pocket_families(ctx) -> CriterionResult:
    t0 = time.time()
    lam = Fraction(1, 64)
    region = return_map.mirrored(return_map.side_pocket(lam))
    report = return_map.scan_return_codes(region, lam, max_steps=100, grid=64)
    found = {}
    for fam in report.families:
        label = return_map.classify_pocket_code(fam.code, fam.transit_time or 0)
        if label:
            found[label] = fam.sample_count
    need = [("A", 1), ("A", 2), ("B", 1), ("B", 2), ("C", 1), ("C", 2)]
    missing = [lbl for lbl in need if lbl not in found]
    ok = not missing
    return _result(
        11, "pocket code families",
        ok, f"families found: {sorted(found)}, missing: {missing or 'none'}", t0,
    )


CRITERIA: tuple[Callable, ...] = (
    criterion_1_limit_table,
    criterion_2_series_sum,
    criterion_3_percentage,
    criterion_4_period_code_oracle,
    criterion_5_involution_suite,
    criterion_6_generator_table,
    criterion_7_covering_ledger,
    criterion_8_crossover,
    criterion_9_interval_engine,
    criterion_10_remainder_membership,
    criterion_11_pocket_families,
)


def run_acceptance(only: Optional[set[int]] = None, echo: bool = True) -> list[CriterionResult]:
    ctx: dict = {}
    results = []
    for fn in CRITERIA:
        number = int(fn.__name__.split("_")[1])
        if only and number not in only:
            continue
        res = fn(ctx)
        results.append(res)
        if echo:
            status = "PASS" if res.ok else "FAIL"
            print(f"{status} criterion {res.number}: {res.name} - {res.detail} "
                  f"[{res.elapsed:.1f}s]")
    return results
