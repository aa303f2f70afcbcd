"""Command-line surface.

Subcommands orchestrate the library into deterministic file outputs: exact
quantities are serialised as "p/q" strings, floating renderings carry the
precision they were computed at, and identical invocations produce byte
identical files (fixed summation and iteration orders, fixed default seed).

    rotorlab disco      --lambda 1/64 --depth 5 --format csv --out table.csv
    rotorlab portrait   --lambda 1/64 --grid 256 256 --steps 256 --out img.ppm
    rotorlab atoms      --lambda 1/64 --out atoms.json
    rotorlab fixed-points --lambda 1/64 --m-max 6 --out fp.json
    rotorlab areas      --lambda 1/4096 --m-max 8 --out areas.csv
    rotorlab covering   --lambda 1/64 --lambda 1/128 --out ledger.json
    rotorlab crossover  --lambda 1/64 --out crossover.json
    rotorlab interval-demo
    rotorlab verify [--only 1,2,...]

Exit codes: 0 success, 1 verification failure, 2 invalid input.
``ROTORLAB_THREADS`` caps the worker count of the parallel subcommands.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from . import acceptance, areas, geometry, interval, kernel, return_map
from .dynamics import map_fixed_point
from .exact import Point, as_rational, format_rational, lambda_in_range
from .geometry import ellipse_radius_sq, q_norm_sq


def worker_count() -> int:
    raw = os.environ.get("ROTORLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_lambda(text: str) -> Fraction:
    try:
        lam = as_rational(text)
    except (TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid parameter {text!r}: {exc}")
    if not lambda_in_range(lam):
        raise ValueError(f"parameter {lam} outside the supported range")
    return lam


def _out_stream(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _write(path, text: str) -> None:
    stream, close = _out_stream(path)
    stream.write(text)
    if close:
        stream.close()


# ---------------------------------------------------------------------------
# disco: the discontinuity structure
# ---------------------------------------------------------------------------

def _segments_csv(table) -> str:
    lines = ["t,x1,y1,x2,y2"]
    for t in sorted(table):
        for seg in table[t]:
            lines.append(
                f"{t},{format_rational(seg.first.x)},{format_rational(seg.first.y)},"
                f"{format_rational(seg.second.x)},{format_rational(seg.second.y)}"
            )
    return "\n".join(lines) + "\n"


def _svg_header(width=720, height=720):
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="-0.6 -0.1 2.2 1.2" width="{width}" height="{height}">\n'
        '<g transform="translate(0,1) scale(1,-1)">\n'
        '<rect x="0" y="0" width="1" height="1" fill="none" '
        'stroke="#888" stroke-width="0.002"/>\n'
    )


def _segments_svg(table, lam) -> str:
    parts = [_svg_header()]
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
    for t in sorted(table):
        color = palette[abs(t) % len(palette)]
        for seg in table[t]:
            parts.append(
                f'<line x1="{float(seg.first.x):.8f}" y1="{float(seg.first.y):.8f}" '
                f'x2="{float(seg.second.x):.8f}" y2="{float(seg.second.y):.8f}" '
                f'stroke="{color}" stroke-width="0.0015"/>\n'
            )
    c = map_fixed_point(lam)
    parts.append(
        f'<circle cx="{float(c.x):.8f}" cy="{float(c.y):.8f}" r="0.004" fill="#000"/>\n'
    )
    parts.append("</g></svg>\n")
    return "".join(parts)


def cmd_disco(args) -> int:
    lam = _parse_lambda(args.lam)
    if args.depth > 64:
        raise ValueError("depth capped at 64")
    table = geometry.discontinuity_set(lam, args.depth)
    if args.format == "svg":
        _write(args.out, _segments_svg(table, lam))
    else:
        _write(args.out, _segments_csv(table))
    return 0


# ---------------------------------------------------------------------------
# portrait
# ---------------------------------------------------------------------------

ISLAND_COLOR = (60, 60, 160)
BOUNDARY_COLOR = (255, 255, 255)
UNRESOLVED_COLOR = (0, 0, 0)


def _period_color(t: int):
    return (40 + 97 * t) % 200 + 55, (70 + 57 * t) % 200 + 55, (90 + 31 * t) % 200 + 55


def _escape_color(t: int, cap: int):
    level = 40 + int(180 * min(t, cap) / cap)
    return level, level, level


def classify_pixel(p: Point, lam: Fraction, steps: int, planes, ell_center,
                   ell_radius_sq) -> tuple[int, int, int]:
    """Period colour if the exact orbit closes within the cap, island colour
    inside the main invariant ellipse, grey escape-time shading for orbits
    reaching the entry triangle, black otherwise."""
    pq = (lam.numerator, lam.denominator)
    xn, yn, den = kernel.point_to_ints(p)
    kind, t, _ = kernel.probe(xn, yn, den, *pq, [], min(8, steps), True, False, False)
    if kind == kernel.PERIOD:
        return _period_color(t)
    if kind == kernel.BOUNDARY:
        return BOUNDARY_COLOR
    dx, dy = p.x - ell_center.x, p.y - ell_center.y
    if q_norm_sq((dx, dy), lam) < ell_radius_sq:
        return ISLAND_COLOR
    kind, t, _ = kernel.probe(xn, yn, den, *pq, planes, steps, True, True, False)
    if kind == kernel.PERIOD:
        return _period_color(t)
    if kind == kernel.HIT:
        return _escape_color(t, steps)
    if kind == kernel.BOUNDARY:
        return BOUNDARY_COLOR
    return UNRESOLVED_COLOR


def _render_rows(job) -> tuple[int, bytes]:
    j0, j1, lam, width, height, steps, planes, center, radius_sq = job
    chunk = bytearray()
    for j in range(j0, j1):
        y = Fraction(2 * (height - 1 - j) + 1, 2 * height)
        for i in range(width):
            x = Fraction(2 * i + 1, 2 * width)
            chunk += bytes(classify_pixel(Point(x, y), lam, steps, planes, center, radius_sq))
    return j0, bytes(chunk)


def render_portrait(lam: Fraction, width: int, height: int, steps: int) -> bytes:
    """Raster classification; row bands render in parallel when
    ROTORLAB_THREADS allows, merged in fixed order (byte-identical output)."""
    planes = return_map.entry_halfplanes(lam) if lam > 0 else []
    center = map_fixed_point(lam)
    radius_sq = ellipse_radius_sq(lam)
    workers = min(worker_count(), height)
    band = -(-height // max(1, 4 * workers))
    jobs = [
        (j0, min(j0 + band, height), lam, width, height, steps, planes, center, radius_sq)
        for j0 in range(0, height, band)
    ]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = dict(pool.map(_render_rows, jobs))
    else:
        chunks = dict(map(_render_rows, jobs))
    header = f"P6\n{width} {height}\n255\n".encode()
    return header + b"".join(chunks[j0] for j0, *_ in jobs)


def cmd_portrait(args) -> int:
    lam = _parse_lambda(args.lam)
    width, height = args.grid
    if width * height > 4096 * 4096:
        raise ValueError("grid capped at 4096 x 4096")
    data = render_portrait(lam, width, height, args.steps)
    path = args.out or "portrait.ppm"
    with open(path, "wb") as fh:
        fh.write(data)
    return 0


# ---------------------------------------------------------------------------
# atoms / fixed points / areas / covering / crossover
# ---------------------------------------------------------------------------

def _point_json(p: Point):
    return [format_rational(p.x), format_rational(p.y)]


def _atom_json(atom: return_map.AtomRecord):
    return {
        "kind": atom.kind,
        "indices": list(atom.indices),
        "vertices": [_point_json(v) for v in atom.polygon.vertices],
        "edges_included": list(atom.polygon.edge_included),
        "transit_time": atom.transit_time,
        "expected_code": "".join(map(str, atom.expected_code)),
        "degenerate": atom.degenerate,
    }


def cmd_atoms(args) -> int:
    lam = _parse_lambda(args.lam)
    counts = return_map.rotation_counts(lam)
    inward = [return_map.atom_in(n, lam, counts) for n in range(1, counts.inward)]
    outward = [return_map.atom_out(m, lam, counts) for m in range(1, counts.outward + 1)]
    payload = {
        "lambda": format_rational(lam),
        "counts": {"inward": counts.inward, "outward": counts.outward,
                   "nongeneric": counts.nongeneric},
        "inward": [_atom_json(a) for a in inward],
        "outward": [_atom_json(a) for a in outward],
    }
    _write(args.out, json.dumps(payload, indent=1) + "\n")
    return 0


def cmd_fixed_points(args) -> int:
    lam = _parse_lambda(args.lam)
    counts = return_map.rotation_counts(lam)
    records = []
    for m, n in return_map.admissible_pairs(lam, args.m_max, counts):
        rec = return_map.verify_fixed_point(
            return_map.fixed_point(m, n, lam, counts), lam
        )
        records.append(
            {
                "m": m,
                "n": n,
                "point": _point_json(rec.point),
                "period": rec.period,
                "code": "".join(map(str, rec.code)),
                "verified": rec.verified,
            }
        )
    payload = {"lambda": format_rational(lam), "fixed_points": records}
    _write(args.out, json.dumps(payload, indent=1) + "\n")
    return 0 if all(r["verified"] for r in records) else 1


def cmd_areas(args) -> int:
    lam = _parse_lambda(args.lam)
    counts = return_map.rotation_counts(lam)
    digits = args.digits
    lines = ["m,n,A0,A1,chosen,t,area"]
    with mp.workdps(digits):
        for m, n in return_map.admissible_pairs(lam, args.m_max, counts):
            rec = areas.disk_area(m, n, lam, dps=digits, counts=counts)
            lines.append(
                f"{m},{n},{format_rational(rec.top_coeff)},"
                f"{format_rational(rec.hyp_coeff)},{rec.chosen},{rec.weight},"
                f"{mp.nstr(rec.area, digits)}"
            )
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_covering(args) -> int:
    rows = []
    digits = max(args.digits, 30)
    for text in args.lam:
        lam = _parse_lambda(text)
        led = areas.covering_report(lam, dps=digits + 10)
        with mp.workdps(digits + 10):
            rows.append(
                {
                    "lambda": format_rational(lam),
                    "square": mp.nstr(led.square, 30),
                    "ellipse": mp.nstr(led.ellipse, 30),
                    "outward_sum": mp.nstr(led.outward_sum, 30),
                    "inward_sum": mp.nstr(led.inward_sum, 30),
                    "residual": mp.nstr(led.residual, 30),
                    "precision_digits": digits + 10,
                }
            )
    _write(args.out, json.dumps({"ledgers": rows}, indent=1) + "\n")
    return 0


def cmd_crossover(args) -> int:
    rows = []
    for text in args.lam:
        lam = _parse_lambda(text)
        rec = return_map.crossover(lam, dps=args.digits + 20)
        with mp.workdps(args.digits + 20):
            rows.append(
                {
                    "lambda": format_rational(lam),
                    "m_root": mp.nstr(rec.m_root, args.digits),
                    "n_root": mp.nstr(rec.n_root, args.digits),
                    "m_series": mp.nstr(rec.m_series, args.digits),
                    "n_series": mp.nstr(rec.n_series, args.digits),
                    "nearest_m": int(mp.nint(rec.m_root)),
                    "precision_digits": args.digits,
                }
            )
    _write(args.out, json.dumps({"crossover": rows}, indent=1) + "\n")
    return 0


# ---------------------------------------------------------------------------
# interval demo and verify
# ---------------------------------------------------------------------------

def cmd_interval_demo(args) -> int:
    specs = interval.remainder_specs()
    spec = specs["top_out_x"]
    report = interval.check_remainder_membership(
        spec, interval.make_samples(spec.sampler, 5, seed=2026)
    )
    pi_iv = interval.pi_interval(40)
    half_pi = interval.RInterval(pi_iv.lo / 2, pi_iv.hi)
    rounded = interval.round_outward(half_pi, 4)
    cert = interval.derivative_positivity_certificate(
        interval.MONOTONE_DEMO_POLY, interval.MONOTONE_DEMO_RANGE
    )
    a = interval.RInterval(Fraction(1), Fraction(2))
    b = interval.RInterval(Fraction(-1), Fraction(2))
    payload = {
        "rounding_example": {
            "input": "[pi/2, pi]",
            "digits": 4,
            "result": [format_rational(rounded.lo), format_rational(rounded.hi)],
        },
        "rule_examples": {
            "sum": str(interval.iv_add(a, interval.RInterval(Fraction(3), Fraction(4)))),
            "product": str(interval.iv_mul(b, interval.RInterval(Fraction(3), Fraction(4)))),
        },
        "derivative_positivity": {
            "range": [format_rational(interval.MONOTONE_DEMO_RANGE.lo),
                      format_rational(interval.MONOTONE_DEMO_RANGE.hi)],
            "bound": [str(cert.lo), str(cert.hi)],
            "positive": cert.lo > 0,
        },
        "remainder_check": report.to_json(),
    }
    _write(args.out, json.dumps(payload, indent=1) + "\n")
    return 0


def cmd_verify(args) -> int:
    only = None
    if args.only:
        only = {int(x) for x in args.only.split(",")}
    results = acceptance.run_acceptance(only=only)
    return 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotorlab",
        description="exact-arithmetic laboratory for the near-quarter-turn square map",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi_lambda=False):
        if multi_lambda:
            p.add_argument("--lambda", dest="lam", action="append", required=True,
                           help="map coefficient p/q (repeatable)")
        else:
            p.add_argument("--lambda", dest="lam", required=True,
                           help="map coefficient as a fraction p/q")
        p.add_argument("--digits", type=int, default=30,
                       help="reporting precision (>= 15)")
        p.add_argument("--seed", type=int, default=2026, help="seed for sampled paths")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json", "svg", "ppm"), default=None)

    p = sub.add_parser("disco", help="discontinuity-structure table / figure")
    common(p)
    p.add_argument("--depth", type=int, default=5)
    p.set_defaults(fn=cmd_disco)

    p = sub.add_parser("portrait", help="orbit-classification raster (binary PPM)")
    common(p)
    p.add_argument("--grid", type=int, nargs=2, default=(256, 256), metavar=("W", "H"))
    p.add_argument("--steps", type=int, default=256)
    p.set_defaults(fn=cmd_portrait)

    p = sub.add_parser("atoms", help="regular atoms of both involutions (JSON)")
    common(p)
    p.set_defaults(fn=cmd_atoms)

    p = sub.add_parser("fixed-points", help="symmetric periodic points, verified (JSON)")
    common(p)
    p.add_argument("--m-max", type=int, default=6)
    p.set_defaults(fn=cmd_fixed_points)

    p = sub.add_parser("areas", help="stability-disk areas (CSV)")
    common(p)
    p.add_argument("--m-max", type=int, default=6)
    p.set_defaults(fn=cmd_areas)

    p = sub.add_parser("covering", help="area ledger per parameter (JSON)")
    common(p, multi_lambda=True)
    p.set_defaults(fn=cmd_covering)

    p = sub.add_parser("crossover", help="alignment index, root vs series (JSON)")
    common(p, multi_lambda=True)
    p.set_defaults(fn=cmd_crossover)

    p = sub.add_parser("interval-demo", help="interval-arithmetic worked examples")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_interval_demo)

    p = sub.add_parser("verify", help="run the acceptance gate")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "digits", 30) < 15:
        parser.error("--digits must be at least 15")
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
