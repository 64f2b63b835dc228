"""Command-line surface: every pipeline as a subcommand emitting CSV or JSON.

Output starts with a metadata block (tool version, echoed configuration,
seed), then data rows.  Exact rationals serialize as "p/q" strings and
golden numbers as "a+b*phi", so reruns are byte-identical for a fixed
configuration; nothing time- or host-dependent is ever written.

Exit codes: 0 success, 2 argument/validation problems, 3 exhaustion or
resource-budget failures.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__, affine, bcz, farey, hall, lattice, stats, surface
from .core import GoldenNum, Mat2, Vec2
from .errors import ExhaustionError, GapkitError, ResourceLimitError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, GoldenNum):
        return str(value)
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _write_output(meta: dict, columns: list[str], rows, fmt: str, path):
    buf = io.StringIO()
    if fmt == "csv":
        for key in sorted(meta):
            buf.write(f"# {key}: {meta[key]}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        payload = {
            "meta": {k: str(v) for k, v in sorted(meta.items())},
            "columns": columns,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        buf.write(json.dumps(payload, indent=2, sort_keys=True))
        buf.write("\n")
    text = buf.getvalue()
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(args, **extra) -> dict:
    # the worker count is deliberately not echoed: output bytes must be a
    # function of (config, seed, version) only
    meta = {"tool": "gapkit", "version": __version__, "command": args.command}
    if getattr(args, "seed", None) is not None:
        meta["seed"] = args.seed
        meta["rng"] = stats.RNG_ALGORITHM
    meta.update(extra)
    return meta


def _parse_scalar(text: str):
    """Exact scalar from 'p/q' or a decimal literal (decimals stay exact)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(text)


# -- subcommand implementations ---------------------------------------------

def _cmd_farey_gaps(args):
    gaps = farey.farey_gaps(args.q)
    meta = _meta(args, q=args.q, count=len(gaps))
    _write_output(meta, ["index", "normalized_gap"],
                  ((i, g) for i, g in enumerate(gaps)), args.format, args.output)
    return EXIT_OK


def _cmd_bcz_orbit(args):
    if args.exact:
        point = bcz.TransversalPoint(_parse_scalar(args.a), _parse_scalar(args.b),
                                     _parse_scalar(args.eta))
    else:
        point = bcz.TransversalPoint(float(_parse_scalar(args.a)),
                                     float(_parse_scalar(args.b)),
                                     float(_parse_scalar(args.eta)))
    orb = bcz.orbit(point, args.steps, detect_period=True)
    meta = _meta(args, a=args.a, b=args.b, eta=args.eta, steps=args.steps,
                 exact=args.exact, period=orb.period if orb.period else "none")
    rows = [(i, p.a, p.b, r) for i, (p, r) in enumerate(zip(orb.points, orb.returns))]
    _write_output(meta, ["step", "a", "b", "roof"], rows, args.format, args.output)
    return EXIT_OK


def _cmd_hall(args):
    lo, hi = hall.kinks(args.scaling)
    ts = np.linspace(0.0, 4.0 * hi, args.grid)
    cdf = hall.hall_cdf(ts, args.scaling)
    pdf = hall.hall_pdf(ts, args.scaling)
    meta = _meta(args, scaling=args.scaling, grid=args.grid,
                 kink_low=repr(lo), kink_high=repr(hi))
    rows = zip(ts, cdf, pdf)
    _write_output(meta, ["t", "cdf", "pdf"], rows, args.format, args.output)
    return EXIT_OK


def _cmd_lattice_gaps(args):
    lat = lattice.seeded_lattice(args.seed)
    if args.oracle:
        from .pointcloud import gaps as gaps_of, slopes_in_strip
        seq = slopes_in_strip(lat.to_float(), args.eta, args.count + 1)
        values = gaps_of(seq).gaps
    else:
        values = lattice.slope_gaps_fast(lat, args.eta, args.count).gaps
    meta = _meta(args, eta=args.eta, count=args.count, oracle=args.oracle,
                 lattice=lat.tag)
    _write_output(meta, ["index", "gap"],
                  ((i, float(g)) for i, g in enumerate(values)),
                  args.format, args.output)
    return EXIT_OK


def _cmd_affine_angles(args):
    sx, sy = (float(_parse_scalar(part)) for part in args.shift.split(","))
    lat = affine.AffineLattice(Mat2(1.0, 0.0, 0.0, 1.0), Vec2(sx, sy))
    dist = affine.angle_gap_distribution(lat, args.radius)
    meta = _meta(args, shift=args.shift, radius=args.radius, count=dist.count)
    _write_output(meta, ["index", "normalized_gap"],
                  ((i, v) for i, v in enumerate(dist.samples)),
                  args.format, args.output)
    return EXIT_OK


def _cmd_wedge_p(args):
    sx, sy = (float(_parse_scalar(part)) for part in args.shift.split(","))
    lat = affine.AffineLattice(Mat2(1.0, 0.0, 0.0, 1.0), Vec2(sx, sy))
    ws = affine.empirical_p(lat, args.sigma, args.radius, args.samples, args.seed)
    meta = _meta(args, sigma=args.sigma, radius=args.radius,
                 samples=args.samples, shift=args.shift)
    rows = [(i, c, c / ws.sample_count) for i, c in enumerate(ws.counts)]
    _write_output(meta, ["points_in_wedge", "directions", "fraction"],
                  rows, args.format, args.output)
    return EXIT_OK


def _cmd_sqrtn(args):
    seq = affine.sqrt_mod1_gaps(args.n)
    meta = _meta(args, n=args.n, count=len(seq))
    _write_output(meta, ["index", "normalized_gap"],
                  ((i, float(g)) for i, g in enumerate(seq.gaps)),
                  args.format, args.output)
    return EXIT_OK


def _cmd_surface_sc(args):
    if args.shape == "golden":
        surf = surface.golden_l()
    else:
        dims = args.shape.split(":", 1)[1]
        a, b = (float(part) for part in dims.split(","))
        surf = surface.l_shape(a, b)
    conns = surface.saddle_connections(surf, args.radius)
    meta = _meta(args, shape=args.shape, radius=args.radius, count=len(conns))
    rows = [(c.holonomy.x, c.holonomy.y,
             float(c.holonomy.x), float(c.holonomy.y), len(c.path))
            for c in conns]
    _write_output(meta, ["x", "y", "x_float", "y_float", "crossings"],
                  rows, args.format, args.output)
    return EXIT_OK


def _cmd_baseline_poisson(args):
    seq = lattice.poisson_baseline(args.n, args.seed)
    meta = _meta(args, n=args.n, count=len(seq))
    _write_output(meta, ["index", "normalized_gap"],
                  ((i, float(g)) for i, g in enumerate(seq.gaps)),
                  args.format, args.output)
    return EXIT_OK


def _read_column(path: str) -> np.ndarray:
    """Last column of a gapkit CSV (or a JSON rows payload), as floats."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    values = []
    if text.lstrip().startswith("{"):
        for row in json.loads(text)["rows"]:
            values.append(_scalar_to_float(row[-1]))
        return np.array(values)
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    for ln in lines[1:]:
        values.append(_scalar_to_float(ln.split(",")[-1]))
    return np.array(values)


def _scalar_to_float(text: str) -> float:
    text = text.strip()
    if text.endswith("*phi"):
        coeffs = text[:-len("*phi")]
        split = max(coeffs.rfind("+"), coeffs.rfind("-", 1))
        if split <= 0:
            a, b = "0", coeffs
        else:
            a, b = coeffs[:split], coeffs[split:]
        return float(GoldenNum(Fraction(a), Fraction(b)))
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def _cmd_compare(args):
    left = stats.ecdf(_read_column(args.left))
    if args.cdf in ("hall", "hall-unnormalized"):
        scaling = "farey" if args.cdf == "hall" else "unnormalized"
        ks = stats.ks_distance(left, lambda t: hall.hall_cdf(t, scaling))
        reference = args.cdf
    elif args.cdf == "poisson":
        ks = stats.ks_distance(left, lambda t: 1.0 - np.exp(-t))
        reference = "poisson-exponential"
    elif args.right:
        right = stats.ecdf(_read_column(args.right))
        ks = stats.ks_two_sample(left, right)
        reference = args.right
    else:
        raise ValueError("compare needs --right FILE or --cdf NAME")
    meta = _meta(args, left=args.left, reference=reference, n_left=left.count)
    _write_output(meta, ["ks_distance"], [(ks,)], args.format, args.output)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gapkit",
        description="Gap distributions of slopes and angles of planar point sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--output", default=None, help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int,
                       default=int(os.environ.get("GAPKIT_THREADS", "1")),
                       help="reserved; results never depend on it")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("farey-gaps", help="normalized Farey gaps at one level")
    p.add_argument("--q", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_farey_gaps)

    p = sub.add_parser("bcz-orbit", help="orbit of the transversal return map")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--eta", default="1")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_bcz_orbit)

    p = sub.add_parser("hall", help="limiting CDF/PDF on a grid")
    p.add_argument("--scaling", choices=("farey", "unnormalized"), default="farey")
    p.add_argument("--grid", type=int, default=512)
    common(p)
    p.set_defaults(func=_cmd_hall)

    p = sub.add_parser("lattice-gaps", help="slope gaps of a seeded lattice")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--oracle", action="store_true",
                   help="direct enumeration instead of the return-map fast path")
    common(p, seed=True)
    p.set_defaults(func=_cmd_lattice_gaps)

    p = sub.add_parser("affine-angles", help="angle gaps of a shifted lattice")
    p.add_argument("--shift", required=True, help="x,y")
    p.add_argument("--radius", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_affine_angles)

    p = sub.add_parser("wedge-p", help="wedge occupancy fractions over directions")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--shift", default="0.2137,0.5813")
    common(p, seed=True)
    p.set_defaults(func=_cmd_wedge_p)

    p = sub.add_parser("sqrtn", help="gaps of fractional parts of sqrt(k)")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_sqrtn)

    p = sub.add_parser("surface-sc", help="saddle connections of an L-surface")
    p.add_argument("--shape", required=True, help="golden or l:alpha,beta")
    p.add_argument("--radius", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_surface_sc)

    p = sub.add_parser("baseline-poisson", help="i.i.d. uniform gap baseline")
    p.add_argument("--n", type=int, required=True)
    common(p, seed=True)
    p.set_defaults(func=_cmd_baseline_poisson)

    p = sub.add_parser("compare", help="KS distance between gap files / reference")
    p.add_argument("--left", required=True)
    p.add_argument("--right", default=None)
    p.add_argument("--cdf", choices=("hall", "hall-unnormalized", "poisson"),
                   default=None)
    common(p)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ExhaustionError, ResourceLimitError) as exc:
        print(f"gapkit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, GapkitError) as exc:
        print(f"gapkit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
