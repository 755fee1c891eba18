"""Command-line front end: ``laguerre-unity <command> [options]``.

Exit codes are 0 on success, 1 for invalid arguments, 2 when ``verify``
reports a failing check and 3 for file-system errors.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import basins as _basins
from .basins import (
    FORMULATIONS,
    RenderConfig,
    colorize,
    default_half_width,
    render,
    write_outcome_csv,
    write_ppm,
)
from .characteristic import annulus_bounds, classify, radial_zeros
from .core import INFINITY
from .cycles import find_cycles
from .dynamics import (
    DEFAULT_MAX_ITER,
    DEFAULT_ROOT_TOL,
    _root_distance,
    iterate_orbit,
)
from .verify import THEOREM_MIN_DEGREE, format_report, run_suite

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x):
    """Fixed 17-significant-digit rendering of a float."""
    return format(float(x), ".17g")


def fmt_complex(z):
    im = fmt(z.imag)
    return f"{fmt(z.real)}{im if im.startswith('-') else '+' + im}i"


# argument parsing -----------------------------------------------------------

_UNSIGNED = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = rf"[+-]?{_UNSIGNED}"
_ANGLE = re.compile(rf"^\s*(?P<sign>[+-]?)(?P<coef>{_UNSIGNED})?\s*\*?\s*(?P<pi>pi|π)?\s*(?:/\s*(?P<den>{_REAL}))?\s*$")


def parse_angle(text):
    """Radians; accepts ``0.3``, ``pi``, ``-pi/8``, ``3pi/4``, ``2*pi/5``."""
    m = _ANGLE.match(text)
    if not m or (m["coef"] is None and m["pi"] is None):
        raise ValueError(f"invalid angle {text!r}")
    value = float(m["coef"]) if m["coef"] is not None else 1.0
    if m["pi"]:
        value *= math.pi
    if m["den"] is not None:
        value /= float(m["den"])
    return -value if m["sign"] == "-" else value


def parse_complex(text):
    """Parse ``a+bi``, ``a``, ``bi`` or polar ``r@theta``."""
    s = text.strip()
    if "@" in s:
        r, t = s.split("@", 1)
        try:
            r = float(r)
        except ValueError:
            raise ValueError(f"invalid modulus in {text!r}") from None
        if r < 0 or not math.isfinite(r):
            raise ValueError(f"modulus must be finite and non-negative in {text!r}")
        t = parse_angle(t)
        return complex(r * math.cos(t), r * math.sin(t))
    s = s.replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise ValueError(f"invalid complex literal {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"complex literal must be finite: {text!r}")
    return z


PROBES = ("s0-probe", "inv-s0-probe")


def _start_point(text):
    """Complex literal, or one of the named probes resolved once n is known."""
    return text if text.strip() in PROBES else parse_complex(text)


def _resolve_probe(n, z0):
    # s0 e^{i pi/n} and its reciprocal: the behaviour there is open, so
    # the orbit engine decides empirically
    if not isinstance(z0, str):
        return z0
    if n < 5:
        raise UsageError(f"{z0} requires n >= 5")
    s0 = annulus_bounds(n).s0
    r = s0 if z0.strip() == "s0-probe" else 1.0 / s0
    return complex(r * math.cos(math.pi / n), r * math.sin(math.pi / n))


def _zoom_center(text):
    head, sep, tail = text.strip().partition("@")
    if sep and head == "boundary":
        return ("boundary", parse_angle(tail))
    return parse_complex(text)


def _arg_type(fn, what):
    def conv(text):
        try:
            return fn(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc) or f"invalid {what}") from None

    conv.__name__ = what
    return conv


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise ValueError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise ValueError(f"expected a positive number, got {text}")
    return v


def _degree_list(text):
    out = [int(t) for t in text.split(",") if t.strip()]
    if not out or any(n < 2 for n in out):
        raise ValueError(f"expected comma-separated degrees >= 2, got {text!r}")
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _render_options(p, zoom):
    if zoom:
        p.add_argument("--center", required=True, type=_arg_type(_zoom_center, "complex"),
                       help="frame centre: 'a+bi', 'r@theta', or 'boundary@theta' for the "
                       "basin boundary on that ray")
        p.add_argument("--half-width", required=True, type=_arg_type(_positive_float, "half-width"))
    else:
        p.add_argument("--center", default=0j, type=_arg_type(parse_complex, "complex"),
                       help="frame centre (default 0)")
        p.add_argument("--frame", type=_arg_type(_positive_float, "half-width"),
                       help="frame half-width (default (n-1)^(2/(n-4)), or 2 for n < 5)")
    p.add_argument("--pixels", type=_arg_type(_positive_int, "pixels"), default=512)
    p.add_argument("--max-iter", type=_arg_type(_positive_int, "max-iter"), default=DEFAULT_MAX_ITER)
    p.add_argument("--tol", type=_arg_type(_positive_float, "tol"), default=DEFAULT_ROOT_TOL)
    p.add_argument("--formulation", choices=FORMULATIONS, default="simplified")
    p.add_argument("--general-form", choices=("p", "gh"), default="p",
                   help="discriminant form for --formulation general")
    p.add_argument("--overlay", action="store_true", help="draw boundary curves and roots")
    p.add_argument("--out", type=Path, help="PPM output path")
    p.add_argument("--csv", type=Path, help="also write the outcome grid as CSV")


def build_parser():
    parser = _Parser(prog="laguerre-unity", description="Laguerre's method on z^n - 1.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("regions", help="annulus radii, boundary curves and region figure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=_arg_type(_positive_int, "samples"),
                   help="angles sampled for the CSV (default max(16 n, 720))")
    p.add_argument("--pixels", type=_arg_type(_positive_int, "pixels"), default=800)
    p.add_argument("--frame", type=_arg_type(_positive_float, "half-width"),
                   help="figure half-width (default 1.15/s0)")
    p.add_argument("--out", type=Path, help="PPM figure path (default regions-n<N>.ppm)")
    p.add_argument("--csv", type=Path, help="CSV path (default regions-n<N>.csv)")

    for name, zoom in (("basins", False), ("zoom", True)):
        p = sub.add_parser(name, help="render basins of attraction" if not zoom else "render a zoomed frame")
        p.add_argument("--n", type=int, required=True)
        _render_options(p, zoom)

    p = sub.add_parser("cycles", help="find periodic cycles in the outer annulus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--period", type=_arg_type(_positive_int, "period"), required=True)
    p.add_argument("--out", type=Path, help="CSV path (default: standard output)")
    p.add_argument("--include-boundary", action="store_true",
                   help="also list cycles on the sector rays")

    p = sub.add_parser("orbit", help="print an orbit and its outcome")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z0", required=True, type=_arg_type(_start_point, "complex"),
                   help="start point: 'a+bi', 'r@theta', 's0-probe' or 'inv-s0-probe'")
    p.add_argument("--max-iter", type=_arg_type(_positive_int, "max-iter"), default=DEFAULT_MAX_ITER)
    p.add_argument("--tol", type=_arg_type(_positive_float, "tol"), default=DEFAULT_ROOT_TOL)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--n", type=_arg_type(_degree_list, "degrees"), default=[5, 8, 16],
                   help="comma-separated degrees (default 5,8,16)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", type=Path, help="also write the report to this file")
    return parser


def _need_degree(n, minimum, command):
    if n < minimum:
        raise UsageError(f"{command} requires n >= {minimum}, got {n}")


# commands -------------------------------------------------------------------

_SHADE, _CIRCLE, _UNIT, _RAY0, _RAY1, _CURVE = 225, 150, 90, 120, 175, 0


def _dashed(pts, on, off):
    pts = np.append(pts, pts[:1])
    period = on + off
    return [pts[s:s + on + 1] for s in range(0, len(pts) - 1, period)]


def regions_raster(n, bounds, pixels, half_width):
    """Grayscale-on-white figure of the regions, with red root markers."""
    cfg = RenderConfig(n=n, pixels=pixels, half_width=half_width)
    z = cfg.pixel_centers()
    a = np.abs(z)
    img = np.full((pixels, pixels, 3), 255, dtype=np.uint8)
    s0, r0 = bounds.s0, bounds.r0
    shade = ((a >= s0) & (a <= r0)) | ((a >= 1 / r0) & (a <= 1 / s0))
    img[shade] = _SHADE

    def stamp(pieces, level, closed=False):
        mask = np.zeros((pixels, pixels), dtype=bool)
        for piece in pieces:
            _basins._stamp_polyline(mask, cfg, piece, closed=closed)
        img[mask] = level

    circle = np.exp(2j * np.pi * np.arange(720) / 720)
    far = 2 * (abs(cfg.center) + math.sqrt(2) * half_width)
    for k in range(2 * n):
        w = np.exp(1j * math.pi * k / n)
        ray = np.linspace(0, far, 400) * w
        if k % 2 == 0:
            stamp([ray[i:i + 2] for i in range(0, 399, 4)], _RAY0)
        else:
            stamp([ray[i:i + 4] for i in range(0, 397, 8)], _RAY1)
    for rad in (s0, r0, 1 / r0, 1 / s0):
        stamp(_dashed(rad * circle, 4, 4), _CIRCLE)
    stamp([circle], _UNIT, closed=True)
    for curve in ("BoundaryD", "BoundaryE"):
        stamp([_basins.boundary_polyline(n, curve, max(64 * n, 2048), bounds)], _CURVE, closed=True)
    roots = np.zeros((pixels, pixels), dtype=bool)
    _basins._stamp_disc(roots, cfg, np.exp(2j * np.pi * np.arange(n) / n), max(2.0, pixels / 160))
    img[roots] = (200, 0, 0)
    return img


def _write_text(path, text):
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def cmd_regions(args, out):
    _need_degree(args.n, 5, "regions")
    n = args.n
    bounds = annulus_bounds(n)
    samples = args.samples or max(16 * n, 720)
    rows = ["theta,r_D,r_E"]
    for t in 2 * math.pi * np.arange(samples) / samples:
        prof = radial_zeros(n, t)
        rows.append(f"{fmt(t)},{fmt(prof.r_D)},{fmt(prof.r_E)}")
    csv_path = args.csv or Path(f"regions-n{n}.csv")
    img_path = args.out or Path(f"regions-n{n}.ppm")
    _write_text(csv_path, "\n".join(rows) + "\n")
    half = args.frame or 1.15 / bounds.s0
    write_ppm(regions_raster(n, bounds, args.pixels, half), img_path)
    print(f"s0 = {fmt(bounds.s0)}", file=out)
    print(f"r0 = {fmt(bounds.r0)}", file=out)
    print(f"1/r0 = {fmt(1 / bounds.r0)}", file=out)
    print(f"1/s0 = {fmt(1 / bounds.s0)}", file=out)
    print(f"wrote {img_path} and {csv_path}", file=out)
    return EXIT_OK


def _render_command(args, out, zoom):
    if args.n < 2:
        raise UsageError(f"n must be >= 2, got {args.n}")
    if args.pixels < 16:
        raise UsageError("pixels must be >= 16")
    half = args.half_width if zoom else (args.frame or default_half_width(args.n))
    center = args.center
    if isinstance(center, tuple):
        _need_degree(args.n, 5, "boundary@theta")
        center = _basins.boundary_crossing(args.n, center[1], max_iter=max(args.max_iter, 200))
        print(f"center = {fmt_complex(center)}", file=out)
    cfg = RenderConfig(
        n=args.n, center=center, half_width=half, pixels=args.pixels,
        max_iter=args.max_iter, root_tol=args.tol, formulation=args.formulation,
        overlay=args.overlay, general_form=args.general_form,
    )
    image = render(cfg)
    name = "zoom" if zoom else "basins"
    path = args.out or Path(f"{name}-n{args.n}.ppm")
    write_ppm(colorize(image), path)
    if args.csv:
        write_outcome_csv(image, args.csv)
    c = image.counts()
    total = cfg.pixels ** 2
    for key, label in (("root", "root"), ("two_cycle", "two-cycle"), ("undecided", "undecided")):
        print(f"{label}: {c[key]} ({fmt(100.0 * c[key] / total)}%)", file=out)
    print(f"wrote {path}", file=out)
    return EXIT_OK


def cmd_basins(args, out):
    return _render_command(args, out, zoom=False)


def cmd_zoom(args, out):
    return _render_command(args, out, zoom=True)


def cycles_csv(records):
    rows = ["period,n,re,im,residual"]
    for rec in records:
        z = rec.representative
        rows.append(f"{rec.period},{rec.n},{fmt(z.real)},{fmt(z.imag)},{fmt(rec.residual)}")
    return "\n".join(rows) + "\n"


def cmd_cycles(args, out):
    _need_degree(args.n, 5, "cycles")
    records = find_cycles(args.n, args.period, include_boundary=args.include_boundary)
    text = cycles_csv(records)
    if args.out is None:
        out.write(text)
        print(f"{len(records)} cycles", file=sys.stderr)
    else:
        _write_text(args.out, text)
        print(f"{len(records)} cycles", file=out)
    return EXIT_OK


def _region_name(n, z, bounds):
    if bounds is None:
        return "-"
    return classify(n, z, bounds).name


def cmd_orbit(args, out):
    n = args.n
    if n < 2:
        raise UsageError(f"n must be >= 2, got {n}")
    z0 = _resolve_probe(n, args.z0)
    bounds = annulus_bounds(n) if n >= THEOREM_MIN_DEGREE else None
    tr = iterate_orbit(n, z0, bounds, max_iter=args.max_iter, root_tol=args.tol, keep_trace=True)
    print("k,re,im,abs,root_error,region", file=out)
    for k, z in enumerate(tr.points):
        if z is INFINITY:
            print(f"{k},inf,inf,inf,inf,{_region_name(n, z, bounds)}", file=out)
            continue
        err = _root_distance(n, z)[1] if z != 0 else 1.0
        print(f"{k},{fmt(z.real)},{fmt(z.imag)},{fmt(abs(z))},{fmt(err)},{_region_name(n, z, bounds)}", file=out)
    print(f"outcome: {tr.outcome.kind!r}", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    checks, notes = run_suite(args.n, args.seed)
    report = format_report(checks, notes, args.seed, args.n)
    out.write(report)
    if args.report:
        _write_text(args.report, report)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


COMMANDS = {
    "regions": cmd_regions,
    "basins": cmd_basins,
    "zoom": cmd_zoom,
    "cycles": cmd_cycles,
    "orbit": cmd_orbit,
    "verify": cmd_verify,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, ValueError) as exc:
        print(f"laguerre-unity {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"laguerre-unity {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
