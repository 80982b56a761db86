"""Command-line interface: ``qlitho <subcommand> [options]``.

Exit status is 0 on success, 2 on bad arguments (nothing is written) and 1
on runtime or I/O errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import planner, render
from .errors import DomainError
from .kernel import KernelSpec, kernel_1d, kernel_2d

DEFAULT_RES = 512
DEFAULT_SAMPLES = 64


def _add_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--plan", metavar="PATH", help="exposure plan (JSON)")
    src.add_argument("--mask", metavar="PATH", help="pixel mask (plain PGM)")
    src.add_argument("--preset", choices=sorted(planner.PRESETS), help="built-in figure plan")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlitho", description="Entangled-state lithography simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("kernel1d", help="sample the single-axis kernel as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--x", type=float, help="single position (wavelengths)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="uniform samples over [0, 1/2)")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("kernel2d", help="sample the two-axis kernel as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lx", type=float, required=True)
    p.add_argument("--ly", type=float, required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--res", type=int, default=64)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("expose", help="render a plan to PGM and CSV")
    _add_source(p)
    p.add_argument("--res", type=int, default=DEFAULT_RES)
    p.add_argument("--out", metavar="PREFIX", required=True,
                   help="writes PREFIX.pgm and PREFIX.csv")
    p.add_argument("--display-max", type=float)

    p = sub.add_parser("metrics", help="ridge and background metrics of a plan")
    _add_source(p)
    p.add_argument("--res", type=int, default=DEFAULT_RES)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--ridge", help="waypoints 'a,b;c,d;...' in pixel coordinates")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("plates", help="phase-plate bank for a pixel index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=float, required=True)

    p = sub.add_parser("counts", help="pure-state and pattern counts")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("repro", help="reproduce a figure: map, profile and metrics")
    p.add_argument("figure", choices=sorted(planner.PRESETS))
    p.add_argument("--res", type=int, default=DEFAULT_RES)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--out", metavar="DIR", default=".")
    p.add_argument("--display-max", type=float)
    return parser


def _parse_ridge(text):
    points = []
    for item in text.split(";"):
        a, b = item.split(",")
        points.append((float(a), float(b)))
    if len(points) < 2:
        raise ValueError("need at least two waypoints")
    return points


def _validate(parser, args):
    def need(cond, msg):
        if not cond:
            parser.error(msg)

    if getattr(args, "n", None) is not None:
        need(args.n >= (0 if args.command == "counts" else 1), "--n out of range")
    for name in ("ell", "lx", "ly", "x", "y", "display_max"):
        value = getattr(args, name, None)
        if value is not None:
            need(math.isfinite(value), f"--{name.replace('_', '-')} must be finite")
    if getattr(args, "display_max", None) is not None:
        need(args.display_max > 0, "--display-max must be positive")
    if args.command == "plates":
        need(float(2 * args.ell).is_integer(), "--ell must be a multiple of 1/2")
    if args.command == "kernel2d":
        need((args.x is None) == (args.y is None), "--x and --y go together")
    if hasattr(args, "res"):
        lo = 64 if args.command in ("metrics", "repro") else render.MIN_RESOLUTION
        need(lo <= args.res <= render.MAX_RESOLUTION,
             f"--res must be in [{lo}, {render.MAX_RESOLUTION}]")
    if hasattr(args, "samples"):
        need(args.samples >= 2, "--samples must be >= 2")
    if getattr(args, "ridge", None):
        try:
            args.ridge = _parse_ridge(args.ridge)
        except ValueError:
            parser.error("--ridge must look like 'a,b;c,d'")


def _fmt(v):
    return format(float(v), ".17g")


def _emit(lines, out):
    text = "".join(lines)
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_source(args):
    if args.preset:
        return planner.PRESETS[args.preset](), planner.PRESET_RIDGES[args.preset]
    if args.plan:
        plan = planner.load_plan(args.plan)
    else:
        plan = planner.plan_from_mask(planner.load_mask(args.mask))
    return plan, None


def compute_metrics(plan, ridge=None, resolution=DEFAULT_RES, samples=DEFAULT_SAMPLES):
    """Ridge and background metrics as an ordered mapping of floats."""
    if ridge is None:
        ridge = [s.pixel for s in plan.shots]
    if len(ridge) < 2:
        raise DomainError("plan needs at least two shots to define a ridge")
    profile = render.ridge_profile(plan, ridge, samples)
    background = render.background_penalty(
        plan, None, resolution, ridge=ridge, samples_per_segment=samples
    )
    return profile, {
        "ridge_min": profile.min_value,
        "ridge_max": profile.max_value,
        "ridge_min_ratio": profile.ratio,
        "ridge_ripple": profile.ripple,
        "background": background,
    }


def _metric_lines(metrics):
    return [f"{k}={_fmt(v)}\n" for k, v in metrics.items()]


def _run(args):
    cmd = args.command
    if cmd == "kernel1d":
        spec = KernelSpec(args.n, args.ell)
        xs = np.array([args.x]) if args.x is not None else np.arange(args.samples) / (2 * args.samples)
        values = np.atleast_1d(kernel_1d(spec, xs))
        _emit(["x,value\n"] + [f"{_fmt(x)},{_fmt(v)}\n" for x, v in zip(xs, values)], args.out)
    elif cmd == "kernel2d":
        if args.x is not None:
            xs, ys = np.array([args.x]), np.array([args.y])
        else:
            c = render.cell_centers(args.res)
            xs, ys = np.tile(c, args.res), np.repeat(c, args.res)
        values = kernel_2d(args.n, args.lx, args.ly, xs, ys)
        _emit(["x,y,value\n"] + [f"{_fmt(x)},{_fmt(y)},{_fmt(v)}\n"
                                 for x, y, v in zip(xs, ys, values)], args.out)
    elif cmd == "expose":
        plan, _ = _load_source(args)
        fmap = render.accumulate(plan, args.res)
        render.write_pgm(fmap, args.out + ".pgm", args.display_max)
        render.write_csv(fmap, args.out + ".csv")
    elif cmd == "metrics":
        plan, ridge = _load_source(args)
        _, metrics = compute_metrics(plan, args.ridge or ridge, args.res, args.samples)
        _emit(_metric_lines(metrics), args.out)
    elif cmd == "plates":
        bank = planner.plate_bank(args.ell, args.n)
        m = args.n + 1
        lines = [f"plate {k}: {r} lambda\n" for k, r in zip(bank.plates, bank.retardances())]
        if bank.half_shift:
            lines.append(f"half-shift plate: {Fraction(1, 2 * m)} lambda\n")
        lines.append(f"total: {bank.total} lambda\n")
        lines.append(f"plates_used={len(bank)}\n")
        _emit(lines, None)
    elif cmd == "counts":
        _emit([f"pure_states={planner.count_pure_states(args.n)}\n",
               f"patterns={planner.count_patterns(args.n)}\n"], None)
    elif cmd == "repro":
        name = args.figure
        plan = planner.PRESETS[name]()
        os.makedirs(args.out, exist_ok=True)
        stem = os.path.join(args.out, name)
        fmap = render.accumulate(plan, args.res)
        profile, metrics = compute_metrics(plan, planner.PRESET_RIDGES[name],
                                           args.res, args.samples)
        render.write_pgm(fmap, stem + "_map.pgm", args.display_max)
        render.write_csv(fmap, stem + "_map.csv")
        render.write_csv(profile, stem + "_profile.csv")
        _emit(_metric_lines(metrics), stem + "_metrics.txt")
        _emit(_metric_lines(metrics), None)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        _run(args)
    except (DomainError, OSError) as exc:
        print(f"qlitho: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
