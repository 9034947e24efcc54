"""Command-line interface: ``equipart <command> ...``.

Exit status is 0 when a solver converges within tolerance (or a scan or
verification succeeds), 2 when a solver exhausts its budget, and 1 for
usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import drivers, oracle
from .errors import EquipartError, NoConvergence
from .measures import MassDistribution, load_measure, save_measure
from .search import SearchConfig
from .svg import render_planar

EXIT_OK, EXIT_USAGE, EXIT_NOCONV = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return v


def _add_search_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=_positive_int, default=24)
    p.add_argument("--max-iters", type=_positive_int, default=3000)
    p.add_argument("--tol", type=float, default=None, help="defect tolerance as a fraction of total mass")
    p.add_argument("--guard", type=float, default=0.05, help="degenerate-circle guard radius")
    p.add_argument("--threads", type=_positive_int, default=1, help="concurrent restarts")
    p.add_argument("--out", type=Path, help="report JSON path (default: stdout)")
    p.add_argument("--svg", type=Path, help="SVG picture of a planar result")


def build_parser():
    ap = _Parser(prog="equipart", description="Equipartitions of point-cloud measures by hyperplanes and fans.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write measure JSON")
    g.add_argument("kind", choices=["cloud", "mixture", "disk", "ball", "symmetric", "two-disk", "upper-bound"])
    g.add_argument("--dim", type=_positive_int, default=2)
    g.add_argument("--points", type=_positive_int, default=200)
    g.add_argument("--components", type=_positive_int, default=3, help="mixture components")
    g.add_argument("--rotations", type=_positive_int, default=60, help="phase rotations for symmetric clouds")
    g.add_argument("--distance", type=float, default=10.0, help="two-disk centre distance")
    g.add_argument("--q", type=int, default=5, help="arity recorded for upper-bound instances")
    g.add_argument("--m", type=_positive_int, default=2, help="ball count for upper-bound instances")
    g.add_argument("--separation", type=float, default=4.0)
    g.add_argument("--bandwidth", type=_nonneg_float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True,
                   help="output path; upper-bound instances use it as a prefix")

    b = sub.add_parser("bisect", help="k orthogonal hyperplanes bisecting every measure")
    b.add_argument("measures", nargs="+", type=Path)
    b.add_argument("--k", type=_positive_int, default=1)
    _add_search_flags(b)

    f = sub.add_parser("fan", help="k complex regular q-fans equipartitioning every measure")
    f.add_argument("measures", nargs="+", type=Path)
    f.add_argument("--q", type=int, required=True)
    f.add_argument("--k", type=_positive_int, default=1)
    f.add_argument("--mode", choices=["complex_orthogonal", "real_independent"], default="complex_orthogonal")
    _add_search_flags(f)

    ff = sub.add_parser("fourfan", help="k complex regular 4-fans quartering one measure")
    ff.add_argument("measures", nargs="+", type=Path)
    ff.add_argument("--k", type=_positive_int, default=1)
    ff.add_argument("--mode", choices=["complex_orthogonal", "real_independent"], default="complex_orthogonal")
    _add_search_flags(ff)

    s2 = sub.add_parser("sectors2q", help="q hyperplanes with 2q sectors of equal mass")
    s2.add_argument("measures", nargs="+", type=Path)
    s2.add_argument("--q", type=int, default=3)
    _add_search_flags(s2)

    sc = sub.add_parser("scan", help="exhaustive planar grid scan")
    sc.add_argument("measures", nargs="+", type=Path)
    sc.add_argument("--q", type=int, help="fan arity; omit for a two-measure line scan")
    sc.add_argument("--box", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
                    help="centre box (default: around the first measure)")
    sc.add_argument("--center-steps", type=int, default=50)
    sc.add_argument("--angle-steps", type=int, default=60)
    sc.add_argument("--offset-range", type=float, nargs=2, metavar=("LO", "HI"))
    sc.add_argument("--offset-steps", type=int, default=100)
    sc.add_argument("--csv", type=Path, help="write every grid cell and its defect")
    sc.add_argument("--out", type=Path, help="summary JSON path (default: stdout)")
    sc.add_argument("--svg", type=Path)

    v = sub.add_parser("verify", help="recompute the defect of a report against its measures")
    v.add_argument("report", type=Path)
    v.add_argument("measures", nargs="+", type=Path)
    v.add_argument("--atol", type=float, default=1e-12)
    return ap


# -- generators -------------------------------------------------------------

def _gen(args):
    rng = np.random.default_rng(args.seed)
    n, count, bw = args.dim, args.points, args.bandwidth
    if args.kind == "upper-bound":
        mus = oracle.upper_bound_instance(args.q, args.m, n, args.separation, samples=count,
                                          seed=args.seed, bandwidth=bw)
        paths = []
        for i, mu in enumerate(mus, 1):
            path = Path(f"{args.out}_{i}.json")
            save_measure(mu, path)
            paths.append(str(path))
        print(json.dumps({"written": paths}))
        return EXIT_OK
    if args.kind == "cloud":
        pts = rng.standard_normal((count, n))
    elif args.kind == "mixture":
        means = 3.0 * rng.standard_normal((args.components, n))
        comp = rng.integers(args.components, size=count)
        pts = means[comp] + rng.standard_normal((count, n)) * rng.uniform(0.3, 1.0, args.components)[comp, None]
    elif args.kind in ("disk", "ball"):
        if args.kind == "disk" and n != 2:
            raise UsageError("gen disk: --dim must be 2 (use 'ball' in higher dimensions)")
        pts = oracle.sample_ball(n, count, rng)
    elif args.kind == "symmetric":
        pts = symmetric_cloud(n, count, args.rotations, rng)
    else:
        pts = oracle.two_disk_instance(count, args.distance, args.seed).points
    save_measure(MassDistribution(pts, bandwidth=bw), args.out)
    print(json.dumps({"written": [str(args.out)]}))
    return EXIT_OK


def symmetric_cloud(n, count, rotations, rng):
    """Cloud in C^{n/2} closed under multiplication by ``exp(2 pi i k / rotations)``.

    ``count`` base points are drawn and every phase rotation of each is kept,
    so the cloud has ``count * rotations`` points.
    """
    if n % 2:
        raise UsageError(f"gen symmetric: --dim must be even, got {n}")
    base = rng.standard_normal((count, n // 2)) + 1j * rng.standard_normal((count, n // 2))
    phases = np.exp(2j * np.pi * np.arange(rotations) / rotations)
    z = (phases[:, None, None] * base[None]).reshape(-1, n // 2)
    pts = np.empty((z.shape[0], n))
    pts[:, 0::2], pts[:, 1::2] = z.real, z.imag
    return pts


# -- solvers ----------------------------------------------------------------

def _config(args):
    return SearchConfig(restarts=args.restarts, max_iters=args.max_iters, tol=args.tol, seed=args.seed,
                        degenerate_guard=args.guard, workers=args.threads)


def _emit(text, path):
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _solve(args, measures):
    cfg = _config(args)
    if args.command == "bisect":
        return drivers.bisect_orthogonal(measures, args.k, cfg)
    if args.command == "fan":
        return drivers.equipartition_fans(measures, args.q, args.mode, args.k, cfg)
    if args.command == "fourfan":
        return drivers.equipartition_fourfans(measures, args.mode, args.k, cfg)
    if len(measures) != 1:
        raise UsageError("sectors2q takes exactly one measure")
    return drivers.near_equipartition_2q(measures[0], args.q, cfg)


def _run_solver(args):
    measures = [load_measure(p) for p in args.measures]
    if args.svg is not None and measures[0].dim != 2:
        raise UsageError("--svg needs planar measures")
    try:
        report, code = _solve(args, measures), EXIT_OK
    except NoConvergence as exc:
        if exc.report is None:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NOCONV
        report, code = exc.report, EXIT_NOCONV
        print(f"no convergence: {exc}", file=sys.stderr)
    _emit(report.to_json(indent=2), args.out)
    if args.svg is not None:
        render_planar(measures, report.partitions, args.svg)
    return code


def _scan(args):
    measures = [load_measure(p) for p in args.measures]
    kw = dict(center_steps=args.center_steps, angle_steps=args.angle_steps, offset_steps=args.offset_steps)
    if args.offset_range is not None:
        kw["offset_range"] = tuple(args.offset_range)
    try:
        if args.box is not None:
            x0, x1, y0, y1 = args.box
            grid = oracle.ScanGrid(center_box=((x0, x1), (y0, y1)), **kw)
        else:
            grid = oracle.ScanGrid.around(measures, **kw)
    except ValueError as exc:
        raise UsageError(f"scan: {exc}") from exc
    keep = args.csv is not None
    if args.q is not None:
        if len(measures) != 1:
            raise UsageError("scan --q takes exactly one measure")
        if args.q < 2:
            raise UsageError("scan: --q must be at least 2")
        res = oracle.planar_fan_scan(measures[0], args.q, grid, keep_table=keep)
    else:
        if len(measures) != 2:
            raise UsageError("a line scan (no --q) takes exactly two measures")
        res = oracle.planar_line_scan(measures[0], measures[1], grid, keep_table=keep)
    if keep:
        res.write_csv(args.csv)
    summary = {"format_version": 1, "best": res.best.to_dict(), "min_defect": res.min_defect,
               "resolution": res.resolution, "cells": res.rows,
               "axes": {name: [float(a[0]), float(a[-1]), len(a)] for name, a in zip(res.axis_names, res.axes)}}
    _emit(json.dumps(summary, indent=2), args.out)
    if args.svg is not None:
        render_planar(measures, [res.best], args.svg)
    return EXIT_OK


def _verify(args):
    report = drivers.load_report(args.report)
    measures = [load_measure(p) for p in args.measures]
    defect = drivers.verify_report(report, measures)
    diff = abs(defect - report.defect)
    ok = diff <= args.atol
    print(json.dumps({"stored_defect": report.defect, "recomputed_defect": defect,
                      "difference": diff, "agrees": ok}))
    return EXIT_OK if ok else EXIT_USAGE


def run(argv=None) -> int:
    """Execute one command and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen":
            return _gen(args)
        if args.command == "scan":
            return _scan(args)
        if args.command == "verify":
            return _verify(args)
        return _run_solver(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (EquipartError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
