"""Command line: ``motherbody {eval,skeleton,fit,verify,reproduce,pack}``.

Exit codes: 0 success, 1 verification or fit failure, 2 input error.
Without ``--out`` every output file is printed to stdout under a
``# <name>`` line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io
from .errors import MotherBodyError, OnBoundary, OnSupport
from .geometry import medial_axis
from .measure import ball_packing
from .potential import potential_many
from .skeleton import FitConfig, Ring, mother_of_polygon
from .verify import FIT_TOLERANCE, AxiomConfig, reproduce, verify_all

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _ring(text):
    try:
        r, n = text.split(":")
        r, n = float(r), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R:COUNT, got {text!r}") from None
    if not (r > 0 and n > 0):
        raise argparse.ArgumentTypeError("ring radius and count must be positive")
    return r, n


def _emit(args, name, text):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(f"# {name}\n{text}")


def _units(args, scene=None):
    if args.units:
        return args.units
    return scene.units if scene is not None else "natural"


# ---------------------------------------------------------------------------
# subcommands

def cmd_eval(args):
    if not args.scene or not args.points:
        raise InputError("eval needs --scene and --points")
    scene = io.load_scene(args.scene)
    scene.units = _units(args, scene)
    X = io.load_points(args.points, scene.dimension)
    k = scene.kernel
    scale = scene.potential_scale()
    coords = ["x", "y", "z"][: scene.dimension]
    rows = []
    for label, obj in scene.objects():
        vals = np.full(len(X), np.nan)
        errs = np.full(len(X), np.nan)
        flags = [""] * len(X)
        if len(X):
            try:
                vals, errs = potential_many(k, obj, X)
            except (OnSupport, OnBoundary):
                for i, x in enumerate(X):
                    try:
                        v, e = potential_many(k, obj, x[None, :])
                        vals[i], errs[i] = v[0], e[0]
                    except OnSupport:
                        flags[i] = "on-support"
                    except OnBoundary:
                        flags[i] = "on-boundary"
        for i, x in enumerate(X):
            if flags[i]:
                rows.append([label, i, *x, "", "", flags[i]])
            else:
                rows.append([label, i, *x, vals[i] * scale, errs[i] * scale, ""])
    _emit(args, "potentials.csv", io.csv_text(["object", "point", *coords, "value", "error", "flag"], rows))
    return EXIT_OK


def cmd_skeleton(args):
    if not args.polygon:
        raise InputError("skeleton needs a polygon file")
    poly = io.load_polygon(args.polygon)
    _emit(args, "skeleton.json", io.json_text(medial_axis(poly).to_dict()))
    return EXIT_OK


def _fit_config(args, poly):
    if args.config:
        cfg = FitConfig.from_dict(io.read_json(args.config))
    else:
        cfg = FitConfig.default(poly, K=args.K)
    if args.ring:
        centre = tuple(float(c) for c in poly.centroid)
        rc = poly.circumradius
        cfg.collocation = [Ring(centre, f * rc, n) for f, n in args.ring]
        cfg.__post_init__()
    if args.K is not None and not args.config:
        cfg.K = args.K
    if args.reg is not None:
        cfg.reg = args.reg
    return cfg


def cmd_fit(args):
    if not args.polygon:
        raise InputError("fit needs a polygon file")
    poly = io.load_polygon(args.polygon)
    if args.K is None:
        args.K = 16
    cfg = _fit_config(args, poly)
    mu, rep, basis, c = mother_of_polygon(poly, cfg, return_basis=True)
    tol = args.tol if args.tol is not None else FIT_TOLERANCE
    report = dict(rep.to_dict(), tolerance=tol, passed=bool(rep.holdout_relative <= tol),
                  config=cfg.to_dict())
    _emit(args, "measure.json", io.json_text(mu.to_dict()))
    _emit(args, "report.json", io.json_text(report))
    _emit(args, "density.csv", io.csv_text(["edge", "arclength", "density"], basis.profiles(c)))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _axiom_config(args):
    kw = io.read_json(args.config) if args.config else {}
    if args.tol is not None:
        kw["tol_match"] = args.tol
        kw.setdefault("tol_dominate", args.tol)
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.ring:
        kw["exterior_radii"] = tuple(f for f, _ in args.ring)
        kw["exterior_count"] = max(n for _, n in args.ring)
    if "exterior_radii" in kw:
        kw["exterior_radii"] = tuple(kw["exterior_radii"])
    try:
        return AxiomConfig(**kw)
    except TypeError as exc:
        raise InputError(str(exc)) from None


def cmd_verify(args):
    if not args.scene:
        raise InputError("verify needs --scene")
    scene = io.load_scene(args.scene)
    if len(scene.bodies) != 1 or len(scene.measures) != 1:
        raise InputError("verify needs a scene with exactly one body and one measure")
    cfg = _axiom_config(args)
    rep = verify_all(scene.bodies[0], scene.measures[0], cfg, scene.kernel)
    _emit(args, "verification.json", io.json_text(rep.to_dict()))
    return EXIT_OK if rep.overall else EXIT_FAIL


def cmd_reproduce(args):
    params = json.loads(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise InputError("--params must be a JSON object")
    try:
        tables = reproduce(args.case, **params)
    except TypeError as exc:
        raise InputError(str(exc)) from None
    for t in tables:
        _emit(args, f"{t.name}.csv", io.csv_text(t.columns, t.rows))
    return EXIT_OK


def cmd_pack(args):
    if not args.polygon:
        raise InputError("pack needs a polygon file")
    poly = io.load_polygon(args.polygon)
    depth = args.depth if args.depth is not None else 6
    mu, residual = ball_packing(poly, depth)
    rows = [[*a.x, a.m, math.sqrt(a.m / math.pi)] for a in mu.atoms]
    summary = {"depth": depth, "atoms": len(mu.atoms), "area": poly.area,
               "residual_area": residual, "residual_fraction": residual / poly.area}
    _emit(args, "packing.json", io.json_text(mu.to_dict()))
    _emit(args, "packing.csv", io.csv_text(["x", "y", "mass", "radius"], rows))
    _emit(args, "summary.json", io.json_text(summary))
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "skeleton": cmd_skeleton,
    "fit": cmd_fit,
    "verify": cmd_verify,
    "reproduce": cmd_reproduce,
    "pack": cmd_pack,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="directory for output files")
    common.add_argument("--units", choices=io.UNITS, help="potential units (default: scene's)")
    common.add_argument("--tol", type=float, help="pass/fail tolerance")
    common.add_argument("--seed", type=int, help="seed for random sample points")
    common.add_argument("--depth", type=int, help="ball packing depth")
    common.add_argument("--ring", type=_ring, action="append", metavar="R:COUNT",
                        help="sample ring at R times the circumradius (repeatable)")
    common.add_argument("--config", metavar="FILE", help="FitConfig or AxiomConfig JSON")

    p = argparse.ArgumentParser(prog="motherbody", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="potentials of scene objects at points")
    s.add_argument("--scene", metavar="FILE")
    s.add_argument("--points", metavar="FILE")

    s = sub.add_parser("skeleton", parents=[common], help="medial axis of a convex polygon")
    s.add_argument("polygon", nargs="?")
    s.add_argument("--scene", dest="polygon", metavar="FILE")

    s = sub.add_parser("fit", parents=[common], help="fit a skeleton density to a polygon")
    s.add_argument("polygon", nargs="?")
    s.add_argument("--scene", dest="polygon", metavar="FILE")
    s.add_argument("-K", type=int, default=None, help="pieces per skeleton edge (default 16)")
    s.add_argument("--reg", type=float, help="Tikhonov weight")

    s = sub.add_parser("verify", parents=[common], help="check the five axioms for a scene")
    s.add_argument("--scene", metavar="FILE")

    s = sub.add_parser("reproduce", parents=[common], help="closed form vs quadrature tables")
    s.add_argument("case", help="shell, cylinder, cone or square")
    s.add_argument("--params", help="JSON object of case parameters")

    s = sub.add_parser("pack", parents=[common], help="ball packing of a polygon")
    s.add_argument("polygon", nargs="?")
    s.add_argument("--scene", dest="polygon", metavar="FILE")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, MotherBodyError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"motherbody {args.command}: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
