"""Command-line entry point: ``lcsheet <command> [--config PATH] [--fixture NAME] ...``."""
from __future__ import annotations

import argparse
import os
import sys

from . import output
from .config import COMMANDS, fixture_config, load_config
from .curvature import curvature_grid
from .errors import ConfigError, LightconeError
from .pedal import discriminant_extract, front_mesh, singular_scan
from .verify import sphere_samples, verify
from .worldsheet import validate


def _signs(spec):
    return (1, -1) if spec.k == 2 else (1,)


def _mesh(cfg):
    tol = cfg.tolerances
    mesh = front_mesh(cfg.spec, cfg.u_counts(), cfg.grid["t"], cfg.grid["xi"],
                      signs=_signs(cfg.spec), degenerate_tol=tol["degenerate"])
    return singular_scan(mesh, tol["front_rank"])


def cmd_validate(cfg):
    rep = validate(cfg.spec, cfg.u_counts(), cfg.grid["t"], cfg.tolerances["validation"])
    d = rep.to_dict()
    d["worldsheet"] = cfg.spec.name
    path = output.write_json(os.path.join(cfg.out_dir, "validation.json"), d)
    return rep.passed, [path]


def cmd_curvature(cfg):
    xis = sphere_samples(cfg.spec.k, cfg.grid["xi"])
    rows = curvature_grid(cfg.spec, cfg.u_counts(), cfg.grid["t"], xis)
    header, table = output.curvature_rows(cfg.spec, rows)
    return True, [output.write_csv(os.path.join(cfg.out_dir, "curvature.csv"), header, table)]


def cmd_front(cfg):
    mesh = _mesh(cfg)
    paths = []
    if "csv" in cfg.formats:
        header, rows = output.front_rows(mesh)
        paths.append(output.write_csv(os.path.join(cfg.out_dir, "front.csv"), header, rows))
    if "obj" in cfg.formats:
        objs = output.write_front_obj(mesh, cfg.out_dir)
        if not objs:
            print(f"note: no OBJ rendering for ambient dimension {cfg.spec.ambient_dim}",
                  file=sys.stderr)
        paths.extend(objs)
    return True, paths


def cmd_singular(cfg):
    mesh = _mesh(cfg)
    tol = cfg.tolerances
    rep = discriminant_extract(mesh, tol["maxwell_match"], int(tol["maxwell_separation"]))
    d = rep.to_dict()
    d["worldsheet"] = cfg.spec.name
    d["flags"] = {"legendrian_singular": int(mesh.legendrian.sum()),
                  "space_singular": int(mesh.space_singular.sum()),
                  "degenerate_zero": int(mesh.degenerate.sum()),
                  "time_singular": 0}
    return True, [output.write_json(os.path.join(cfg.out_dir, "discriminant.json"), d)]


def cmd_verify(cfg):
    rep = verify(cfg.spec, cfg.u_counts(), cfg.grid["verify_t"], cfg.grid["verify_xi"],
                 cfg.tolerances)
    return rep["passed"], [output.write_json(os.path.join(cfg.out_dir, "verify.json"), rep)]


HANDLERS = {"validate": cmd_validate, "curvature": cmd_curvature, "front": cmd_front,
            "singular": cmd_singular, "verify": cmd_verify}


def _keyval(text, what):
    key, eq, val = text.partition("=")
    if not eq or not key:
        raise ConfigError(f"--{what} expects KEY=VALUE, got {text!r}")
    return key.strip(), val.strip()


def build_parser():
    p = argparse.ArgumentParser(prog="lcsheet", description=(
        "Lightcone curvatures, height functions and pedal fronts of world sheets."))
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--fixture", help="built-in world sheet, e.g. cyl, flt:a=2, sph:R=3")
    p.add_argument("--out", help="output directory (default from config or ./lcsheet_out)")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VAL",
                   help="override a named tolerance")
    p.add_argument("--grid", action="append", default=[], metavar="AXIS=N",
                   help="override a grid count (u, u1.., t, xi, verify_t, verify_xi)")
    return p


def configure(args):
    if args.config:
        cfg = load_config(args.config)
        if args.fixture:
            base = fixture_config(args.fixture)
            cfg.spec = base.spec
            cfg.grid["u"] = base.grid["u"]
    elif args.fixture:
        cfg = fixture_config(args.fixture)
    else:
        raise ConfigError("either --config or --fixture is required")
    if args.out:
        cfg.out_dir = args.out
    for item in args.tol:
        key, val = _keyval(item, "tol")
        try:
            cfg.set_tolerance(key, float(val))
        except ValueError:
            raise ConfigError(f"--tol {key}: {val!r} is not a number") from None
    for item in args.grid:
        axis, val = _keyval(item, "grid")
        try:
            cfg.set_grid(axis, int(val))
        except ValueError:
            raise ConfigError(f"--grid {axis}: {val!r} is not an integer") from None
    cfg.command = args.command
    return cfg


def run(cfg):
    """Execute ``cfg.command``; returns (passed, written paths)."""
    if cfg.command not in HANDLERS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    os.makedirs(cfg.out_dir, exist_ok=True)
    return HANDLERS[cfg.command](cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = configure(args)
    except LightconeError as exc:
        print(f"lcsheet {args.command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        passed, paths = run(cfg)
    except LightconeError as exc:
        print(f"lcsheet {args.command}: error on {cfg.spec.name}: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    if not passed:
        print(f"lcsheet {args.command}: checks failed", file=sys.stderr)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
