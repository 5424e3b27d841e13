"""Command-line interface: ``python3 -m nonlocal_stripes <command> ...``.

Exit codes: 0 success, 1 usage, 2 precondition or input file, 3 tolerance
or bracketing failure, 4 a verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import BracketingError, DomainError, FormatError, PreconditionError, StripesError, ToleranceError
from .gridset import read_gridset
from .kernel import constants, make_params
from .multidim import build_kernel_table, classify_cubes, functional_energy
from .onedim import brute_force_min_1d, optimal_width, stripe_energy
from .stripes import Cube, cube_at, distance_to_stripes_dir
from .verify import DEFAULT_SEED, SuiteConfig, run_suite

EXIT_USAGE, EXIT_PRECONDITION, EXIT_TOLERANCE, EXIT_CHECK = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# config keys accepted from a key=value file, with their types
_CONFIG_KEYS = {
    "d": int, "alpha": float, "tau": float, "L": float, "n": int, "l": float, "R": float, "tol": float,
    "seed": int, "format": str, "eta": float, "delta": float, "M": float, "rho": float,
    "h_min": float, "h_max": float, "h_count": int, "grid_n": int, "max_boundaries": int, "tier": str,
}


def read_config(path):
    """Parse a flat ``key=value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in _CONFIG_KEYS:
                raise FormatError(f"{path}:{lineno}: unrecognised config line {raw.strip()!r}")
            try:
                out[key] = _CONFIG_KEYS[key](value)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        # strict JSON has no inf/nan literals
        return float(x) if np.isfinite(x) else _fmt(x)
    return x


def emit(config, columns, rows, fmt, out):
    """Write a table as JSON (config + list of records) or CSV (commented config header + rows)."""
    if fmt == "json":
        records = [dict(zip(columns, row)) for row in rows]
        json.dump(_jsonable({"config": config, "rows": records}), out, sort_keys=True)
        out.write("\n")
        return
    for key in sorted(config):
        out.write(f"# {key}={_fmt(config[key]) if not isinstance(config[key], str) else config[key]}\n")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) if not isinstance(v, (list, tuple)) else " ".join(_fmt(t) for t in v) for v in row])
    out.write(buf.getvalue())


def _effective(args, file_cfg, keys, defaults):
    cfg = {}
    for key in keys:
        val = getattr(args, key, None)
        if val is None:
            val = file_cfg.get(key, defaults.get(key))
        cfg[key] = val
    return cfg


def _params(cfg):
    if cfg.get("alpha") is None or cfg.get("tau") is None:
        raise UsageError("alpha and tau are required")
    return make_params(cfg.get("d") or 1, cfg["alpha"], cfg["tau"])


def cmd_constants(args, file_cfg, out):
    cfg = _effective(args, file_cfg, ["d", "alpha", "tau"], {"d": 1, "tau": 0.0})
    k = constants(_params(cfg))
    emit(cfg, ["c1", "c2", "c3", "j_c", "c_stripe"], [[k.c1, k.c2, k.c3, k.j_c, k.c_stripe]], args.format, out)
    return 0


def cmd_sweep_h(args, file_cfg, out):
    cfg = _effective(args, file_cfg, ["d", "alpha", "tau", "h_min", "h_max", "h_count"],
                     {"d": 1, "h_min": 0.1, "h_max": 10.0, "h_count": 50})
    p = _params(cfg)
    count = int(cfg["h_count"])
    if count < 0 or (count and not 0 < cfg["h_min"] <= cfg["h_max"]):
        raise UsageError("need 0 < h_min <= h_max and h_count >= 0")
    hs = np.geomspace(cfg["h_min"], cfg["h_max"], count) if count else []
    emit(cfg, ["h", "energy"], [[float(h), stripe_energy(p, float(h))] for h in hs], args.format, out)
    return 0


def cmd_optimal(args, file_cfg, out):
    cfg = _effective(args, file_cfg, ["d", "alpha", "tau"], {"d": 1})
    h, c = optimal_width(_params(cfg))
    emit(cfg, ["h_star", "c_star"], [[h, c]], args.format, out)
    return 0


def _load_set(args, file_cfg):
    S, meta = read_gridset(args.setfile)
    cfg = _effective(args, {**meta, **file_cfg}, ["alpha", "tau", "R", "tol"], {})
    cfg["d"], cfg["n"], cfg["L"], cfg["setfile"] = S.d, S.n, S.L, args.setfile
    return S, cfg


def cmd_eval(args, file_cfg, out):
    S, cfg = _load_set(args, file_cfg)
    p = _params(cfg)
    T = build_kernel_table(p, S.L, S.n, cfg["R"], cfg["tol"])
    br = functional_energy(p, S, T)
    cfg["table_tail_bound"] = T.tail_bound
    cols = ["total", "per1", "kernel_perimeter", "exchange", "decomposed", "gap"]
    emit(cfg, cols, [[br.total, float(br.per1_dir.sum()), br.kernel_perimeter, br.exchange, br.decomposed,
                      br.total - br.decomposed]], args.format, out)
    return 0


def cmd_decompose(args, file_cfg, out):
    S, cfg = _load_set(args, file_cfg)
    p = _params(cfg)
    T = build_kernel_table(p, S.L, S.n, cfg["R"], cfg["tol"])
    br = functional_energy(p, S, T)
    cfg["total"] = br.total
    cfg["gap"] = br.total - br.decomposed
    rows = [[i, br.per1_dir[i], br.r_sum[i], br.v_sum[i], br.w_sum[i]] for i in range(S.d)]
    emit(cfg, ["axis", "per1_dir", "r_sum", "v_sum", "w_sum"], rows, args.format, out)
    return 0


def _parse_ints(text):
    return tuple(int(v) for v in text.split(","))


def cmd_distance(args, file_cfg, out):
    S, cfg = _load_set(args, file_cfg)
    cfg.update(_effective(args, file_cfg, ["eta"], {}))
    if cfg["eta"] is None:
        raise UsageError("--eta is required")
    if args.cube_lo is not None:
        lo = _parse_ints(args.cube_lo)
        if len(lo) != S.d:
            raise UsageError("--cube-lo needs one index per axis")
        cube = Cube(tuple(v % S.n for v in lo), args.cube_m or S.n)
    elif args.center is not None:
        cube = cube_at(S, [float(v) for v in args.center.split(",")], args.side)
    else:
        cube = Cube((0,) * S.d, S.n)
    cfg["cube_lo"], cfg["cube_m"] = list(cube.lo), cube.m
    vals = [distance_to_stripes_dir(S, cube, i, cfg["eta"]) for i in range(S.d)]
    best = int(np.argmin(vals))
    rows = [[i, v, i == best] for i, v in enumerate(vals)]
    emit(cfg, ["axis", "distance", "is_min"], rows, args.format, out)
    return 0


def cmd_classify(args, file_cfg, out):
    S, cfg = _load_set(args, file_cfg)
    cfg.update(_effective(args, file_cfg, ["l", "eta", "delta", "M", "rho"], {"M": float("inf"), "rho": 1.0}))
    for key in ("l", "eta", "delta"):
        if cfg[key] is None:
            raise UsageError(f"--{key} is required")
    p = _params(cfg)
    T = build_kernel_table(p, S.L, S.n, cfg["R"], cfg["tol"])
    res = classify_cubes(p, S, cfg["l"], cfg["eta"], cfg["delta"], cfg["M"], cfg["rho"], T)
    rows = []
    for pos in np.ndindex(res.labels.shape):
        rows.append([list(pos), list(res.centers[pos]), int(res.labels[pos]),
                     [float(res.distances[(i,) + pos]) for i in range(S.d)], float(res.fbar[pos]), bool(res.rigid[pos])])
    emit(cfg, ["cube_lo", "center", "label", "distances", "fbar", "rigid"], rows, args.format, out)
    return 0


def cmd_minimize1d(args, file_cfg, out):
    cfg = _effective(args, file_cfg, ["alpha", "tau", "L", "grid_n", "max_boundaries"], {"grid_n": 32, "max_boundaries": 4})
    cfg["d"] = 1
    p = _params(cfg)
    if cfg["L"] is None:
        raise UsageError("--L is required")
    res = brute_force_min_1d(p, cfg["L"], cfg["grid_n"], cfg["max_boundaries"])
    cfg["best_energy"] = res.energy
    cfg["best_boundaries"] = " ".join(_fmt(b) for b in res.best.boundaries)
    rows = [[m, e, list(cells)] for m, e, cells in res.trace]
    emit(cfg, ["n_boundaries", "energy", "cells"], rows, args.format, out)
    return 0


def cmd_verify(args, file_cfg, out):
    cfg = _effective(args, file_cfg, ["tier", "seed"], {"tier": "fast", "seed": DEFAULT_SEED})
    reports = run_suite(SuiteConfig(tier=cfg["tier"], seed=cfg["seed"]))
    if args.format == "json":
        for rep in reports:
            out.write(rep.to_json() + "\n")
    else:
        rows = [[r.name, r.passed, r.tolerance, json.dumps(r.observed, sort_keys=True)] for r in reports]
        emit(cfg, ["name", "passed", "tolerance", "observed"], rows, "csv", out)
    return 0 if all(r.passed for r in reports) else EXIT_CHECK


def build_parser():
    parser = _Parser(prog="nonlocal_stripes", description="Stripe energies for a 1-norm power-law kernel.")
    parser.add_argument("--config", help="key=value file; command-line flags override it")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kernel_flags(sp, d=True):
        if d:
            sp.add_argument("--d", type=int)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--tau", type=float)

    def table_flags(sp):
        sp.add_argument("--R", type=float, help="image radius for the cell table")
        sp.add_argument("--tol", type=float, help="tolerance for the cell table")

    sp = sub.add_parser("constants", help="kernel constants")
    kernel_flags(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("sweep-h", help="stripe energy over a log grid of widths")
    kernel_flags(sp)
    sp.add_argument("--h-min", dest="h_min", type=float)
    sp.add_argument("--h-max", dest="h_max", type=float)
    sp.add_argument("--h-count", dest="h_count", type=int)
    sp.set_defaults(func=cmd_sweep_h)

    sp = sub.add_parser("optimal", help="optimal stripe width and energy")
    kernel_flags(sp)
    sp.set_defaults(func=cmd_optimal)

    for name, func, help_ in [("eval", cmd_eval, "energy of a set file"),
                              ("decompose", cmd_decompose, "per-axis slice decomposition")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("setfile")
        kernel_flags(sp, d=False)
        table_flags(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("distance", help="distance to stripes inside a cube")
    sp.add_argument("setfile")
    sp.add_argument("--eta", type=float)
    sp.add_argument("--cube-lo", dest="cube_lo", help="first cell of the cube, comma separated")
    sp.add_argument("--cube-m", dest="cube_m", type=int, help="cells per side (default: whole torus)")
    sp.add_argument("--center", help="cube center, comma separated (with --side)")
    sp.add_argument("--side", type=float)
    kernel_flags(sp, d=False)
    sp.set_defaults(func=cmd_distance, R=None, tol=None)

    sp = sub.add_parser("classify", help="label cubes by their distance to stripes")
    sp.add_argument("setfile")
    kernel_flags(sp, d=False)
    table_flags(sp)
    for key in ("l", "eta", "delta", "M", "rho"):
        sp.add_argument(f"--{key}", type=float)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("minimize1d", help="exhaustive 1D minimization on a grid")
    kernel_flags(sp, d=False)
    sp.add_argument("--L", type=float)
    sp.add_argument("--grid-n", dest="grid_n", type=int)
    sp.add_argument("--max-boundaries", dest="max_boundaries", type=int)
    sp.set_defaults(func=cmd_minimize1d)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--tier", choices=["fast", "full"])
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = read_config(args.config) if args.config else {}
        if "format" in file_cfg and "--format" not in (argv if argv is not None else sys.argv[1:]):
            args.format = file_cfg["format"]
        return args.func(args, file_cfg, out)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ToleranceError, BracketingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except StripesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
