"""Command-line entry point.

    pucci eig --geometry spaceform:0 --dim 3 --radius 1 --a 1 --A 1 --sign plus
    pucci compare cheng --defaults
    pucci compare revolution --profile paraboloid:1
    pucci barta --geometry spaceform:0 --dim 2 --radius 1 --testfn cos
    pucci curvature --geometry warp:table.csv --dim 3
    pucci sweep --out reports/

Reports go to ``--out`` (a directory) when given, otherwise to standard
output. Exit codes: 0 success, 2 invalid configuration, 3 solver failure,
4 theorem-assertion failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .barta import (
    barta_bounds,
    builtin_test_function,
    load_test_function_csv,
    random_smooth_family,
)
from .comparison import (
    DEFAULT_CURVATURES,
    DEFAULT_DIMS,
    DEFAULT_PARAMS,
    DEFAULT_PROFILES,
    DEFAULT_RADII,
    MODES,
    SolveCache,
    cheng_compare,
    cheng_lattice,
    revolution_lattice,
    rows_to_csv,
    rows_to_json,
    run_cheng_sweep,
    run_revolution_sweep,
)
from .eigensolver import DEFAULT_TOL, principal_half_eigenvalue, refine
from .exceptions import InconsistencyError, NoConvergenceError, PucciError
from .geometry import (
    DEFAULT_CHECK_POINTS,
    GeodesicBall,
    SpaceFormWarp,
    arc_length_reparametrize,
    builtin_profile,
    curvature_profile,
    is_admissible,
    load_profile_csv,
    load_warp_csv,
)
from .pucci_core import PucciParams
from .radial_ode import DEFAULT_N, POLE_OFFSET

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_ASSERT = 0, 2, 3, 4

# flat config keys and their types; flags use the same names
CONFIG_KEYS = {
    "geometry": str,
    "dim": int,
    "radius": float,
    "a": float,
    "A": float,
    "sign": str,
    "grid": int,
    "tol": float,
    "epsilon": float,
    "out": str,
    "format": str,
    "profile": str,
    "testfn": str,
    "defaults": bool,
    "K": float,
    "mode": str,
    "seed": int,
    "dims": list,
    "curvatures": list,
    "radii": list,
    "params": list,
    "signs": list,
    "modes": list,
    "profiles": list,
}


class ConfigError(ValueError):
    pass


def _fmt(x):
    return f"{x:.12g}"


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a flat JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    out = {}
    for k, v in data.items():
        typ = CONFIG_KEYS[k]
        if typ is float and isinstance(v, int) and not isinstance(v, bool):
            v = float(v)
        if not isinstance(v, typ) or (typ in (int, float) and isinstance(v, bool)):
            raise ConfigError(f"config key {k!r} must be {typ.__name__}")
        out[k] = v
    return out


def _settings(args):
    """Merge config file and flags; flags win."""
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    for k in CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None and v is not False:
            cfg[k] = v
    cfg["_given"] = frozenset(cfg)
    cfg.setdefault("dim", 2)
    cfg.setdefault("a", 1.0)
    cfg.setdefault("A", 1.0)
    cfg.setdefault("sign", "plus")
    cfg.setdefault("grid", DEFAULT_N)
    cfg.setdefault("tol", DEFAULT_TOL)
    cfg.setdefault("epsilon", POLE_OFFSET)
    if cfg["grid"] < 2:
        raise ConfigError("grid must be at least 2")
    if not 1e-12 <= cfg["tol"] < 1:
        raise ConfigError("tol must lie in [1e-12, 1)")
    if not 0 < cfg["epsilon"] < 0.1:
        raise ConfigError("epsilon must lie in (0, 0.1)")
    if cfg.get("format", "csv") not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg["sign"] not in ("plus", "minus", "both"):
        raise ConfigError("sign must be plus, minus or both")
    return cfg


def _signs(cfg):
    return ("plus", "minus") if cfg["sign"] == "both" else (cfg["sign"],)


def _params(cfg):
    return PucciParams(cfg["a"], cfg["A"])


def _profile_curve(spec):
    if spec.endswith(".csv") or os.path.sep in spec:
        return load_profile_csv(spec)
    return builtin_profile(spec)


def parse_geometry(spec, n, radius=None):
    """Build a :class:`GeodesicBall` from ``spaceform:K``, ``profile:<name|path>`` or ``warp:<path>``.

    Profile geometries take their radius from the arc length of the curve,
    and warp tables default to their last sample.
    """
    kind, _, arg = (spec or "").partition(":")
    if kind == "spaceform":
        try:
            K = float(arg)
        except ValueError:
            raise ConfigError(f"bad curvature in {spec!r}") from None
        return GeodesicBall(n, 1.0 if radius is None else radius, SpaceFormWarp(K))
    if kind == "profile":
        L, warp = arc_length_reparametrize(_profile_curve(arg))
        if radius is not None and abs(radius - L) > 1e-9 * L:
            raise ConfigError(f"profile geometry has radius {L:.12g}; drop --radius or match it")
        return GeodesicBall(n, L, warp)
    if kind == "warp":
        warp = load_warp_csv(arg)
        return GeodesicBall(n, warp.r_max if radius is None else radius, warp)
    raise ConfigError(f"geometry must be spaceform:K, profile:<name|path> or warp:<path>, got {spec!r}")


def _ball(cfg):
    if "geometry" not in cfg:
        raise ConfigError("--geometry is required")
    return parse_geometry(cfg["geometry"], cfg["dim"], cfg.get("radius"))


def _emit(cfg, name, text, stdout):
    out = cfg.get("out")
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / name).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _failed(rows, stderr):
    bad = sum(not r.passed for r in rows)
    if bad:
        stderr.write(f"FAILED {bad}/{len(rows)} rows\n")
        return EXIT_ASSERT
    return EXIT_OK


def cmd_eig(cfg, stdout, stderr):
    ball = _ball(cfg)
    params = _params(cfg)
    if cfg["sign"] == "both":
        raise ConfigError("eig takes a single sign")
    res = principal_half_eigenvalue(ball, params, cfg["sign"], cfg["tol"], cfg["grid"], cfg["epsilon"])
    est = refine(res).diagnostics.refine_estimate
    d = res.diagnostics
    summary = {
        "lambda": res.lam,
        "sign": res.sign,
        "n": ball.n,
        "R": ball.R,
        "a": params.a,
        "A": params.A,
        "geometry": cfg["geometry"],
        "residual_sup": d.residual_sup,
        "bracket": list(d.bracket),
        "N": d.N,
        "refine_estimate": est,
    }
    ef = res.eigenfunction
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "phi", "dphi"])
    for row in zip(ef.r.tolist(), ef.f.tolist(), ef.df.tolist()):
        w.writerow([repr(v) for v in row])
    js = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if cfg.get("out"):
        _emit(cfg, "eig.json", js, stdout)
        _emit(cfg, "eigenfunction.csv", buf.getvalue(), stdout)
    elif cfg.get("format") == "csv":
        stdout.write(buf.getvalue())
    else:
        stdout.write(js)
    return EXIT_OK


def _lattice(cfg):
    return dict(
        dims=tuple(cfg.get("dims", DEFAULT_DIMS)),
        curvatures=tuple(float(k) for k in cfg.get("curvatures", DEFAULT_CURVATURES)),
        radii=tuple(float(r) for r in cfg.get("radii", DEFAULT_RADII)),
        params=tuple(tuple(map(float, p)) for p in cfg.get("params", DEFAULT_PARAMS)),
        signs=tuple(cfg.get("signs", ("plus", "minus"))),
        modes=tuple(cfg.get("modes", MODES)),
    )


def _check_lattice(lat, profiles=None):
    for n in lat["dims"]:
        if not isinstance(n, int) or n < 2:
            raise ConfigError("dims must be integers >= 2")
    for p in lat["params"]:
        if len(p) != 2:
            raise ConfigError("params entries must be [a, A] pairs")
        PucciParams(*p)
    if set(lat["signs"]) - {"plus", "minus"}:
        raise ConfigError("signs must be plus or minus")
    if set(lat["modes"]) - set(MODES):
        raise ConfigError(f"modes must be among {', '.join(MODES)}")
    for spec in profiles or ():
        _profile_curve(spec)


def _cheng_rows(cfg):
    cache = SolveCache(cfg["grid"], cfg["tol"])
    if cfg.get("defaults") or "geometry" not in cfg:
        if not cfg.get("defaults") and not any(k in cfg for k in ("dims", "curvatures", "radii", "params")):
            raise ConfigError("compare cheng needs --geometry with --K, or --defaults")
        lat = _lattice(cfg)
        _check_lattice(lat)
        return run_cheng_sweep(cheng_lattice(**lat), cfg["grid"], cfg["tol"], cache=cache)
    if "K" not in cfg:
        raise ConfigError("--K (model curvature) is required with --geometry")
    ball = _ball(cfg)
    K = cfg["K"]
    if K > 0 and ball.R >= math.pi / math.sqrt(K):
        raise ConfigError(f"R = {ball.R:g} violates the model's injectivity bound")
    modes = (cfg["mode"],) if cfg.get("mode") else MODES
    if set(modes) - set(MODES):
        raise ConfigError(f"mode must be among {', '.join(MODES)}")
    params = _params(cfg)
    key = ("geometry", cfg["geometry"])
    return [cheng_compare(ball, K, params, s, m, cache, key) for s in _signs(cfg) for m in modes]


def _revolution_rows(cfg):
    cache = SolveCache(cfg["grid"], cfg["tol"])
    if cfg.get("defaults") or "profile" not in cfg:
        if not cfg.get("defaults") and "profiles" not in cfg:
            raise ConfigError("compare revolution needs --profile or --defaults")
        profiles = tuple(cfg.get("profiles", DEFAULT_PROFILES))
        lat = _lattice(cfg)
        _check_lattice(lat, profiles)
        items = revolution_lattice(profiles, lat["dims"], lat["params"], lat["signs"])
    else:
        _profile_curve(cfg["profile"])
        items = [(cfg["profile"], cfg["dim"], (cfg["a"], cfg["A"]), s) for s in _signs(cfg)]
        PucciParams(cfg["a"], cfg["A"])
    curves = {}
    for spec, *_ in items:
        if spec not in curves:
            curves[spec] = _profile_curve(spec)
    items = [(curves[spec], n, p, s) for spec, n, p, s in items]
    return run_revolution_sweep(items, cfg["grid"], cfg["tol"], cache=cache)


def _report(cfg, name, rows, stdout):
    if cfg.get("format") == "json":
        _emit(cfg, f"{name}.json", rows_to_json(rows), stdout)
    else:
        _emit(cfg, f"{name}.csv", rows_to_csv(rows), stdout)


def cmd_compare(cfg, stdout, stderr, which):
    rows = _cheng_rows(cfg) if which == "cheng" else _revolution_rows(cfg)
    _report(cfg, which, rows, stdout)
    return _failed(rows, stderr)


def cmd_sweep(cfg, stdout, stderr):
    cfg = dict(cfg, defaults=True)
    cheng = _cheng_rows(cfg)
    rev = _revolution_rows(cfg)
    _report(cfg, "cheng", cheng, stdout)
    _report(cfg, "revolution", rev, stdout)
    return _failed(cheng + rev, stderr)


BARTA_HEADER = ["testfn", "sign", "lambda", "einf", "esup", "einf_full", "esup_full", "excluded_nodes", "straddle"]


def cmd_barta(cfg, stdout, stderr):
    ball = _ball(cfg)
    params = _params(cfg)
    spec = cfg.get("testfn", "cos")
    rows = []
    for sign in _signs(cfg):
        if spec == "random":
            family = random_smooth_family(ball.R, 5, cfg.get("seed", 0), sign)
        elif spec.endswith(".csv"):
            family = [load_test_function_csv(spec, sign)]
        else:
            family = [builtin_test_function(spec, ball.R, sign)]
        lam = principal_half_eigenvalue(ball, params, sign, cfg["tol"], cfg["grid"], cfg["epsilon"]).lam
        slack = 1e-6 * lam
        for psi in family:
            b = barta_bounds(ball, params, psi, cfg["grid"])
            ok = b.einf_full - slack <= lam <= b.esup_full + slack
            rows.append((psi.label, sign, lam, b, ok))
    if cfg.get("format") == "json":
        data = [
            dict(testfn=t, sign=s, **{"lambda": lam}, einf=b.einf, esup=b.esup, einf_full=b.einf_full,
                 esup_full=b.esup_full, r_inf=b.r_inf, r_sup=b.r_sup, band=b.band,
                 excluded_nodes=b.excluded_nodes, N=b.N, straddle=ok)
            for t, s, lam, b, ok in rows
        ]
        _emit(cfg, "barta.json", json.dumps(data, indent=2, sort_keys=True) + "\n", stdout)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BARTA_HEADER)
        for t, s, lam, b, ok in rows:
            w.writerow([t, s, _fmt(lam), _fmt(b.einf), _fmt(b.esup), _fmt(b.einf_full), _fmt(b.esup_full),
                        b.excluded_nodes, "true" if ok else "false"])
        _emit(cfg, "barta.csv", buf.getvalue(), stdout)
    bad = sum(not ok for *_, ok in rows)
    if bad:
        stderr.write(f"FAILED {bad}/{len(rows)} rows\n")
        return EXIT_ASSERT
    return EXIT_OK


def cmd_curvature(cfg, stdout, stderr):
    ball = _ball(cfg)
    num = cfg["grid"] if "grid" in cfg["_given"] else DEFAULT_CHECK_POINTS
    r = ball.grid(num)
    prof = curvature_profile(ball, r)
    rho, drho, _ = ball.warp.evaluate(r)
    ok, bad_r = is_admissible(ball)
    cols = dict(r=r, rho=rho, drho=drho, K_rad=prof.K_rad, K_tan=prof.K_tan, Ric_rad=prof.Ric_rad, Ric_tan=prof.Ric_tan)
    if cfg.get("format") == "json":
        data = {k: [None if not np.isfinite(x) else float(x) for x in v] for k, v in cols.items()}
        data.update(geometry=cfg["geometry"], n=ball.n, R=ball.R, sec_min=prof.sec_min, sec_max=prof.sec_max,
                    ric_min=prof.ric_min, ric_max=prof.ric_max, admissible=ok, first_violation=bad_r)
        _emit(cfg, "curvature.json", json.dumps(data, indent=2, sort_keys=True) + "\n", stdout)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(cols))
        for i in range(len(r)):
            w.writerow([_fmt(v[i]) if np.isfinite(v[i]) else "nan" for v in cols.values()])
        _emit(cfg, "curvature.csv", buf.getvalue(), stdout)
    stderr.write(
        f"sec in [{_fmt(prof.sec_min)}, {_fmt(prof.sec_max)}], Ric >= {_fmt(prof.ric_min)}, "
        f"admissible: {'yes' if ok else f'no (rho decreasing at r = {bad_r:.6g})'}\n"
    )
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", help="spaceform:K, profile:<name|path.csv> or warp:<path.csv>")
    common.add_argument("--dim", type=int, help="dimension n (default 2)")
    common.add_argument("--radius", type=float, help="ball radius R (default 1 for space forms)")
    common.add_argument("--a", type=float, help="smaller ellipticity constant (default 1)")
    common.add_argument("--A", type=float, help="larger ellipticity constant (default 1)")
    common.add_argument("--sign", choices=("plus", "minus", "both"))
    common.add_argument("--grid", type=int, help=f"integration steps (default {DEFAULT_N})")
    common.add_argument("--tol", type=float, help=f"relative eigenvalue tolerance (default {DEFAULT_TOL:g})")
    common.add_argument("--epsilon", type=float, help="pole offset as a fraction of R")
    common.add_argument("--config", help="flat JSON file of defaults; flags win")
    common.add_argument("--out", help="directory for output files (default: standard output)")
    common.add_argument("--format", choices=("csv", "json"))

    p = argparse.ArgumentParser(prog="pucci", description="Principal half-eigenvalues of the radial Pucci operator.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("eig", parents=[common], help="solve one half-eigenvalue")
    sp = sub.add_parser("sweep", parents=[common], help="both comparison sweeps on the default lattice")
    sp.set_defaults(defaults=True)
    cp = sub.add_parser("compare", help="comparison theorem harnesses")
    csub = cp.add_subparsers(dest="which", required=True)
    ch = csub.add_parser("cheng", parents=[common], help="geodesic ball vs space form")
    ch.add_argument("--K", type=float, help="model curvature")
    ch.add_argument("--mode", choices=MODES)
    ch.add_argument("--defaults", action="store_true", help="run the default lattice")
    rv = csub.add_parser("revolution", parents=[common], help="hypersurface of revolution vs flat ball")
    rv.add_argument("--profile", help="built-in profile or u,x,z CSV")
    rv.add_argument("--defaults", action="store_true", help="run the default profile lattice")
    bp = sub.add_parser("barta", parents=[common], help="Barta bounds for a test function")
    bp.add_argument("--testfn", help="cos, quadratic, bump:<width>, random, or an r,psi CSV")
    bp.add_argument("--seed", type=int)
    sub.add_parser("curvature", parents=[common], help="curvature and admissibility report")
    return p


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _settings(args)
        if args.command == "eig":
            return cmd_eig(cfg, stdout, stderr)
        if args.command == "sweep":
            return cmd_sweep(cfg, stdout, stderr)
        if args.command == "compare":
            return cmd_compare(cfg, stdout, stderr, args.which)
        if args.command == "barta":
            return cmd_barta(cfg, stdout, stderr)
        return cmd_curvature(cfg, stdout, stderr)
    except (NoConvergenceError, InconsistencyError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_SOLVER
    except (ValueError, PucciError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
