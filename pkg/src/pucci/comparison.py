"""Numeric checks of the curvature comparison inequalities.

Each check is a :class:`ComparisonRow`: both eigenvalues, whether the
curvature hypothesis held, the signed margin by which the inequality holds,
and an equality diagnostic.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .barta import TestFunction, barta_bounds
from .eigensolver import DEFAULT_TOL, principal_half_eigenvalue
from .exceptions import DomainError
from .geometry import (
    HYPOTHESIS_TOL,
    GeodesicBall,
    SpaceFormWarp,
    arc_length_reparametrize,
    builtin_profile,
    curvature_profile,
    is_admissible,
)
from .pucci_core import PucciParams, m_plus, m_plus_inv
from .radial_ode import DEFAULT_N

__all__ = [
    "ComparisonRow",
    "LemmaReport",
    "SolveCache",
    "cheng_compare",
    "revolution_compare",
    "shifted_test_function",
    "lemma_checks",
    "cheng_lattice",
    "revolution_lattice",
    "run_cheng_sweep",
    "run_revolution_sweep",
    "rows_to_csv",
    "rows_to_json",
    "worker_count",
    "DEFAULT_DIMS",
    "DEFAULT_CURVATURES",
    "DEFAULT_RADII",
    "DEFAULT_PARAMS",
    "DEFAULT_PROFILES",
    "EQUALITY_RTOL",
    "MARGIN_RTOL",
    "MODES",
]

DEFAULT_DIMS = (2, 3, 5)
DEFAULT_CURVATURES = (-1.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_RADII = (0.5, 1.0)
DEFAULT_PARAMS = ((1.0, 1.0), (1.0, 2.0), (0.5, 4.0))
DEFAULT_SIGNS = ("plus", "minus")
DEFAULT_PROFILES = (
    "disk",
    "hemisphere",
    "cap:0.5235987755982988",
    "cap:0.7853981633974483",
    "cap:1.0471975511965976",
    "paraboloid:0.25",
    "paraboloid:0.5",
    "paraboloid:1",
    "bump:0.25",
    "bump:0.5",
    "bump:1",
)
MODES = ("sec_upper", "sec_lower", "ricci_lower")
EQUALITY_RTOL = 1e-5
MARGIN_RTOL = 1e-6
CSV_HEADER = [
    "n", "R", "a", "A", "sign", "mode", "geometry", "K_model",
    "lambda_manifold", "lambda_model", "margin", "hypothesis", "equality_flag",
]


def worker_count():
    env = os.environ.get("PUCCI_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class ComparisonRow:
    n: int
    R: float
    a: float
    A: float
    sign: str
    mode: str
    geometry: str
    K_model: float
    lambda_manifold: float
    lambda_model: float
    margin: float
    hypothesis: str
    equality_flag: bool
    direction: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def asserted(self):
        return self.hypothesis == "held"

    @property
    def passed(self):
        if not self.asserted:
            return True
        scale = max(self.lambda_manifold, self.lambda_model)
        ok = self.margin >= -MARGIN_RTOL * scale
        return ok and self.diagnostics.get("chain_ok", True)


class SolveCache:
    """Memoizes half-eigenvalue solves keyed by geometry and operator."""

    def __init__(self, N=DEFAULT_N, tol=DEFAULT_TOL):
        self.N = N
        self.tol = tol
        self._store = {}

    def solve(self, key, ball, params, sign):
        full = (key, ball.n, ball.R, params.a, params.A, sign, self.N, self.tol)
        if full not in self._store:
            self._store[full] = principal_half_eigenvalue(ball, params, sign, self.tol, self.N)
        return self._store[full]

    def __len__(self):
        return len(self._store)


def _classify(slack, analytic, tol=HYPOTHESIS_TOL):
    # constant-curvature values are exact, so equality is a genuine pass there
    if analytic:
        return "held" if slack >= 0 else "violated"
    if slack > tol:
        return "held"
    if slack >= -tol:
        return "borderline"
    return "violated"


def _hypothesis(ball, model, K, mode):
    prof = curvature_profile(ball)
    n = ball.n
    info = {"sec_min": prof.sec_min, "sec_max": prof.sec_max, "ric_min": prof.ric_min}
    if mode == "sec_upper":
        status = _classify(K - prof.sec_max, prof.analytic)
        direction = ">="
    elif mode == "sec_lower":
        status = _classify(prof.sec_min - K, prof.analytic)
        direction = "<="
    elif mode == "ricci_lower":
        status = _classify(prof.ric_min - (n - 1) * K, prof.analytic)
        adm_ball, v_ball = is_admissible(ball)
        adm_model, v_model = is_admissible(model)
        info.update(admissible_ball=adm_ball, admissible_model=adm_model)
        if status == "held" and not (adm_ball and adm_model):
            status = "not_admissible"
        direction = "<="
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return status, direction, info


def cheng_compare(ball, K, params, sign, mode, cache=None, geometry_key=None):
    """Compare ``lam^sign`` on ``ball`` with the geodesic ball of equal radius in the space form ``K``.

    ``sec_upper`` (curvature <= K) predicts ``lam(ball) >= lam(model)``;
    ``sec_lower`` (curvature >= K) and ``ricci_lower`` (Ric >= (n-1)K, both
    balls admissible) predict ``lam(ball) <= lam(model)``.
    """
    if cache is None:
        cache = SolveCache()
    model = GeodesicBall(ball.n, ball.R, SpaceFormWarp(K))
    status, direction, info = _hypothesis(ball, model, K, mode)
    lam_m = cache.solve(geometry_key or ("warp", id(ball.warp)), ball, params, sign)
    lam_k = cache.solve(("spaceform", float(K)), model, params, sign)
    lm, lk = lam_m.lam, lam_k.lam
    margin = lm - lk if direction == ">=" else lk - lm
    equal = abs(margin) < EQUALITY_RTOL * lk
    diag = dict(info)
    diag.update(residual_manifold=lam_m.diagnostics.residual_sup, residual_model=lam_k.diagnostics.residual_sup)
    if equal:
        r = ball.grid()
        rho_g = ball.warp.evaluate(r)[0]
        rho_h = model.warp.evaluate(r)[0]
        diag["warp_sup_diff"] = float(np.max(np.abs(rho_g - rho_h)))
    return ComparisonRow(
        n=ball.n, R=ball.R, a=params.a, A=params.A, sign=sign, mode=mode,
        geometry=ball.label, K_model=float(K), lambda_manifold=lm, lambda_model=lk,
        margin=margin, hypothesis=status, equality_flag=bool(equal), direction=direction,
        diagnostics=diag,
    )


def shifted_test_function(ball, flat, d):
    """Flat eigenfunction pushed out by ``d`` and held constant near the pole.

    ``psi(t) = phi(t - d)`` for ``t >= d`` and ``phi(0)`` for ``t < d``,
    on the ball of radius ``L = R + d``. Between grid nodes ``phi`` is the
    cubic Hermite interpolant of the stored values and slopes, and ``phi''``
    is recovered from the flat radial equation.
    """
    if d < 0:
        raise ValueError("shift d = L - R must be non-negative")
    ef = flat.eigenfunction
    R, lam, n = ef.R, flat.lam, flat.ball.n
    params = flat.params
    if abs(ball.R - (R + d)) > 1e-9 * ball.R:
        raise DomainError("ball radius must equal R + d")
    spline = CubicHermiteSpline(ef.r, ef.f, ef.df)
    dspline = spline.derivative()
    phi0, d2phi0 = float(ef.f[0]), float(ef.d2f[0])

    def fn(t):
        t = np.asarray(t, dtype=float)
        s = np.clip(t - d, 0.0, R)
        phi = spline(s)
        dphi = dspline(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(s > 0, dphi / s, 0.0)
        d2 = m_plus_inv(-lam * phi - (n - 1) * m_plus(x, params), params)
        d2 = np.where(s > 0, d2, d2phi0)
        inner = t < d
        return (
            np.where(inner, phi0, phi),
            np.where(inner, 0.0, dphi),
            np.where(inner, 0.0, d2),
        )

    return TestFunction(flat.sign, ball.R, fn=fn, label=f"shifted:{d:.12g}")


def revolution_compare(curve, params, sign, n=2, cache=None, key=None):
    """Compare ``lam^sign`` of a hypersurface of revolution with the flat ball of the same boundary radius."""
    if cache is None:
        cache = SolveCache()
    L, warp = arc_length_reparametrize(curve)
    Rb = curve.boundary_radius
    sigma_ball = GeodesicBall(n, L, warp)
    disk = GeodesicBall(n, Rb, SpaceFormWarp(0.0))
    lam_s = cache.solve(key or ("profile", curve.label), sigma_ball, params, sign)
    lam_d = cache.solve(("spaceform", 0.0), disk, params, sign)
    ls, ld = lam_s.lam, lam_d.lam
    margin = ld - ls
    d = L - Rb
    psi = shifted_test_function(sigma_ball, lam_d, max(d, 0.0))
    bb = barta_bounds(sigma_ball, params, psi, N=cache.N)
    chain_ok = (ls <= bb.esup_full + MARGIN_RTOL * ls) and (bb.esup_full <= ld + 1e-6)
    equal = abs(margin) < EQUALITY_RTOL * ld
    diag = dict(
        L=L, d=d, boundary_radius=Rb,
        esup_shifted=bb.esup_full, einf_shifted=bb.einf_full, chain_ok=bool(chain_ok),
        residual_manifold=lam_s.diagnostics.residual_sup,
    )
    return ComparisonRow(
        n=n, R=Rb, a=params.a, A=params.A, sign=sign, mode="revolution",
        geometry=curve.label, K_model=0.0, lambda_manifold=ls, lambda_model=ld,
        margin=margin, hypothesis="held", equality_flag=bool(equal), direction="<=",
        diagnostics=diag,
    )


@dataclass(frozen=True, eq=False)
class LemmaReport:
    """Pointwise checks of the ``rho'/rho`` ordering and of volume-ratio monotonicity.

    ``rauch`` is ``"upper"`` when curvature <= K (expect ``zeta_g >= zeta_K``),
    ``"lower"`` when curvature >= K (expect ``zeta_g <= zeta_K``), ``"both"``
    for constant curvature K, or ``None``. ``bishop`` says whether the Ricci
    hypothesis and admissibility held, in which case ``(rho/rho_K)^(n-1)``
    must not increase along the grid. Points inside the pole band of a
    sampled warp count as passing; ``unresolved`` says how many there are.
    """

    r: np.ndarray
    zeta_g: np.ndarray
    zeta_K: np.ndarray
    rauch: str | None
    rauch_pass: np.ndarray
    bishop: bool
    ratio: np.ndarray
    bishop_pass: np.ndarray
    unresolved: int = 0

    @property
    def ok(self):
        return bool(self.rauch_pass.all() and self.bishop_pass.all())


def lemma_checks(ball, K, n=None, num=None, tol=HYPOTHESIS_TOL):
    n = ball.n if n is None else n
    if n != ball.n:
        raise ValueError("dimension does not match the ball")
    r = ball.grid() if num is None else ball.grid(num)
    model = SpaceFormWarp(K)
    if K > 0 and ball.R >= model.r_max:
        raise DomainError("ball radius exceeds the model's injectivity bound")
    prof = curvature_profile(ball, r)
    zg = np.asarray(ball.warp.zeta(r))
    zk = np.asarray(model.zeta(r))
    upper = _classify(K - prof.sec_max, prof.analytic, tol) == "held"
    lower = _classify(prof.sec_min - K, prof.analytic, tol) == "held"
    slackz = tol * np.maximum(1.0, np.abs(zk))
    # sampled warps do not resolve zeta below their pole band
    band = getattr(ball.warp, "pole_band", 0.0)
    resolved = r >= band
    rauch_pass = np.ones_like(r, dtype=bool)
    if upper:
        rauch_pass &= (zg >= zk - slackz) | ~resolved
    if lower:
        rauch_pass &= (zg <= zk + slackz) | ~resolved
    rauch = "both" if upper and lower else "upper" if upper else "lower" if lower else None
    ric = _classify(prof.ric_min - (n - 1) * K, prof.analytic, tol) == "held"
    hball = GeodesicBall(n, ball.R, model)
    bishop = ric and is_admissible(ball)[0] and is_admissible(hball)[0]
    ratio = (ball.warp.evaluate(r)[0] / model.evaluate(r)[0]) ** (n - 1)
    if bishop:
        bishop_pass = (ratio[1:] <= ratio[:-1] * (1 + 1e-12)) | ~resolved[1:]
    else:
        bishop_pass = np.ones(len(r) - 1, dtype=bool)
    return LemmaReport(r, zg, zk, rauch, rauch_pass, bool(bishop), ratio, bishop_pass, int(np.count_nonzero(~resolved)))


def cheng_lattice(dims=DEFAULT_DIMS, curvatures=DEFAULT_CURVATURES, radii=DEFAULT_RADII,
                  params=DEFAULT_PARAMS, signs=DEFAULT_SIGNS, modes=MODES):
    """Lattice items ``(n, R, K_ball, K_model, (a, A), sign, mode)`` in report order."""
    items = []
    for n in dims:
        for R in radii:
            for Kb in curvatures:
                for K in curvatures:
                    if max(Kb, K) > 0 and R >= math.pi / math.sqrt(max(Kb, K)):
                        continue
                    for aA in params:
                        for sign in signs:
                            for mode in modes:
                                items.append((n, R, Kb, K, tuple(aA), sign, mode))
    return items


def revolution_lattice(profiles=DEFAULT_PROFILES, dims=DEFAULT_DIMS, params=DEFAULT_PARAMS, signs=DEFAULT_SIGNS):
    return [(spec, n, tuple(aA), sign) for spec in profiles for n in dims for aA in params for sign in signs]


def _prefetch(cache, jobs, threads):
    """Run the distinct solves up front, concurrently; results land in ``cache``."""
    uniq = {}
    for key, ball, params, sign in jobs:
        uniq.setdefault((key, ball.n, ball.R, params.a, params.A, sign), (key, ball, params, sign))
    todo = list(uniq.values())
    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda j: principal_half_eigenvalue(j[1], j[2], j[3], cache.tol, cache.N), todo))
        for (key, ball, params, sign), res in zip(todo, results):
            cache._store[(key, ball.n, ball.R, params.a, params.A, sign, cache.N, cache.tol)] = res
    else:
        for key, ball, params, sign in todo:
            cache.solve(key, ball, params, sign)


def run_cheng_sweep(items=None, N=DEFAULT_N, tol=DEFAULT_TOL, threads=None, cache=None):
    items = cheng_lattice() if items is None else items
    if cache is None:
        cache = SolveCache(N, tol)
    threads = worker_count() if threads is None else threads
    jobs = []
    for n, R, Kb, K, aA, sign, _ in items:
        p = PucciParams(*aA)
        jobs.append((("spaceform", float(Kb)), GeodesicBall(n, R, SpaceFormWarp(Kb)), p, sign))
        jobs.append((("spaceform", float(K)), GeodesicBall(n, R, SpaceFormWarp(K)), p, sign))
    _prefetch(cache, jobs, threads)
    rows = []
    for n, R, Kb, K, aA, sign, mode in items:
        ball = GeodesicBall(n, R, SpaceFormWarp(Kb))
        rows.append(cheng_compare(ball, K, PucciParams(*aA), sign, mode, cache, ("spaceform", float(Kb))))
    return rows


def run_revolution_sweep(items=None, N=DEFAULT_N, tol=DEFAULT_TOL, threads=None, cache=None):
    items = revolution_lattice() if items is None else items
    if cache is None:
        cache = SolveCache(N, tol)
    threads = worker_count() if threads is None else threads
    curves = {}
    jobs = []
    for spec, n, aA, sign in items:
        if spec not in curves:
            curve = builtin_profile(spec) if isinstance(spec, str) else spec
            curves[spec] = (curve, arc_length_reparametrize(curve))
        curve, (L, warp) = curves[spec]
        p = PucciParams(*aA)
        jobs.append((("profile", curve.label), GeodesicBall(n, L, warp), p, sign))
        jobs.append((("spaceform", 0.0), GeodesicBall(n, curve.boundary_radius, SpaceFormWarp(0.0)), p, sign))
    _prefetch(cache, jobs, threads)
    return [
        revolution_compare(curves[spec][0], PucciParams(*aA), sign, n, cache, ("profile", curves[spec][0].label))
        for spec, n, aA, sign in items
    ]


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(getattr(row, k)) for k in CSV_HEADER])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def rows_to_json(rows):
    out = []
    for row in rows:
        d = _jsonable(asdict(row))
        d["passed"] = row.passed
        out.append(d)
    return json.dumps(out, indent=2, sort_keys=True) + "\n"
