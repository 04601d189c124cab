"""Principal half-eigenvalues by shooting from the pole.

The first zero of the shot solution moves inward monotonically as the trial
eigenvalue grows, so the predicate "the shot vanishes in (0, R]" is
monotone in ``lam``. The root is bracketed by doubling, isolated to a single
sign change by bisection, and then located with Brent's method on the
boundary value ``sign * phi(R)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .exceptions import InconsistencyError, NoConvergenceError
from .pucci_core import RadialFunction
from .radial_ode import DEFAULT_N, POLE_OFFSET, branch_weights, shoot, sign_value, zeta_table

__all__ = [
    "HalfEigenvalue",
    "Diagnostics",
    "ResolutionWarning",
    "principal_half_eigenvalue",
    "dual_check",
    "refine",
    "residual_sup",
    "DEFAULT_TOL",
    "RESIDUAL_RTOL",
]

DEFAULT_TOL = 1e-9
RESIDUAL_RTOL = 1e-6
MAX_DOUBLINGS = 60


class ResolutionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Diagnostics:
    residual_sup: float
    bracket: tuple
    iterations: int
    N: int
    boundary_gap: float
    flagged_steps: int
    max_wrong_slope: float
    refine_estimate: float | None = None


@dataclass(frozen=True, eq=False)
class HalfEigenvalue:
    """A principal half-eigenvalue with its normalized eigenfunction.

    ``eigenfunction`` has ``sup |phi| = 1``, ``phi(R) = 0`` and the sign of
    ``sign``; ``d2f`` holds the second derivative implied by the equation.
    """

    sign: str
    lam: float
    eigenfunction: RadialFunction
    diagnostics: Diagnostics
    ball: object = field(repr=False)
    params: object = field(repr=False)
    tol: float = DEFAULT_TOL
    reflected: bool = False

    @property
    def sigma(self):
        return sign_value(self.sign)


def residual_sup(ball, params, lam, eigenfunction, reflected=False, zeta=None):
    """Largest residual of the eigenvalue equation over interior grid nodes.

    ``phi''`` is estimated by centered differences of ``phi'``, independently
    of the integrator's right-hand side. Nodes whose stencil straddles a
    branch switch are skipped, since ``phi''`` has a corner there.
    """
    ef = eigenfunction
    N, h = ef.N, ef.h
    p, q = branch_weights(params, reflected)
    if zeta is None:
        zeta = ball.warp.zeta(ef.r[1:-1])
    d2 = (ef.df[2:] - ef.df[:-2]) / (2.0 * h)
    x = ef.df[1:-1] * zeta
    op = np.where(d2 >= 0, p * d2, q * d2) + (ball.n - 1) * np.where(x >= 0, p * x, q * x)
    res = np.abs(op + lam * ef.f[1:-1])
    keep = np.ones(N - 1, dtype=bool)
    if ef.kinks.size:
        bad = np.concatenate([ef.kinks - 1, ef.kinks, ef.kinks + 1]) - 1
        keep[bad[(bad >= 0) & (bad < N - 1)]] = False
    return float(np.max(res[keep])) if keep.any() else math.nan


def principal_half_eigenvalue(
    ball, params, sign="plus", tol=DEFAULT_TOL, N=DEFAULT_N, eps=POLE_OFFSET,
    reflected=False, audit=True,
):
    """Principal half-eigenvalue of the sign ``sign`` on ``ball``.

    Parameters
    ----------
    ball : GeodesicBall
    params : PucciParams
    sign : {"plus", "minus"}
    tol : float
        Relative width of the final bracket, at least ``1e-12``.
    N : int
        Grid size of the shooting integrator.
    reflected : bool
        Solve with the minimal weights instead (used by :func:`dual_check`).
    audit : bool
        Raise :class:`InconsistencyError` if the residual exceeds ``1e-6 lam``.

    Returns
    -------
    HalfEigenvalue
    """
    if tol < 1e-12:
        raise ValueError("relative tolerance must be at least 1e-12")
    sigma = sign_value(sign)
    sign = "plus" if sigma > 0 else "minus"
    table = zeta_table(ball, N, eps)
    shots = {}

    def run(lam):
        if lam not in shots:
            shots[lam] = shoot(ball, params, lam, sign, N, eps, table, reflected)
        return shots[lam]

    lo = 0.0
    hi = max(1.0, params.a * (math.pi / ball.R) ** 2 * ball.n)
    for _ in range(MAX_DOUBLINGS):
        if run(hi).has_zero:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NoConvergenceError(f"no sign change up to lam = {hi:.6g}")
    while run(hi).crossings > 1:
        mid = 0.5 * (lo + hi)
        if run(mid).has_zero:
            hi = mid
        else:
            lo = mid

    state = {"lo": lo, "hi": hi}

    def boundary(lam):
        s = run(lam)
        if s.has_zero:
            if s.crossings == 1:
                state["hi"] = min(state["hi"], lam)
        else:
            state["lo"] = max(state["lo"], lam)
        return sigma * s.boundary_value

    if hi - lo > tol * hi:
        root = brentq(boundary, lo, hi, xtol=1e-3 * tol * lo if lo > 0 else 1e-15, rtol=0.25 * tol, maxiter=200)
    else:
        root = hi
    lo, hi = state["lo"], state["hi"]
    # certify the bracket around the root with the monotone predicate
    for probe in (root * (1 - 0.4 * tol), root * (1 + 0.4 * tol)):
        if lo < probe < hi:
            boundary(probe)
    lo, hi = state["lo"], state["hi"]
    while hi - lo > tol * hi:
        boundary(0.5 * (lo + hi))
        lo, hi = state["lo"], state["hi"]
    lam = root if lo <= root <= hi else 0.5 * (lo + hi)

    res = run(lam)
    traj = res.trajectory
    scale = float(np.max(np.abs(traj.f)))
    f = traj.f / scale
    f[-1] = 0.0
    ef = RadialFunction(traj.r, f, traj.df / scale, traj.d2f / scale, traj.kinks)
    rsup = residual_sup(ball, params, lam, ef, reflected, zeta=table.at_nodes()[1:-1])
    wrong = float(np.max(sigma * ef.df[1:-1])) / max(float(np.max(np.abs(ef.df))), 1e-300)
    if res.first_zero is not None:
        gap = abs(res.first_zero - ball.R)
    else:
        gap = abs(traj.f[-1] / traj.df[-1]) if traj.df[-1] != 0 else math.inf
    diag = Diagnostics(
        residual_sup=rsup,
        bracket=(float(lo), float(hi)),
        iterations=len(shots),
        N=N,
        boundary_gap=float(gap),
        flagged_steps=res.flagged_steps,
        max_wrong_slope=max(wrong, 0.0),
    )
    if audit and not rsup <= RESIDUAL_RTOL * lam:
        raise InconsistencyError(f"residual {rsup:.3e} exceeds {RESIDUAL_RTOL:g} * lam = {RESIDUAL_RTOL * lam:.3e}", rsup)
    return HalfEigenvalue(sign, float(lam), ef, diag, ball, params, tol, reflected)


def refine(result, warn_factor=1e3, audit=True):
    """Re-solve at twice the grid size and record ``|lam_N - lam_2N|``."""
    d = result.diagnostics
    fine = principal_half_eigenvalue(
        result.ball, result.params, result.sign, result.tol, 2 * d.N, reflected=result.reflected, audit=audit
    )
    est = abs(fine.lam - result.lam)
    if est > warn_factor * result.tol * result.lam:
        warnings.warn(f"refinement estimate {est:.3e} exceeds {warn_factor:g} * tol * lam", ResolutionWarning)
    return replace(fine, diagnostics=replace(fine.diagnostics, refine_estimate=est))


def dual_check(ball, params, tol=DEFAULT_TOL, N=DEFAULT_N):
    """``lam-`` solved directly and as ``lam+`` of the reflected operator.

    If ``phi < 0`` solves ``P+ phi = -lam phi`` then ``-phi > 0`` solves the
    same equation with the minimal weights, since ``m_plus(-x) = -m_minus(x)``.
    """
    direct = principal_half_eigenvalue(ball, params, "minus", tol, N)
    dual = principal_half_eigenvalue(ball, params, "plus", tol, N, reflected=True)
    if abs(direct.lam - dual.lam) > 2 * tol * max(direct.lam, dual.lam):
        raise InconsistencyError(f"duality mismatch: {direct.lam!r} vs {dual.lam!r}", (direct.lam, dual.lam))
    return direct.lam, dual.lam
