"""Initial value problem for the radial Pucci eigenvalue equation.

For a radial function on a rotationally symmetric ball the equation
``P+ phi = -lam phi`` becomes

    phi'' = m_inv(-lam phi - (n - 1) m(phi' rho'/rho)),

integrated from the pole with classical fixed-step RK4. The right-hand
side is only piecewise smooth, so every step whose stages disagree on the
branch of ``m`` or ``m_inv`` is redone with eight substeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .pucci_core import RadialFunction

__all__ = [
    "ShootResult",
    "ZetaTable",
    "zeta_table",
    "shoot",
    "first_zero",
    "sign_value",
    "seed_curvature",
    "branch_weights",
    "DEFAULT_N",
    "POLE_OFFSET",
    "SUBSTEPS",
]

DEFAULT_N = 20000
POLE_OFFSET = 1e-6
SUBSTEPS = 8
_FINE = 2 * SUBSTEPS
_DIVERGED = 1e200


def sign_value(sign):
    if sign in ("plus", "+", 1):
        return 1.0
    if sign in ("minus", "-", -1):
        return -1.0
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


def branch_weights(params, reflected=False):
    """Weights ``(p, q)`` of ``m(x) = p x`` for ``x >= 0`` and ``q x`` for ``x < 0``.

    ``reflected`` selects the minimal weights ``m_minus(x) = -m_plus(-x)``.
    """
    return (params.a, params.A) if reflected else (params.A, params.a)


@dataclass(frozen=True, eq=False)
class ZetaTable:
    """``rho'/rho`` sampled on a sub-grid of ``2 * SUBSTEPS`` points per step.

    ``start`` holds the three stage radii of the first step, which begins at
    the pole offset rather than at a grid node.
    """

    R: float
    N: int
    r0: float
    fine: np.ndarray
    start: np.ndarray

    @property
    def h(self):
        return self.R / self.N

    def at_nodes(self):
        return self.fine[::_FINE]


def zeta_table(ball, N=DEFAULT_N, eps=POLE_OFFSET):
    if N < 64:
        raise ValueError("grid size N must be at least 64")
    R = ball.R
    h = R / N
    r0 = eps * R
    rf = R * np.arange(_FINE * N + 1) / (_FINE * N)
    fine = np.empty_like(rf)
    fine[0] = np.inf
    fine[1:] = ball.warp.zeta(rf[1:])
    start = np.asarray(ball.warp.zeta(np.array([r0, 0.5 * (r0 + h), h])), dtype=float)
    if not np.all(np.isfinite(fine[1:])) or not np.all(np.isfinite(start)):
        raise FloatingPointError("warp produced a non-finite rho'/rho inside the ball")
    return ZetaTable(R, N, r0, fine, start)


@njit(cache=True, nogil=True)
def _rhs(y, yp, z, lam, nm1, p, q):
    x = yp * z
    mx = p * x if x >= 0.0 else q * x
    s = -lam * y - nm1 * mx
    k = s / p if s >= 0.0 else s / q
    return k, x >= 0.0, s >= 0.0


@njit(cache=True, nogil=True)
def _rk4(y, yp, hh, z0, zm, z1, lam, nm1, p, q):
    k1, bx, bs = _rhs(y, yp, z0, lam, nm1, p, q)
    y2 = y + 0.5 * hh * yp
    yp2 = yp + 0.5 * hh * k1
    k2, bx2, bs2 = _rhs(y2, yp2, zm, lam, nm1, p, q)
    y3 = y + 0.5 * hh * yp2
    yp3 = yp + 0.5 * hh * k2
    k3, bx3, bs3 = _rhs(y3, yp3, zm, lam, nm1, p, q)
    y4 = y + hh * yp3
    yp4 = yp + hh * k3
    k4, bx4, bs4 = _rhs(y4, yp4, z1, lam, nm1, p, q)
    mixed = (bx2 != bx) or (bx3 != bx) or (bx4 != bx) or (bs2 != bs) or (bs3 != bs) or (bs4 != bs)
    yn = y + hh / 6.0 * (yp + 2.0 * yp2 + 2.0 * yp3 + yp4)
    ypn = yp + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return yn, ypn, bx, bs, mixed


@njit(cache=True, nogil=True)
def _integrate(h, r0, sigma, lam, nm1, p, q, fine, start, d2_0, nsub):
    nf = 2 * nsub
    N = (fine.shape[0] - 1) // nf
    phi = np.full(N + 1, np.nan)
    dphi = np.full(N + 1, np.nan)
    d2 = np.full(N + 1, np.nan)
    flagged = np.zeros(N, dtype=np.bool_)
    phi[0] = sigma
    dphi[0] = 0.0
    d2[0] = d2_0

    # Taylor seed at the pole offset, then one step onto the first node
    y = sigma + 0.5 * d2_0 * r0 * r0
    yp = d2_0 * r0
    y, yp, bx, bs, mixed = _rk4(y, yp, h - r0, start[0], start[1], start[2], lam, nm1, p, q)
    phi[1] = y
    dphi[1] = yp
    k, bx, bs = _rhs(y, yp, fine[nf], lam, nm1, p, q)
    d2[1] = k
    status = 0
    # a single branch pair means the right-hand side is smooth
    linear = p == q
    for i in range(1, N):
        j = nf * i
        yn, ypn, bx, bs, mixed = _rk4(y, yp, h, fine[j], fine[j + nsub], fine[j + nf], lam, nm1, p, q)
        kn, bxn, bsn = _rhs(yn, ypn, fine[j + nf], lam, nm1, p, q)
        if not linear and (mixed or bxn != bx or bsn != bs):
            flagged[i] = True
            hs = h / nsub
            yn = y
            ypn = yp
            for m in range(nsub):
                jm = j + 2 * m
                yn, ypn, _, _, _ = _rk4(yn, ypn, hs, fine[jm], fine[jm + 1], fine[jm + 2], lam, nm1, p, q)
            kn, bxn, bsn = _rhs(yn, ypn, fine[j + nf], lam, nm1, p, q)
        if not (abs(yn) < _DIVERGED and abs(ypn) < _DIVERGED):
            status = 1
            break
        y = yn
        yp = ypn
        phi[i + 1] = y
        dphi[i + 1] = yp
        d2[i + 1] = kn
    return phi, dphi, d2, flagged, status


@dataclass(frozen=True, eq=False)
class ShootResult:
    """Outcome of one shot.

    ``status`` is ``"zero_at"``, ``"no_zero_in_ball"`` or ``"diverged"``;
    ``crossings`` counts sign changes of ``phi`` on ``(0, R]``.
    """

    trajectory: RadialFunction
    first_zero: float | None
    status: str
    crossings: int
    lam: float
    sign: float
    flagged_steps: int

    @property
    def has_zero(self):
        return self.first_zero is not None

    @property
    def boundary_value(self):
        return float(self.trajectory.f[-1])


def _crossing_mask(phi):
    a, b = phi[:-1], phi[1:]
    return ((a > 0) & (b <= 0)) | ((a < 0) & (b >= 0))


def first_zero(trajectory, rtol=1e-12):
    """Smallest radius where the sampled function changes sign, or ``None``.

    The crossing interval is refined on the cubic Hermite interpolant built
    from ``f`` and ``f'`` at its two end nodes.
    """
    phi = trajectory.f
    idx = np.nonzero(_crossing_mask(phi))[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    r = trajectory.r
    if phi[i + 1] == 0.0:
        return float(r[i + 1])
    df = trajectory.df
    if not (np.isfinite(df[i]) and np.isfinite(df[i + 1])):
        t = phi[i] / (phi[i] - phi[i + 1])
        return float(r[i] + t * (r[i + 1] - r[i]))
    spline = CubicHermiteSpline(r[i:i + 2], phi[i:i + 2], df[i:i + 2])
    return float(brentq(spline, r[i], r[i + 1], xtol=rtol * r[-1], rtol=4 * np.finfo(float).eps))


def shoot(ball, params, lam, sign="plus", N=DEFAULT_N, eps=POLE_OFFSET, table=None, reflected=False):
    """Integrate the radial eigenvalue equation from ``phi(0) = +-1``, ``phi'(0) = 0``.

    Parameters
    ----------
    ball : GeodesicBall
    params : PucciParams
    lam : float
        Trial eigenvalue, ``lam >= 0``.
    sign : {"plus", "minus"}
        Sign of ``phi(0)``.
    N : int
        Number of uniform steps on ``[0, R]``.
    eps : float
        Relative pole offset at which the Taylor seed is placed.
    table : ZetaTable, optional
        Precomputed ``rho'/rho`` samples; built when omitted.
    reflected : bool
        Use the minimal weights ``m_minus``; see :func:`branch_weights`.
    """
    if lam < 0 or not np.isfinite(lam):
        raise ValueError("trial eigenvalue must be finite and non-negative")
    if table is None:
        table = zeta_table(ball, N, eps)
    elif table.N != N or table.R != ball.R:
        raise ValueError("zeta table does not match the requested grid")
    sigma = sign_value(sign)
    p, q = branch_weights(params, reflected)
    d2_0 = seed_curvature(params, lam, sign, ball.n, reflected)
    phi, dphi, d2, flagged, status = _integrate(
        table.h, table.r0, sigma, float(lam), float(ball.n - 1), p, q,
        table.fine, table.start, d2_0, SUBSTEPS,
    )
    r = ball.R * np.arange(N + 1) / N
    steps = np.nonzero(flagged)[0]
    kinks = np.unique(np.concatenate([steps, steps + 1])) if steps.size else None
    if status:
        good = np.isfinite(phi)
        last = int(np.nonzero(good)[0][-1])
        phi = np.where(good, phi, phi[last])
    traj = RadialFunction(r, phi, dphi, d2, kinks)
    crossings = int(np.count_nonzero(_crossing_mask(phi)))
    rz = first_zero(traj)
    if rz is not None:
        state = "zero_at"
    else:
        state = "diverged" if status else "no_zero_in_ball"
    return ShootResult(traj, rz, state, crossings, float(lam), sigma, int(steps.size))


def seed_curvature(params, lam, sign, n, reflected=False):
    """Second derivative at the pole forced by ``n m(phi''(0)) = -lam phi(0)``."""
    p, q = branch_weights(params, reflected)
    s0 = -lam * sign_value(sign) / n
    return s0 / p if s0 >= 0.0 else s0 / q
