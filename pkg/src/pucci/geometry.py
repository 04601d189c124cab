"""Rotationally symmetric normal metrics ``dr^2 + rho(r)^2 g_sphere``.

A metric is described by its warp function ``rho``. Three kinds are
provided: space forms (closed form), tabulated samples (monotone cubic
interpolation) and warps induced on an O(n)-invariant hypersurface by the
generating curve of the hypersurface.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline, PchipInterpolator

from .exceptions import DomainError, InvalidProfileError, ResolutionError

__all__ = [
    "SpaceFormWarp",
    "TabulatedWarp",
    "ProfileWarp",
    "ProfileCurve",
    "GeodesicBall",
    "CurvatureProfile",
    "space_form_warp",
    "space_form_ball",
    "curvature_profile",
    "is_admissible",
    "arc_length_reparametrize",
    "zeta_and_model_zeta",
    "load_warp_csv",
    "load_profile_csv",
    "builtin_profile",
    "DEFAULT_CHECK_POINTS",
    "HYPOTHESIS_TOL",
]

DEFAULT_CHECK_POINTS = 4096
HYPOTHESIS_TOL = 1e-9
MIN_TABULATED_SAMPLES = 16


def _injectivity_bound(K):
    return math.pi / math.sqrt(K) if K > 0 else math.inf


def space_form_warp(K, r):
    """Warp of the space form of curvature ``K`` and its first two derivatives.

    Returns ``(rho, rho', rho'')``; ``r`` may be a scalar or an array.
    """
    K = float(K)
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    if K > 0 and np.any(r >= _injectivity_bound(K)):
        raise DomainError(f"r must be below pi/sqrt(K) = {_injectivity_bound(K):.12g}")
    if K > 0:
        s = math.sqrt(K)
        rho, drho = np.sin(s * r) / s, np.cos(s * r)
    elif K < 0:
        s = math.sqrt(-K)
        rho, drho = np.sinh(s * r) / s, np.cosh(s * r)
    else:
        rho, drho = r.copy(), np.ones_like(r)
    d2rho = -K * rho
    if scalar:
        return float(rho), float(drho), float(d2rho)
    return rho, drho, d2rho


@dataclass(frozen=True)
class SpaceFormWarp:
    """Warp of the simply connected space form of constant curvature ``K``."""

    K: float

    def __post_init__(self):
        object.__setattr__(self, "K", float(self.K))

    @property
    def r_max(self):
        return _injectivity_bound(self.K)

    @property
    def constant_curvature(self):
        return self.K

    @property
    def name(self):
        return f"spaceform:{self.K:g}"

    def evaluate(self, r):
        return space_form_warp(self.K, r)

    def zeta(self, r):
        """``rho'/rho``, evaluated in closed form."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            if self.K > 0:
                s = math.sqrt(self.K)
                out = s / np.tan(s * r)
            elif self.K < 0:
                s = math.sqrt(-self.K)
                out = s / np.tanh(s * r)
            else:
                out = 1.0 / r
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class TabulatedWarp:
    """Warp given by samples ``(r_i, rho_i)`` with ``r_0 = 0`` and ``rho_0 = 0``.

    By default the samples are interpolated with a monotone (PCHIP) cubic,
    which cannot overshoot. Its second derivative is only first-order
    accurate, with relative error near ``h/r``, so curvature is more reliable
    with ``method="spline"``: a C^2 cubic spline with ``rho''(0) = 0``, which
    holds because the warp of a smooth metric is odd. Below the first
    positive sample ``rho ~ r`` is assumed, so ``zeta = 1/r`` there.
    """

    r_samples: np.ndarray
    rho_samples: np.ndarray
    label: str = "tabulated"
    method: str = "pchip"
    _interp: object = field(init=False, repr=False)

    def __post_init__(self):
        r = np.asarray(self.r_samples, dtype=float)
        rho = np.asarray(self.rho_samples, dtype=float)
        if r.ndim != 1 or r.shape != rho.shape or len(r) < 4:
            raise ValueError("need matching 1-d sample arrays with at least four points")
        if r[0] != 0.0 or np.any(np.diff(r) <= 0):
            raise ValueError("sample radii must start at 0 and increase strictly")
        if abs(rho[0]) > 1e-12:
            raise ValueError("a normal metric has rho(0) = 0")
        if np.any(rho[1:] <= 0):
            raise DomainError("rho must be positive away from the pole")
        object.__setattr__(self, "r_samples", r)
        object.__setattr__(self, "rho_samples", rho)
        if self.method == "pchip":
            interp = PchipInterpolator(r, rho, extrapolate=False)
        elif self.method == "spline":
            interp = CubicSpline(r, rho, bc_type=((2, 0.0), "not-a-knot"), extrapolate=False)
        else:
            raise ValueError(f"unknown interpolation method {self.method!r}")
        object.__setattr__(self, "_interp", interp)

    @property
    def pole_band(self):
        """Radius below which sampled curvature is not reported."""
        spacings = 16 if self.method == "pchip" else 4
        return spacings * float(self.r_samples[1])

    @property
    def r_max(self):
        return float(self.r_samples[-1])

    @property
    def constant_curvature(self):
        return None

    @property
    def name(self):
        return self.label

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r > self.r_max * (1 + 1e-12)):
            raise DomainError("radius outside the tabulated range")
        rc = np.minimum(r, self.r_max)
        out = (self._interp(rc), self._interp(rc, 1), self._interp(rc, 2))
        if r.ndim == 0:
            return tuple(float(v) for v in out)
        return out

    def zeta(self, r):
        r = np.asarray(r, dtype=float)
        rho, drho, _ = self.evaluate(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(r < self.r_samples[1], 1.0 / r, drho / rho)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """Generating curve ``u -> (x(u), z(u))``, ``u in [0, U]``, of an O(n)-invariant hypersurface.

    ``x`` is the distance to the axis and ``z`` the axial coordinate. All six
    callables must accept arrays.
    """

    x: Callable
    z: Callable
    dx: Callable
    dz: Callable
    ddx: Callable
    ddz: Callable
    U: float
    label: str = "profile"

    @property
    def boundary_radius(self):
        return float(self.x(np.asarray(self.U)))

    def speed(self, u):
        return np.hypot(self.dx(u), self.dz(u))

    def validate(self, num=DEFAULT_CHECK_POINTS):
        if not (self.U > 0 and math.isfinite(self.U)):
            raise InvalidProfileError("parameter interval must be [0, U] with U > 0")
        u = np.linspace(0.0, self.U, num + 1)
        x = np.asarray(self.x(u), dtype=float)
        s = self.speed(u)
        if abs(x[0]) > 1e-12:
            raise InvalidProfileError("profile must start on the axis, x(0) = 0")
        bad = np.nonzero(x[1:] <= 0)[0]
        if bad.size:
            raise InvalidProfileError(f"profile meets the axis again at u = {u[bad[0] + 1]:.6g}")
        if not np.all(np.isfinite(s)) or np.any(s <= 0):
            raise InvalidProfileError("arc-length integrand must be positive")
        dx0, dz0 = float(self.dx(np.asarray(0.0))), float(self.dz(np.asarray(0.0)))
        if dx0 <= 0:
            raise InvalidProfileError("profile must leave the axis transversally, x'(0) > 0")
        if abs(dz0) > 1e-8 * s[0]:
            raise InvalidProfileError("profile is not smooth at the pole, z'(0) != 0")

    @classmethod
    def from_samples(cls, u, x, z, label="profile"):
        """Interpolate sampled ``(u, x, z)`` with C^2 cubic splines."""
        u, x, z = (np.asarray(v, dtype=float) for v in (u, x, z))
        if u.ndim != 1 or not (u.shape == x.shape == z.shape) or len(u) < 4:
            raise InvalidProfileError("need matching sample columns with at least four rows")
        if u[0] != 0.0 or np.any(np.diff(u) <= 0):
            raise InvalidProfileError("u must start at 0 and increase strictly")
        if abs(x[0]) > 1e-12:
            raise InvalidProfileError("profile must start on the axis, x(0) = 0")
        xs = CubicSpline(u, x, bc_type="not-a-knot")
        zs = CubicSpline(u, z, bc_type=((1, 0.0), "not-a-knot"))
        return cls(
            x=xs, z=zs,
            dx=xs.derivative(1), dz=zs.derivative(1),
            ddx=xs.derivative(2), ddz=zs.derivative(2),
            U=float(u[-1]), label=label,
        )

    @classmethod
    def graph(cls, f, df, d2f, radius=1.0, label="graph"):
        """Profile of the graph ``z = f(x)`` over ``0 <= x <= radius``."""
        return cls(
            x=lambda u: np.asarray(u, dtype=float),
            z=f,
            dx=lambda u: np.ones_like(np.asarray(u, dtype=float)),
            dz=df,
            ddx=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
            ddz=d2f,
            U=float(radius),
            label=label,
        )


def _disk(radius=1.0):
    zero = lambda u: np.zeros_like(np.asarray(u, dtype=float))
    return ProfileCurve.graph(zero, zero, zero, radius, label="disk")


def _cap(angle):
    """Spherical cap of opening ``angle`` whose boundary circle has radius 1."""
    angle = float(angle)
    if not 0 < angle < math.pi:
        raise InvalidProfileError("cap angle must lie in (0, pi)")
    a = 1.0 / math.sin(angle)
    return ProfileCurve(
        x=lambda u: a * np.sin(u),
        z=lambda u: a * (1.0 - np.cos(u)),
        dx=lambda u: a * np.cos(u),
        dz=lambda u: a * np.sin(u),
        ddx=lambda u: -a * np.sin(u),
        ddz=lambda u: a * np.cos(u),
        U=angle,
        label=f"cap:{angle:.12g}",
    )


def _paraboloid(c):
    c = float(c)
    return ProfileCurve.graph(
        lambda u: c * np.asarray(u) ** 2,
        lambda u: 2.0 * c * np.asarray(u),
        lambda u: np.full_like(np.asarray(u, dtype=float), 2.0 * c),
        label=f"paraboloid:{c:g}",
    )


def _bump(height):
    """Cosine bump ``z = height (1 + cos(pi x)) / 2`` over the unit disk."""
    hh = 0.5 * float(height)
    return ProfileCurve.graph(
        lambda u: hh * (1.0 + np.cos(np.pi * np.asarray(u))),
        lambda u: -hh * np.pi * np.sin(np.pi * np.asarray(u)),
        lambda u: -hh * np.pi ** 2 * np.cos(np.pi * np.asarray(u)),
        label=f"bump:{float(height):g}",
    )


def builtin_profile(spec):
    """Parse ``disk``, ``hemisphere``, ``cap:<angle>``, ``paraboloid:<c>`` or ``bump:<height>``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "disk":
            return _disk(float(arg) if arg else 1.0)
        if kind == "hemisphere" and not arg:
            curve = _cap(math.pi / 2)
            return ProfileCurve(curve.x, curve.z, curve.dx, curve.dz, curve.ddx, curve.ddz, curve.U, "hemisphere")
        if kind == "cap":
            return _cap(float(arg))
        if kind == "paraboloid":
            return _paraboloid(float(arg))
        if kind == "bump":
            return _bump(float(arg))
    except ValueError as exc:
        raise InvalidProfileError(f"bad profile parameter in {spec!r}") from exc
    raise InvalidProfileError(f"unknown built-in profile {spec!r}")


def _composite_simpson_length(curve, start_panels=64, rtol=1e-10, max_panels=2 ** 22):
    m = start_panels
    prev = None
    while m <= max_panels:
        u = np.linspace(0.0, curve.U, m + 1)
        s = curve.speed(u)
        h = curve.U / m
        L = h / 3.0 * (s[0] + s[-1] + 4.0 * s[1:-1:2].sum() + 2.0 * s[2:-1:2].sum())
        if prev is not None and abs(L - prev) < rtol * L:
            return L
        prev = L
        m *= 2
    raise ResolutionError("arc-length quadrature did not converge")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True, eq=False)
class ProfileWarp:
    """Warp induced on a hypersurface of revolution in geodesic polar coordinates at the pole.

    The arc length ``t`` from the pole is the geodesic radius and
    ``rho(t) = x(u(t))`` is the distance to the axis.
    """

    curve: ProfileCurve
    length: float
    panels: int = 4096
    _u_of_t: CubicHermiteSpline = field(init=False, repr=False)

    def __post_init__(self):
        c = self.curve
        u = np.linspace(0.0, c.U, self.panels + 1)
        half = 0.5 * (u[1] - u[0])
        mids = 0.5 * (u[:-1] + u[1:])
        nodes = mids[:, None] + half * _GL_NODES[None, :]
        seg = half * (c.speed(nodes) * _GL_WEIGHTS[None, :]).sum(axis=1)
        t = np.concatenate([[0.0], np.cumsum(seg)])
        if np.any(np.diff(t) <= 0):
            raise InvalidProfileError("cumulative arc length is not strictly increasing")
        # rescale the table so its end matches the adaptively converged length
        t *= self.length / t[-1]
        object.__setattr__(self, "_u_of_t", CubicHermiteSpline(t, u, 1.0 / c.speed(u)))

    @property
    def r_max(self):
        return self.length

    @property
    def constant_curvature(self):
        return None

    @property
    def name(self):
        return self.curve.label

    def _u(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.length * (1 + 1e-12)):
            raise DomainError("radius outside [0, L]")
        return np.clip(self._u_of_t(np.minimum(t, self.length)), 0.0, self.curve.U)

    def evaluate(self, t):
        c = self.curve
        u = self._u(t)
        dx, dz, ddx, ddz = c.dx(u), c.dz(u), c.ddx(u), c.ddz(u)
        s2 = dx * dx + dz * dz
        rho = np.asarray(c.x(u), dtype=float)
        drho = dx / np.sqrt(s2)
        d2rho = dz * (ddx * dz - dx * ddz) / (s2 * s2)
        if np.ndim(t) == 0:
            return float(rho), float(drho), float(d2rho)
        return rho, drho, d2rho

    def zeta(self, t):
        c = self.curve
        u = self._u(t)
        with np.errstate(divide="ignore"):
            out = c.dx(u) / (c.speed(u) * np.asarray(c.x(u), dtype=float))
        return float(out) if np.ndim(out) == 0 else out


def arc_length_reparametrize(curve):
    """Intrinsic pole-to-boundary distance ``L`` and the induced warp of ``curve``.

    The length uses composite Simpson refined until successive values agree
    to ``1e-10 L``.
    """
    curve.validate()
    L = _composite_simpson_length(curve)
    if L < curve.boundary_radius * (1 - 1e-12):
        raise InvalidProfileError("intrinsic length is shorter than the boundary radius")
    return L, ProfileWarp(curve, L)


@dataclass(frozen=True, eq=False)
class GeodesicBall:
    """Normal geodesic ball of radius ``R`` in dimension ``n`` with warp ``warp``."""

    n: int
    R: float
    warp: object

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("dimension must be an integer >= 2")
        object.__setattr__(self, "n", int(self.n))
        R = float(self.R)
        if not (R > 0 and math.isfinite(R)):
            raise ValueError("radius must be positive and finite")
        r_max = self.warp.r_max
        if isinstance(self.warp, SpaceFormWarp):
            if R >= r_max:
                raise DomainError(f"R = {R:g} violates the injectivity bound pi/sqrt(K) = {r_max:.12g}")
        elif R > r_max * (1 + 1e-12):
            raise DomainError(f"R = {R:g} exceeds the warp's domain {r_max:.12g}")
        object.__setattr__(self, "R", R)

    @property
    def label(self):
        return self.warp.name

    def grid(self, num=DEFAULT_CHECK_POINTS):
        """``num`` radii uniformly covering ``(0, R]``."""
        return self.R * np.arange(1, num + 1) / num


def space_form_ball(n, R, K):
    return GeodesicBall(n, R, SpaceFormWarp(K))


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    r: np.ndarray
    K_rad: np.ndarray
    K_tan: np.ndarray
    Ric_rad: np.ndarray
    Ric_tan: np.ndarray
    analytic: bool = False

    def _ext(self, a, fn):
        finite = a[np.isfinite(a)]
        return float(fn(finite)) if finite.size else math.nan

    @property
    def sec_min(self):
        return min(self._ext(self.K_rad, np.min), self._ext(self.K_tan, np.min))

    @property
    def sec_max(self):
        return max(self._ext(self.K_rad, np.max), self._ext(self.K_tan, np.max))

    @property
    def ric_min(self):
        return min(self._ext(self.Ric_rad, np.min), self._ext(self.Ric_tan, np.min))

    @property
    def ric_max(self):
        return max(self._ext(self.Ric_rad, np.max), self._ext(self.Ric_tan, np.max))


def curvature_profile(ball, grid=None):
    """Radial and tangential sectional curvature and Ricci curvature on ``grid``.

    Space forms are evaluated analytically. For ``n = 2`` only the radial
    (Gauss) curvature exists and ``K_tan`` is NaN. For sampled warps the
    quotients by ``rho`` are ill-conditioned near the pole, so points closer
    than :attr:`TabulatedWarp.pole_band` are reported as NaN and left out of
    the extrema.
    """
    n = ball.n
    r = ball.grid() if grid is None else np.asarray(grid, dtype=float)
    if np.any(r <= 0) or np.any(r > ball.R * (1 + 1e-12)):
        raise DomainError("curvature grid must lie in (0, R]")
    K0 = ball.warp.constant_curvature
    if K0 is not None:
        k = np.full_like(r, K0)
        k_tan = k.copy() if n > 2 else np.full_like(r, np.nan)
        return CurvatureProfile(r, k, k_tan, (n - 1) * k, (n - 1) * k, analytic=True)
    if isinstance(ball.warp, TabulatedWarp) and len(ball.warp.r_samples) < MIN_TABULATED_SAMPLES:
        raise ResolutionError(
            f"tabulated warp has {len(ball.warp.r_samples)} samples; "
            f"second derivatives need at least {MIN_TABULATED_SAMPLES}"
        )
    rho, drho, d2rho = ball.warp.evaluate(r)
    K_rad = -d2rho / rho
    K_tan = (1.0 - drho) * (1.0 + drho) / rho ** 2
    if isinstance(ball.warp, TabulatedWarp):
        near = r < ball.warp.pole_band
        K_rad = np.where(near, np.nan, K_rad)
        K_tan = np.where(near, np.nan, K_tan)
    ric_tan = K_rad + (n - 2) * K_tan if n > 2 else K_rad.copy()
    if n == 2:
        # a surface has no tangential 2-planes
        K_tan = np.full_like(r, np.nan)
    return CurvatureProfile(r, K_rad, K_tan, (n - 1) * K_rad, ric_tan)


def is_admissible(ball, num=DEFAULT_CHECK_POINTS, tol=HYPOTHESIS_TOL):
    """Whether ``rho' >= 0`` on ``(0, R]``; returns ``(ok, first_violation_radius)``.

    For a rotationally symmetric metric an orthogonal Jacobi field vanishing
    at the pole has length proportional to ``rho``, so monotone Jacobi
    lengths amount to a non-decreasing warp.
    """
    r = ball.grid(num)
    _, drho, _ = ball.warp.evaluate(r)
    bad = np.nonzero(drho < -tol)[0]
    if bad.size:
        return False, float(r[bad[0]])
    return True, None


def zeta_and_model_zeta(ball, K, r):
    """``rho'/rho`` for the ball and for the space form of curvature ``K`` at radius ``r``."""
    r = float(r)
    if not 0 < r <= ball.R * (1 + 1e-12):
        raise DomainError("need 0 < r <= R")
    if K > 0 and r >= _injectivity_bound(K):
        raise DomainError("r beyond the model's injectivity radius")
    rho, _, _ = ball.warp.evaluate(r)
    if rho <= 0:
        raise DomainError(f"warp vanishes at r = {r:g}")
    return float(ball.warp.zeta(r)), float(SpaceFormWarp(K).zeta(r))


def _read_csv(path, header):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != header:
        raise ValueError(f"{path}: expected header {','.join(header)}")
    try:
        data = np.array([[float(c) for c in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry") from exc
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged or empty table")
    return data.T


def load_warp_csv(path, method="pchip"):
    """Read a ``r,rho`` table into a :class:`TabulatedWarp`."""
    r, rho = _read_csv(path, ["r", "rho"])
    return TabulatedWarp(r, rho, label=f"warp:{path}", method=method)


def load_profile_csv(path):
    """Read a ``u,x,z`` table into a spline :class:`ProfileCurve`."""
    try:
        u, x, z = _read_csv(path, ["u", "x", "z"])
    except ValueError as exc:
        raise InvalidProfileError(str(exc)) from exc
    return ProfileCurve.from_samples(u, x, z, label=f"profile:{path}")
