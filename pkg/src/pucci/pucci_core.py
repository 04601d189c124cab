"""Scalar Pucci weights and the Pucci operator on radial functions.

For a radial function on a rotationally symmetric ball the Hessian has the
eigenvalue ``f''`` in the radial direction and ``f' * rho'/rho`` with
multiplicity ``n - 1`` in the tangential directions, so the operator reduces
to a sum of scalar evaluations of ``m_plus``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

__all__ = [
    "PucciParams",
    "RadialFunction",
    "m_plus",
    "m_plus_inv",
    "m_minus",
    "m_plus_spectrum",
    "pucci_radial",
    "pucci_at_origin",
]


@dataclass(frozen=True)
class PucciParams:
    """Ellipticity constants ``0 < a <= A``."""

    a: float
    A: float

    def __post_init__(self):
        a, A = float(self.a), float(self.A)
        if not (np.isfinite(a) and np.isfinite(A)) or a <= 0.0 or A < a:
            raise ValueError(f"need 0 < a <= A, got a={self.a}, A={self.A}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "A", A)

    def scaled(self, c):
        return PucciParams(c * self.a, c * self.A)

    @property
    def is_linear(self):
        return self.a == self.A


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """Samples of a radial function on the uniform grid ``r_i = i R / N``.

    ``d2f`` may hold NaN at nodes where the second derivative is undefined;
    ``kinks`` lists nodes adjacent to a switch of an ``m_plus`` branch.
    """

    r: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    kinks: np.ndarray = None

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        arrays = [np.asarray(v, dtype=float) for v in (self.f, self.df, self.d2f)]
        if r.ndim != 1 or len(r) < 3:
            raise ValueError("radial grid needs at least three points")
        if any(v.shape != r.shape for v in arrays):
            raise ValueError("derivative arrays must match the grid length")
        if r[0] != 0.0:
            raise ValueError("radial grid must start at the pole r = 0")
        h = np.diff(r)
        if np.any(h <= 0) or np.ptp(h) > 1e-9 * r[-1]:
            raise ValueError("radial grid must be uniform and increasing")
        if not np.all(np.isfinite(arrays[0])):
            raise ValueError("function values must be finite")
        kinks = np.zeros(0, dtype=np.int64) if self.kinks is None else np.asarray(self.kinks, dtype=np.int64)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "f", arrays[0])
        object.__setattr__(self, "df", arrays[1])
        object.__setattr__(self, "d2f", arrays[2])
        object.__setattr__(self, "kinks", kinks)

    @property
    def R(self):
        return float(self.r[-1])

    @property
    def N(self):
        return len(self.r) - 1

    @property
    def h(self):
        return self.R / self.N


def m_plus(x, params):
    """``A x`` for ``x >= 0`` and ``a x`` for ``x < 0``; works elementwise."""
    if np.ndim(x) == 0:
        x = float(x)
        return params.A * x if x >= 0.0 else params.a * x
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, params.A * x, params.a * x)


def m_minus(x, params):
    """Reflected weights: ``m_minus(x) = -m_plus(-x)``."""
    if np.ndim(x) == 0:
        x = float(x)
        return params.a * x if x >= 0.0 else params.A * x
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, params.a * x, params.A * x)


def m_plus_inv(s, params):
    """Inverse of :func:`m_plus`."""
    if np.ndim(s) == 0:
        s = float(s)
        return s / params.A if s >= 0.0 else s / params.a
    s = np.asarray(s, dtype=float)
    return np.where(s >= 0.0, s / params.A, s / params.a)


def m_plus_spectrum(mu, params):
    """Sum of :func:`m_plus` over a list of eigenvalues."""
    mu = np.asarray(mu, dtype=float).ravel()
    if mu.size == 0:
        return 0.0
    return float(np.sum(m_plus(mu, params)))


def pucci_radial(ball, params, d2f, df, r):
    """Pucci operator of a radial function at radius ``r > 0``.

    Parameters
    ----------
    ball : GeodesicBall
        Supplies the dimension and ``zeta = rho'/rho``.
    params : PucciParams
    d2f, df : float or ndarray
        Radial second and first derivatives at ``r``.
    r : float or ndarray
        Radii in ``(0, R]``.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("pucci_radial needs r > 0; use pucci_at_origin at the pole")
    zeta = ball.warp.zeta(r_arr)
    out = m_plus(d2f, params) + (ball.n - 1) * m_plus(np.asarray(df) * zeta, params)
    return float(out) if np.ndim(out) == 0 else out


def pucci_at_origin(params, d2f0, n):
    """At the pole the Hessian of a C^2 radial function is ``f''(0)`` times the identity."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    return n * m_plus(d2f0, params)
