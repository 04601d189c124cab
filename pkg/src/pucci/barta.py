"""Barta-type bounds for principal half-eigenvalues.

For a radial test function ``psi`` of one sign that vanishes on the
boundary, the essential infimum and supremum of ``-P+ psi / psi`` bracket
the half-eigenvalue of that sign.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import InvalidTestFunctionError
from .pucci_core import RadialFunction, m_plus
from .radial_ode import DEFAULT_N, sign_value

__all__ = [
    "TestFunction",
    "BartaBounds",
    "barta_bounds",
    "maxmin_estimate",
    "minmax_estimate",
    "builtin_test_function",
    "load_test_function_csv",
    "random_smooth_family",
    "sup_distance",
    "BOUNDARY_BAND",
]

BOUNDARY_BAND = 0.01


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Sign-definite radial function on ``[0, R]`` vanishing at ``R``.

    Exactly one of ``fn`` (returns ``(psi, psi', psi'')`` at any radii) or
    ``samples`` (values on a uniform grid) is set. ``fd`` marks samples whose
    derivatives came from finite differences.
    """

    __test__ = False  # not a pytest class

    sign: str
    R: float
    fn: Callable | None = None
    samples: RadialFunction | None = None
    label: str = "psi"
    fd: bool = False

    def __post_init__(self):
        if (self.fn is None) == (self.samples is None):
            raise ValueError("give exactly one of fn or samples")
        sigma = sign_value(self.sign)
        object.__setattr__(self, "sign", "plus" if sigma > 0 else "minus")
        object.__setattr__(self, "R", float(self.R))

    @property
    def sigma(self):
        return sign_value(self.sign)

    def on_grid(self, N):
        if self.samples is not None:
            s = self.samples
            return s.r, s.f, s.df, s.d2f
        r = self.R * np.arange(N + 1) / N
        psi, dpsi, d2psi = (np.asarray(v, dtype=float) for v in self.fn(r))
        return r, psi, dpsi, d2psi

    def scaled(self, c, sign=None):
        if self.samples is not None:
            s = self.samples
            samples = RadialFunction(s.r, c * s.f, c * s.df, c * s.d2f, s.kinks)
            return TestFunction(sign or self.sign, self.R, samples=samples, label=self.label, fd=self.fd)
        fn = self.fn
        return TestFunction(sign or self.sign, self.R, fn=lambda r: tuple(c * v for v in fn(r)), label=self.label)

    @classmethod
    def from_eigenfunction(cls, result):
        return cls(result.sign, result.eigenfunction.R, samples=result.eigenfunction, label=f"phi_{result.sign}")

    @classmethod
    def from_values(cls, r, psi, dpsi=None, sign="plus", label="samples"):
        """Samples on a uniform grid; missing derivatives by centered differences."""
        r = np.asarray(r, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if len(r) < 5:
            raise InvalidTestFunctionError("need at least five samples")
        h = r[1] - r[0]
        if dpsi is None:
            dpsi = np.gradient(psi, h, edge_order=2)
            dpsi[0] = 0.0
            d2 = np.empty_like(psi)
            d2[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / h ** 2
            d2[0] = 2.0 * (psi[1] - psi[0]) / h ** 2
            d2[-1] = (2 * psi[-1] - 5 * psi[-2] + 4 * psi[-3] - psi[-4]) / h ** 2
        else:
            dpsi = np.asarray(dpsi, dtype=float)
            d2 = np.gradient(dpsi, h, edge_order=2)
            d2[0] = dpsi[1] / h
        try:
            samples = RadialFunction(r, psi, dpsi, d2)
        except ValueError as exc:
            raise InvalidTestFunctionError(str(exc)) from exc
        return cls(sign, float(r[-1]), samples=samples, label=label, fd=True)


def load_test_function_csv(path, sign="plus"):
    """Read ``r,psi`` (or ``r,psi,dpsi``, or an eigenfunction ``r,phi,dphi``) samples."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = [c.strip() for c in rows[0]] if rows else []
    if header not in (["r", "psi"], ["r", "psi", "dpsi"], ["r", "phi", "dphi"]):
        raise InvalidTestFunctionError(f"{path}: expected header r,psi or r,psi,dpsi")
    data = np.array([[float(c) for c in row] for row in rows[1:] if row], dtype=float).T
    dpsi = data[2] if len(header) == 3 else None
    return TestFunction.from_values(data[0], data[1], dpsi, sign=sign, label=str(path))


def _cosine(R):
    k = 0.5 * math.pi / R
    return lambda r: (np.cos(k * r), -k * np.sin(k * r), -k * k * np.cos(k * r))


def _quadratic(R):
    return lambda r: (1.0 - (r / R) ** 2, -2.0 * r / R ** 2, np.full_like(r, -2.0 / R ** 2))


def _gaussian_bump(R, width):
    w2 = float(width) ** 2
    floor = math.exp(-R * R / (2 * w2))
    scale = 1.0 / (1.0 - floor)

    def fn(r):
        g = np.exp(-r * r / (2 * w2))
        return scale * (g - floor), -scale * r / w2 * g, scale * (r * r / w2 - 1.0) / w2 * g

    return fn


def builtin_test_function(spec, R, sign="plus"):
    """``cos``, ``quadratic`` or ``bump:<width>``, scaled to the radius ``R`` and signed."""
    kind, _, arg = spec.partition(":")
    if kind == "cos" and not arg:
        fn = _cosine(R)
    elif kind == "quadratic" and not arg:
        fn = _quadratic(R)
    elif kind == "bump":
        try:
            width = float(arg)
        except ValueError:
            raise InvalidTestFunctionError(f"bad bump width in {spec!r}") from None
        if width <= 0:
            raise InvalidTestFunctionError("bump width must be positive")
        fn = _gaussian_bump(R, width)
    else:
        raise InvalidTestFunctionError(f"unknown test function {spec!r}")
    sigma = sign_value(sign)
    signed = fn if sigma > 0 else (lambda r: tuple(-v for v in fn(r)))
    return TestFunction(sign, R, fn=signed, label=spec)


def random_smooth_family(R, count=5, seed=0, sign="plus", degree=3):
    """Functions ``(1 - s^2) exp(sum c_k s^{2k})``, ``s = r/R``, with random ``c_k`` in [-1, 1].

    The even powers keep them smooth at the pole.
    """
    rng = np.random.default_rng(seed)
    sigma = sign_value(sign)
    family = []
    for j in range(count):
        c = rng.uniform(-1.0, 1.0, degree)

        def fn(r, c=c):
            s = np.asarray(r, dtype=float) / R
            P = sum(ck * s ** (2 * k + 2) for k, ck in enumerate(c))
            dP = sum((2 * k + 2) * ck * s ** (2 * k + 1) for k, ck in enumerate(c))
            d2P = sum((2 * k + 2) * (2 * k + 1) * ck * s ** (2 * k) for k, ck in enumerate(c))
            q = 1.0 - s * s
            e = np.exp(P)
            psi = q * e
            dpsi = (-2.0 * s + q * dP) * e / R
            d2psi = (-2.0 - 4.0 * s * dP + q * (d2P + dP * dP)) * e / R ** 2
            return sigma * psi, sigma * dpsi, sigma * d2psi

        family.append(TestFunction(sign, R, fn=fn, label=f"random:{seed}:{j}"))
    return family


@dataclass(frozen=True)
class BartaBounds:
    """Bounds from one test function.

    ``einf``/``esup`` leave out the outer ``band`` fraction of the grid where
    the quotient is a 0/0 limit; ``einf_full``/``esup_full`` use every
    interior node and are the values the inequalities are stated for.
    """

    einf: float
    esup: float
    einf_full: float
    esup_full: float
    r_inf: float
    r_sup: float
    band: float
    excluded_nodes: int
    N: int


def _quotient(ball, params, r, psi, dpsi, d2psi):
    n = ball.n
    out = np.empty(len(r) - 1)
    out[0] = -n * m_plus(d2psi[0], params) / psi[0]
    zeta = ball.warp.zeta(r[1:-1])
    op = m_plus(d2psi[1:-1], params) + (n - 1) * m_plus(dpsi[1:-1] * zeta, params)
    out[1:] = -op / psi[1:-1]
    return out, zeta


def barta_bounds(ball, params, psi, N=DEFAULT_N, band=BOUNDARY_BAND):
    """Essential inf and sup of ``-P+ psi / psi`` over the open ball.

    Analytic test functions are evaluated on ``N`` uniform steps; sampled
    ones on their own grid, which must span ``[0, R]``. Nodes where the
    second derivative is undefined, or where a finite-difference stencil
    straddles a switch of the ``m_plus`` branch, are left out as a null set.
    """
    if abs(psi.R - ball.R) > 1e-9 * ball.R:
        raise InvalidTestFunctionError(f"test function lives on radius {psi.R:g}, ball has {ball.R:g}")
    r, f, df, d2f = psi.on_grid(N)
    sigma = psi.sigma
    scale = float(np.max(np.abs(f)))
    if not np.all(sigma * f[:-1] > 0):
        i = int(np.nonzero(~(sigma * f[:-1] > 0))[0][0])
        raise InvalidTestFunctionError(f"test function is not {psi.sign} at interior node r = {r[i]:.6g}")
    if abs(f[-1]) > 1e-8 * scale:
        raise InvalidTestFunctionError("test function must vanish on the boundary")
    q, zeta = _quotient(ball, params, r, f, df, d2f)
    valid = np.isfinite(q)
    if psi.fd and not params.is_linear:
        b1 = d2f[1:-1] >= 0
        b2 = df[1:-1] * zeta >= 0
        straddle = np.zeros_like(valid)
        straddle[2:-1] = (b1[:-2] != b1[2:]) | (b2[:-2] != b2[2:])
        valid &= ~straddle
    Nn = len(r) - 1
    cut = int(math.floor((1.0 - band) * Nn))
    banded = valid.copy()
    banded[cut + 1:] = False
    if not banded.any():
        raise InvalidTestFunctionError("no admissible interior nodes")
    qb = np.where(banded, q, np.nan)
    qf = np.where(valid, q, np.nan)
    return BartaBounds(
        einf=float(np.nanmin(qb)),
        esup=float(np.nanmax(qb)),
        einf_full=float(np.nanmin(qf)),
        esup_full=float(np.nanmax(qf)),
        r_inf=float(r[int(np.nanargmin(qb))]),
        r_sup=float(r[int(np.nanargmax(qb))]),
        band=band,
        excluded_nodes=int(np.count_nonzero(~valid)),
        N=Nn,
    )


def maxmin_estimate(ball, params, family, N=DEFAULT_N):
    """Largest lower bound ``einf`` over a family of positive test functions."""
    family = list(family)
    if not family:
        raise ValueError("test function family is empty")
    return max(barta_bounds(ball, params, psi, N).einf_full for psi in family)


def minmax_estimate(ball, params, family, N=DEFAULT_N):
    """Smallest upper bound ``esup`` over a family of test functions."""
    family = list(family)
    if not family:
        raise ValueError("test function family is empty")
    return min(barta_bounds(ball, params, psi, N).esup_full for psi in family)


def sup_distance(psi, result):
    """Sup distance between ``psi`` and the eigenfunction of ``result`` after sup-normalizing both."""
    ef = result.eigenfunction
    r, f, _, _ = psi.on_grid(ef.N)
    if len(r) != len(ef.r):
        f = np.interp(ef.r, r, f)
    f = f / np.max(np.abs(f))
    g = ef.f / np.max(np.abs(ef.f))
    return float(np.max(np.abs(f - g)))
