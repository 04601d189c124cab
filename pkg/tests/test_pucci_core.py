import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pucci import DomainError, GeodesicBall, PucciParams, RadialFunction, SpaceFormWarp, space_form_ball
from pucci.pucci_core import m_minus, m_plus, m_plus_inv, m_plus_spectrum, pucci_at_origin, pucci_radial

reals = st.floats(-1e6, 1e6, allow_nan=False)
weights = st.tuples(st.floats(1e-3, 1e3), st.floats(1.0, 1e3)).map(lambda t: PucciParams(t[0], t[0] * t[1]))


def test_params_validation():
    with pytest.raises(ValueError):
        PucciParams(2.0, 1.0)
    with pytest.raises(ValueError):
        PucciParams(0.0, 1.0)
    with pytest.raises(ValueError):
        PucciParams(1.0, math.inf)
    assert PucciParams(1.0, 1.0).is_linear
    assert not PucciParams(1.0, 2.0).is_linear
    p = PucciParams(0.5, 4.0).scaled(2.0)
    assert (p.a, p.A) == (1.0, 8.0)


@pytest.mark.parametrize("x,a,A,expected", [(3, 1, 1, 3), (-2, 0.5, 2, -1), (0, 0.3, 7, 0)])
def test_m_plus_examples(x, a, A, expected):
    assert m_plus(x, PucciParams(a, A)) == expected


@pytest.mark.parametrize("s,a,A,expected", [(4, 1, 2, 2), (-1, 0.5, 2, -2), (0, 1, 2, 0)])
def test_m_plus_inv_examples(s, a, A, expected):
    assert m_plus_inv(s, PucciParams(a, A)) == expected


def test_m_plus_inv_round_trip_exact():
    p = PucciParams(0.5, 2.0)
    for s in (-1.0, 0.0, 1.0):
        assert m_plus(m_plus_inv(s, p), p) == s


@pytest.mark.parametrize(
    "mu,a,A,expected", [([3, -1], 1, 2, 5), ([], 1, 2, 0), ([-1, -1, -1], 0.5, 4, -1.5)]
)
def test_spectrum_examples(mu, a, A, expected):
    assert m_plus_spectrum(mu, PucciParams(a, A)) == pytest.approx(expected, abs=0)


def test_array_evaluation():
    p = PucciParams(1.0, 3.0)
    x = np.array([-2.0, 0.0, 2.0])
    np.testing.assert_array_equal(m_plus(x, p), [-2.0, 0.0, 6.0])
    np.testing.assert_array_equal(m_minus(x, p), [-6.0, 0.0, 2.0])
    np.testing.assert_array_equal(m_plus_inv(m_plus(x, p), p), x)


@given(reals, reals, weights)
def test_m_plus_monotone(x, y, p):
    lo, hi = min(x, y), max(x, y)
    assert m_plus(lo, p) <= m_plus(hi, p)


@given(reals, st.floats(1e-3, 1e3), weights)
def test_homogeneity_and_parameter_scaling(x, c, p):
    assert m_plus(c * x, p) == pytest.approx(c * m_plus(x, p), rel=1e-12, abs=1e-300)
    assert m_plus(x, p.scaled(c)) == pytest.approx(c * m_plus(x, p), rel=1e-12, abs=1e-300)


@given(reals, weights)
def test_envelope_and_reflection(x, p):
    assert m_plus(x, p) == max(p.a * x, p.A * x)
    assert m_minus(x, p) == -m_plus(-x, p)
    assert m_plus_inv(m_plus(x, p), p) == pytest.approx(x, rel=1e-14, abs=1e-300)


def test_pucci_radial_examples():
    p = PucciParams(1.0, 2.0)
    e3 = space_form_ball(3, 2.0, 0.0)
    for r in (0.1, 0.5, 1.3):
        # f = 1 - r^2: f'' = -2, f' rho'/rho = -2
        assert pucci_radial(e3, p, -2.0, -2.0 * r, r) == pytest.approx(-6.0)
    e2 = space_form_ball(2, 2.0, 0.0)
    assert pucci_radial(e2, p, 1.0, 1.0, 1.0) == pytest.approx(4.0)
    assert pucci_radial(e2, p, 0.0, 0.0, 0.7) == 0.0


def test_pucci_radial_rejects_pole():
    with pytest.raises(DomainError):
        pucci_radial(space_form_ball(2, 1.0, 0.0), PucciParams(1, 2), 1.0, 0.0, 0.0)


@pytest.mark.parametrize("a,A,d2,n,expected", [(1, 1, -1, 3, -3), (1, 2, -1, 3, -3), (1, 2, 1, 3, 6)])
def test_pucci_at_origin(a, A, d2, n, expected):
    assert pucci_at_origin(PucciParams(a, A), d2, n) == expected


@given(
    st.floats(-10, 10), st.floats(-10, 10), st.floats(0.05, 1.0),
    st.sampled_from([-1.0, -0.3, 0.0, 0.4, 1.0]), st.integers(2, 6),
)
def test_laplace_reduction_and_envelope(d2, d1, r, K, n):
    ball = space_form_ball(n, 1.5, K)
    rho, drho, _ = SpaceFormWarp(K).evaluate(r)
    lap = d2 + (n - 1) * drho / rho * d1
    assert pucci_radial(ball, PucciParams(1, 1), d2, d1, r) == pytest.approx(lap, rel=1e-14, abs=1e-12)
    p = PucciParams(0.5, 3.0)
    v = pucci_radial(ball, p, d2, d1, r)
    assert v >= pucci_radial(ball, PucciParams(0.5, 0.5), d2, d1, r) - 1e-12
    assert v >= pucci_radial(ball, PucciParams(3.0, 3.0), d2, d1, r) - 1e-12
    c = 2.5
    assert pucci_radial(ball, p, c * d2, c * d1, r) == pytest.approx(c * v, rel=1e-12, abs=1e-12)


def test_radial_function_validation():
    r = np.linspace(0, 1, 11)
    f = 1 - r ** 2
    rf = RadialFunction(r, f, -2 * r, np.full_like(r, -2.0))
    assert rf.R == 1.0 and rf.N == 10 and rf.h == pytest.approx(0.1)
    with pytest.raises(ValueError):
        RadialFunction(r ** 2, f, -2 * r, -2 * np.ones_like(r))
    with pytest.raises(ValueError):
        RadialFunction(r, f[:-1], -2 * r, -2 * np.ones_like(r))
    with pytest.raises(ValueError):
        RadialFunction(r + 0.1, f, -2 * r, -2 * np.ones_like(r))
    bad = f.copy()
    bad[3] = np.nan
    with pytest.raises(ValueError):
        RadialFunction(r, bad, -2 * r, -2 * np.ones_like(r))


def test_ball_accepts_warp_objects():
    ball = GeodesicBall(4, 0.5, SpaceFormWarp(2.0))
    assert ball.label == "spaceform:2"
