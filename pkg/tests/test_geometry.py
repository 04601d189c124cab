import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pucci import (
    DomainError,
    GeodesicBall,
    InvalidProfileError,
    ProfileCurve,
    ResolutionError,
    SpaceFormWarp,
    TabulatedWarp,
    arc_length_reparametrize,
    builtin_profile,
    curvature_profile,
    is_admissible,
    load_profile_csv,
    load_warp_csv,
    space_form_ball,
)
from pucci.geometry import space_form_warp, zeta_and_model_zeta


def test_space_form_warp_examples():
    assert space_form_warp(0.0, 0.7) == (0.7, 1.0, 0.0)
    rho, drho, d2 = space_form_warp(1.0, math.pi / 2)
    assert rho == pytest.approx(1.0) and drho == pytest.approx(0.0, abs=1e-15) and d2 == pytest.approx(-1.0)
    rho, drho, _ = space_form_warp(-1.0, 1.0)
    assert rho == pytest.approx(1.1752011936438014) and drho == pytest.approx(1.5430806348152437)


def test_space_form_warp_domain():
    with pytest.raises(DomainError):
        space_form_warp(1.0, math.pi)
    with pytest.raises(DomainError):
        space_form_warp(4.0, np.array([0.5, 1.6]))
    with pytest.raises(DomainError):
        space_form_ball(2, 3.2, 1.0)
    space_form_ball(2, 2.0, 1.0)


def test_space_form_warp_continuous_in_K():
    r = np.linspace(0.01, 1.0, 50)
    flat = np.array(space_form_warp(0.0, r))
    for K in (1e-9, -1e-9):
        np.testing.assert_allclose(np.array(space_form_warp(K, r)), flat, atol=2e-9)


@pytest.mark.parametrize("K", [-1.0, -0.5, 0.0, 0.5, 1.0])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_space_form_curvature_is_constant(K, n):
    prof = curvature_profile(space_form_ball(n, 1.0, K))
    np.testing.assert_allclose(prof.K_rad, K, atol=1e-8)
    np.testing.assert_allclose(prof.Ric_rad, (n - 1) * K, atol=1e-8)
    np.testing.assert_allclose(prof.Ric_tan, (n - 1) * K, atol=1e-8)
    if n > 2:
        np.testing.assert_allclose(prof.K_tan, K, atol=1e-8)
    else:
        assert np.all(np.isnan(prof.K_tan))
    assert prof.sec_min == prof.sec_max == K


def _sampled(fn, R, m, method="pchip"):
    r = np.linspace(0.0, R, m + 1)
    return TabulatedWarp(r, fn(r), label="sampled", method=method)


@pytest.mark.parametrize("method,atol", [("spline", 1e-5), ("pchip", 0.2)])
def test_tabulated_hyperbolic_curvature(method, atol):
    ball = GeodesicBall(3, 1.5, _sampled(np.sinh, 1.5, 2000, method))
    prof = curvature_profile(ball)
    finite = np.isfinite(prof.K_rad)
    assert finite.sum() > 0.99 * len(finite)
    np.testing.assert_allclose(prof.Ric_rad[finite], -2.0, atol=atol)
    np.testing.assert_allclose(prof.Ric_tan[finite], -2.0, atol=atol)


def test_pchip_curvature_error_is_first_order():
    errs = []
    for m in (500, 1000, 2000):
        w = _sampled(np.sinh, 1.0, m)
        t = np.linspace(0.5, 1.0, 2001)
        rho, _, d2 = w.evaluate(t)
        errs.append(np.max(np.abs(d2 / rho - 1.0)))
    assert errs[0] / errs[1] > 1.7 and errs[1] / errs[2] > 1.7


def test_tabulated_too_coarse():
    ball = GeodesicBall(3, 1.0, _sampled(np.sinh, 1.0, 8))
    with pytest.raises(ResolutionError):
        curvature_profile(ball)


def test_tabulated_validation():
    r = np.linspace(0, 1, 20)
    with pytest.raises(ValueError):
        TabulatedWarp(r + 0.1, r)
    with pytest.raises(ValueError):
        TabulatedWarp(r, r + 0.5)
    with pytest.raises(DomainError):
        TabulatedWarp(r, np.where(r > 0.5, -1.0, r))
    w = TabulatedWarp(r, r)
    with pytest.raises(DomainError):
        w.evaluate(1.5)


def test_admissibility_examples():
    assert is_admissible(space_form_ball(2, 1.0, 1.0)) == (True, None)
    ok, where = is_admissible(space_form_ball(2, 2.0, 1.0))
    assert not ok and where == pytest.approx(math.pi / 2, abs=2.0 / 4096 + 1e-9)
    for R in (0.1, 1.0, 5.0):
        assert is_admissible(space_form_ball(3, R, -1.0))[0]


@pytest.mark.parametrize(
    "K,r,expected", [(0.0, 0.5, (2.0, 2.0)), (-1.0, 1.0, (1 / math.tanh(1), 1.0)), (1.0, 1.0, (1 / math.tan(1), 1.0))]
)
def test_zeta_examples(K, r, expected):
    ball = space_form_ball(2, 1.0, K)
    assert zeta_and_model_zeta(ball, 0.0, r) == pytest.approx(expected, rel=1e-14)


def test_zeta_domain():
    ball = space_form_ball(2, 1.0, 0.0)
    with pytest.raises(DomainError):
        zeta_and_model_zeta(ball, 0.0, 0.0)
    with pytest.raises(DomainError):
        zeta_and_model_zeta(space_form_ball(2, 3.0, -1.0), 1.0, 3.15)


def test_disk_profile_is_flat():
    L, warp = arc_length_reparametrize(builtin_profile("disk"))
    assert L == pytest.approx(1.0, abs=1e-14)
    t = np.linspace(0.01, 1.0, 200)
    rho, drho, d2 = warp.evaluate(t)
    np.testing.assert_allclose(rho, t, atol=1e-12)
    np.testing.assert_allclose(drho, 1.0, atol=1e-12)
    np.testing.assert_allclose(d2, 0.0, atol=1e-12)


def test_hemisphere_profile():
    L, warp = arc_length_reparametrize(builtin_profile("hemisphere"))
    assert L == pytest.approx(math.pi / 2, rel=1e-12)
    t = np.linspace(0.01, L, 300)
    rho, drho, d2 = warp.evaluate(t)
    np.testing.assert_allclose(rho, np.sin(t), atol=1e-10)
    np.testing.assert_allclose(drho, np.cos(t), atol=1e-10)
    np.testing.assert_allclose(d2, -np.sin(t), atol=1e-9)
    prof = curvature_profile(GeodesicBall(2, L, warp))
    np.testing.assert_allclose(prof.K_rad, 1.0, atol=1e-7)


def _trapezoid_richardson(speed, U, m):
    def trap(k):
        u = np.linspace(0.0, U, k + 1)
        s = speed(u)
        return U / k * (s.sum() - 0.5 * (s[0] + s[-1]))

    return (4 * trap(2 * m) - trap(m)) / 3


def test_paraboloid_length_against_trapezoid_oracle():
    curve = builtin_profile("paraboloid:1")
    L, _ = arc_length_reparametrize(curve)
    ref = _trapezoid_richardson(lambda u: np.sqrt(1 + 4 * u * u), 1.0, 20000)
    assert L == pytest.approx(ref, rel=1e-12)
    exact = 0.5 * math.sqrt(5) + 0.25 * math.asinh(2)
    assert L == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("spec", ["cap:0.5235987755982988", "cap:1.2", "paraboloid:0.25", "bump:1", "bump:0.5"])
def test_profile_invariants(spec):
    curve = builtin_profile(spec)
    L, warp = arc_length_reparametrize(curve)
    assert L >= curve.boundary_radius
    t = np.linspace(0.0, L, 5001)
    rho, drho, _ = warp.evaluate(t)
    assert np.all(np.abs(drho) <= 1 + 1e-10)
    assert rho[-1] == pytest.approx(curve.boundary_radius, rel=1e-10)
    assert rho[1] / t[1] == pytest.approx(1.0, rel=1e-4)


def test_cap_boundary_radius_and_length():
    angle = math.pi / 3
    curve = builtin_profile(f"cap:{angle!r}")
    assert curve.boundary_radius == pytest.approx(1.0)
    L, _ = arc_length_reparametrize(curve)
    assert L == pytest.approx(angle / math.sin(angle), rel=1e-12)


@given(st.floats(0.01, 3.0), st.floats(0.2, 2.0))
def test_graph_profiles_have_unit_slope_bound(c, R):
    curve = ProfileCurve.graph(lambda u: c * np.asarray(u) ** 4, lambda u: 4 * c * np.asarray(u) ** 3,
                               lambda u: 12 * c * np.asarray(u) ** 2, radius=R)
    L, warp = arc_length_reparametrize(curve)
    assert L >= R
    _, drho, _ = warp.evaluate(np.linspace(0, L, 400))
    assert np.all(np.abs(drho) <= 1 + 1e-10)


def test_invalid_profiles():
    cone = ProfileCurve.graph(lambda u: np.asarray(u), lambda u: np.ones_like(np.asarray(u, dtype=float)),
                              lambda u: np.zeros_like(np.asarray(u, dtype=float)))
    with pytest.raises(InvalidProfileError):
        arc_length_reparametrize(cone)
    # a sphere traced past its far pole crosses the axis
    s = ProfileCurve(np.sin, lambda u: 1 - np.cos(u), np.cos, np.sin, lambda u: -np.sin(u), np.cos, U=3.5)
    with pytest.raises(InvalidProfileError):
        arc_length_reparametrize(s)
    for bad in ("torus", "cap:4", "cap:x", "hemisphere:1"):
        with pytest.raises(InvalidProfileError):
            builtin_profile(bad)


@pytest.mark.parametrize(
    "warp",
    [SpaceFormWarp(-1.0), SpaceFormWarp(0.5), _sampled(np.sin, 1.0, 400), arc_length_reparametrize(builtin_profile("bump:1"))[1]],
)
def test_pole_limit(warp):
    r = 1e-4
    rho, drho, _ = warp.evaluate(r)
    assert rho / r == pytest.approx(1.0, abs=1e-5)
    assert drho == pytest.approx(1.0, abs=1e-4)


def test_tabulated_zeta_below_first_sample():
    w = _sampled(np.sinh, 1.0, 100, "spline")
    assert w.zeta(0.001) == pytest.approx(1000.0)
    assert w.zeta(0.5) == pytest.approx(1 / math.tanh(0.5), rel=1e-6)
    assert _sampled(np.sinh, 1.0, 100).zeta(0.5) == pytest.approx(1 / math.tanh(0.5), rel=1e-4)


def test_warp_csv_round_trip(tmp_path):
    r = np.linspace(0, 1.0, 201)
    path = tmp_path / "w.csv"
    path.write_text("r,rho\n" + "".join(f"{a!r},{b!r}\n" for a, b in zip(r.tolist(), np.sinh(r).tolist())))
    w = load_warp_csv(path)
    assert w.evaluate(0.5)[0] == pytest.approx(math.sinh(0.5), rel=1e-8)
    bad = tmp_path / "bad.csv"
    bad.write_text("radius,rho\n0,0\n")
    with pytest.raises(ValueError):
        load_warp_csv(bad)


def test_profile_csv_hemisphere(tmp_path):
    u = np.linspace(0, math.pi / 2, 801)
    path = tmp_path / "hemisphere.csv"
    path.write_text("u,x,z\n" + "".join(f"{a!r},{b!r},{c!r}\n" for a, b, c in zip(u.tolist(), np.sin(u).tolist(), (1 - np.cos(u)).tolist())))
    L, warp = arc_length_reparametrize(load_profile_csv(path))
    assert L == pytest.approx(math.pi / 2, rel=1e-9)
    assert warp.evaluate(1.0)[0] == pytest.approx(math.sin(1.0), rel=1e-9)
    bad = tmp_path / "bad.csv"
    bad.write_text("u,x,z\n0,0.1,0\n1,1,0\n2,2,0\n3,3,0\n")
    with pytest.raises(InvalidProfileError):
        load_profile_csv(bad)
