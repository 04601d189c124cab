import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pucci import (
    InvalidTestFunctionError,
    PucciParams,
    TestFunction,
    barta_bounds,
    builtin_test_function,
    load_test_function_csv,
    maxmin_estimate,
    minmax_estimate,
    principal_half_eigenvalue,
    random_smooth_family,
    space_form_ball,
)
from pucci.barta import sup_distance

LAPLACE = PucciParams(1.0, 1.0)
J01_SQ = 5.783185962946784


@pytest.fixture(scope="module")
def disk_pucci():
    ball = space_form_ball(2, 1.0, 0.0)
    p = PucciParams(1.0, 2.0)
    return ball, p, {s: principal_half_eigenvalue(ball, p, s) for s in ("plus", "minus")}


@pytest.mark.parametrize("sign", ["plus", "minus"])
def test_eigenfunction_gives_equality(disk_pucci, sign):
    ball, p, sols = disk_pucci
    res = sols[sign]
    b = barta_bounds(ball, p, TestFunction.from_eigenfunction(res))
    assert b.esup - b.einf < 1e-6 * res.lam
    assert b.einf_full == pytest.approx(res.lam, rel=1e-6)
    assert b.esup_full == pytest.approx(res.lam, rel=1e-6)


def test_cosine_straddles_and_matches_dense_oracle():
    ball = space_form_ball(2, 1.0, 0.0)
    N = 2000
    b = barta_bounds(ball, LAPLACE, builtin_test_function("cos", 1.0), N=N)
    assert b.einf <= J01_SQ <= b.esup
    k = math.pi / 2
    # dense-grid oracle; at the pole the quotient is 2 k^2
    r = np.arange(0, 10 * N + 1) / (10 * N)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(r > 0, k * k + k * np.tan(k * r) / r, 2 * k * k)
    inner = r <= math.floor(0.99 * N) / N
    assert b.einf == pytest.approx(q[inner].min(), rel=1e-9)
    assert b.esup == pytest.approx(q[inner].max(), rel=1e-3)
    # the quotient increases outward, so its band maximum sits at the band edge
    assert b.r_sup == pytest.approx(math.floor(0.99 * N) / N)


def test_quadratic_closed_form():
    ball = space_form_ball(3, 1.0, 0.0)
    b = barta_bounds(ball, LAPLACE, builtin_test_function("quadratic", 1.0), N=1000)
    assert b.einf == pytest.approx(6.0, rel=1e-12)
    assert b.r_inf == 0.0
    r_edge = math.floor(0.99 * 1000) / 1000
    assert b.esup == pytest.approx(6.0 / (1 - r_edge ** 2), rel=1e-9)
    assert b.esup_full == pytest.approx(6.0 / (1 - 0.999 ** 2), rel=1e-9)
    assert b.esup_full > b.esup


def test_maxmin_family():
    ball = space_form_ball(2, 1.0, 0.0)
    fam = [builtin_test_function("cos", 1.0), builtin_test_function("quadratic", 1.0)]
    assert maxmin_estimate(ball, LAPLACE, fam) <= 5.78319 + 1e-6
    assert minmax_estimate(ball, LAPLACE, fam) >= J01_SQ
    with pytest.raises(ValueError):
        maxmin_estimate(ball, LAPLACE, [])
    with pytest.raises(ValueError):
        minmax_estimate(ball, LAPLACE, [])


def test_maxmin_of_eigenfunction(disk_pucci):
    ball, p, sols = disk_pucci
    est = maxmin_estimate(ball, p, [TestFunction.from_eigenfunction(sols["plus"])])
    assert est == pytest.approx(sols["plus"].lam, rel=1e-6)


@pytest.mark.parametrize("sign", ["plus", "minus"])
@pytest.mark.parametrize("K", [-1.0, 0.0, 0.5])
def test_random_family_sandwich(sign, K):
    ball = space_form_ball(3, 1.0, K)
    p = PucciParams(0.5, 4.0)
    lam = principal_half_eigenvalue(ball, p, sign).lam
    for psi in random_smooth_family(1.0, 5, seed=11, sign=sign):
        b = barta_bounds(ball, p, psi, N=4000)
        assert b.einf_full <= lam * (1 + 1e-6) and lam <= b.esup_full * (1 + 1e-6)


@given(st.integers(0, 2 ** 31), st.floats(0.3, 2.0))
def test_random_family_sandwich_property(seed, R):
    ball = space_form_ball(2, R, -1.0)
    p = PucciParams(1.0, 2.0)
    lam = principal_half_eigenvalue(ball, p, "plus", N=2000).lam
    for psi in random_smooth_family(R, 2, seed=seed):
        b = barta_bounds(ball, p, psi, N=2000)
        assert b.einf_full <= lam * (1 + 1e-6) and lam <= b.esup_full * (1 + 1e-6)


def test_near_equality_implies_close_eigenfunction(disk_pucci):
    ball, p, sols = disk_pucci
    res = sols["plus"]
    psi = TestFunction.from_eigenfunction(res).scaled(3.0)
    b = barta_bounds(ball, p, psi)
    assert b.esup - b.einf < 1e-6 * res.lam
    assert sup_distance(psi, res) < 1e-4


def test_csv_round_trip(tmp_path, disk_pucci):
    ball, p, sols = disk_pucci
    res = sols["minus"]
    ef = res.eigenfunction
    path = tmp_path / "ef.csv"
    path.write_text("r,phi,dphi\n" + "".join(f"{a!r},{b!r},{c!r}\n" for a, b, c in zip(ef.r.tolist(), ef.f.tolist(), ef.df.tolist())))
    b = barta_bounds(ball, p, load_test_function_csv(path, "minus"))
    assert b.einf == pytest.approx(res.lam, rel=1e-6)
    assert b.esup == pytest.approx(res.lam, rel=1e-6)
    values_only = tmp_path / "psi.csv"
    values_only.write_text("r,psi\n" + "".join(f"{a!r},{b!r}\n" for a, b in zip(ef.r.tolist(), ef.f.tolist())))
    b = barta_bounds(ball, p, load_test_function_csv(values_only, "minus"))
    assert b.einf == pytest.approx(res.lam, rel=1e-6)
    assert b.esup == pytest.approx(res.lam, rel=1e-6)


def test_invalid_test_functions(tmp_path):
    ball = space_form_ball(2, 1.0, 0.0)
    r = np.linspace(0, 1, 101)
    with pytest.raises(InvalidTestFunctionError):
        barta_bounds(ball, LAPLACE, TestFunction.from_values(r, np.cos(3 * r) * (1 - r)))
    with pytest.raises(InvalidTestFunctionError):
        barta_bounds(ball, LAPLACE, TestFunction.from_values(r, 2 - r))
    with pytest.raises(InvalidTestFunctionError):
        barta_bounds(ball, LAPLACE, builtin_test_function("cos", 1.0, sign="minus").scaled(-1.0, "minus"))
    with pytest.raises(InvalidTestFunctionError):
        barta_bounds(space_form_ball(2, 2.0, 0.0), LAPLACE, builtin_test_function("cos", 1.0))
    for bad in ("sin", "bump:-1", "bump:x", "cos:2"):
        with pytest.raises(InvalidTestFunctionError):
            builtin_test_function(bad, 1.0)
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0,1\n")
    with pytest.raises(InvalidTestFunctionError):
        load_test_function_csv(path)


def test_constant_region_contributes_zero():
    ball = space_form_ball(2, 1.0, 0.0)
    r = np.linspace(0, 1, 1001)
    psi = np.where(r < 0.5, 1.0, np.cos(math.pi * (r - 0.5)))
    dpsi = np.where(r < 0.5, 0.0, -math.pi * np.sin(math.pi * (r - 0.5)))
    b = barta_bounds(ball, LAPLACE, TestFunction.from_values(r, psi, dpsi))
    assert b.einf == pytest.approx(0.0, abs=1e-9)


def test_gaussian_bump_vanishes_on_boundary():
    psi = builtin_test_function("bump:0.5", 2.0)
    f, df, _ = psi.fn(np.array([0.0, 2.0]))
    assert f[1] == pytest.approx(0.0, abs=1e-15) and f[0] > 0 and df[0] == 0.0
