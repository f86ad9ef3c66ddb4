import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar
from scipy.special import lambertw

from twolevel.lifetime import (
    fixed_point_residual,
    g1,
    g2,
    g_joint,
    g_joint_argmax,
    lifetime_constants,
    lorentzian_profile,
    normalization,
    solve_fixed_point,
)

# -W_{-1}(-e^-2) and -W_0(-e^-2), mpmath at 40 digits
PI_STAR = 3.146193220620582585
X_SMALL = 0.1585943395630393622
T_S_NOMINAL = 27.1e-9


def test_g1_examples():
    assert g1(1.0, 0.0) == 1.0
    assert g1(1.0, 2.0) == pytest.approx(math.exp(-2), rel=1e-15)
    assert g1(1 / T_S_NOMINAL, T_S_NOMINAL) == pytest.approx(1 / (T_S_NOMINAL * math.e), rel=1e-14)
    with pytest.raises(ValueError):
        g1(0.0, 1.0)
    with pytest.raises(ValueError):
        g1(1.0, -1.0)


def test_g2_examples():
    assert g2(1.0, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert g2(2.0, 0.0) == 2.0
    with pytest.raises(ValueError):
        g2(-1.0, 1.0)


@pytest.mark.parametrize("t_s", [1.0, T_S_NOMINAL, 3e-3])
def test_g2_argmax_over_rate(t_s):
    res = minimize_scalar(lambda lg: -g2(math.exp(lg), t_s), bracket=(math.log(0.1 / t_s), math.log(10 / t_s)),
                          method="golden", tol=1e-10)
    assert math.exp(res.x) == pytest.approx(1 / t_s, rel=1e-6)


def test_g_joint_examples():
    assert g_joint(1.0, 1.0) == pytest.approx(math.exp(-2), rel=1e-15)
    assert g_joint(T_S_NOMINAL, T_S_NOMINAL) == pytest.approx(184277560540587.2631, rel=1e-13)
    assert g_joint(2.0, 0.7) == g_joint(0.7, 2.0)
    for bad in [(0.0, 1.0), (1.0, -1.0)]:
        with pytest.raises(ValueError):
            g_joint(*bad)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_g_joint_is_product(t_l, t_s):
    assume_ok = (t_l / t_s + t_s / t_l) < 700
    if not assume_ok:
        return
    prod = g1(1 / t_s, t_l) * g2(1 / t_l, t_s)
    assert g_joint(t_l, t_s) == pytest.approx(prod, rel=1e-12)
    assert g_joint(t_l, t_s) == g_joint(t_s, t_l)


@pytest.mark.parametrize("t_s", [1.0, T_S_NOMINAL])
def test_g_joint_maximiser(t_s):
    grid = np.linspace(1e-3 * t_s, 5 * t_s, 200001)
    vals = np.array([g_joint(t, t_s) for t in grid])
    best = grid[np.argmax(vals)]
    star = g_joint_argmax(t_s)
    assert star == pytest.approx(best, abs=2 * (grid[1] - grid[0]))
    # stationarity of log g in t_l
    h = 1e-6 * t_s
    dlog = (math.log(g_joint(star + h, t_s)) - math.log(g_joint(star - h, t_s))) / (2 * h)
    assert abs(dlog * t_s) < 1e-6


@pytest.mark.parametrize("density", [g1, g2])
@pytest.mark.parametrize("rate", [1.0, 1 / T_S_NOMINAL, 37.0])
def test_normalisation(density, rate):
    value, err = normalization(density, rate)
    assert value == pytest.approx(1.0, abs=1e-9)
    assert err < 1e-9


def test_fixed_point_roots():
    roots = solve_fixed_point(1e-12)
    assert roots.large == pytest.approx(PI_STAR, rel=1e-14)
    assert roots.small == pytest.approx(X_SMALL, rel=1e-14)
    assert roots.large == pytest.approx(3.1462, abs=5e-5)
    assert roots.small == pytest.approx(0.15859, abs=5e-6)
    assert roots.residual_large <= 1e-12 and roots.residual_small <= 1e-12
    assert fixed_point_residual(roots.large) == roots.residual_large


def test_fixed_point_matches_lambert_w():
    roots = solve_fixed_point()
    assert roots.large == pytest.approx(-lambertw(-math.exp(-2), -1).real, rel=1e-14)
    assert roots.small == pytest.approx(-lambertw(-math.exp(-2), 0).real, rel=1e-14)


def test_fixed_point_brackets():
    f = lambda x: x - math.exp(x - 2)  # noqa: E731
    assert f(0.1) * f(0.2) < 0
    assert f(3.1) * f(3.2) < 0


def test_pi_star_offset():
    ps = solve_fixed_point().large
    assert 0.004 <= ps - math.pi <= 0.005


@pytest.mark.parametrize("tol", [0.0, 1e-5, -1.0])
def test_fixed_point_tolerance_domain(tol):
    with pytest.raises(ValueError):
        solve_fixed_point(tol)


def test_lifetime_constants_nominal_values():
    m = lifetime_constants(T_S_NOMINAL)
    assert m.gamma_lg == pytest.approx(5.796e6, rel=2e-3)
    assert m.gamma_l == pytest.approx(6.101e6, rel=2e-3)
    assert m.gamma_s == pytest.approx(3.69e7, rel=5e-3)
    assert m.ratio_19 == pytest.approx(19 / PI_STAR, rel=1e-14)
    assert m.ratio_19_pi == pytest.approx(6.048, abs=5e-4)
    assert m.t_l1 == pytest.approx(T_S_NOMINAL / PI_STAR, rel=1e-14)
    assert m.t_l2 == pytest.approx(T_S_NOMINAL * 20 / PI_STAR, rel=1e-14)
    assert m.t_l2_from_small_root == pytest.approx(T_S_NOMINAL / X_SMALL, rel=1e-14)
    assert m.gamma_lg < m.gamma_l < m.gamma_s
    assert 0 < m.x_small < 1 < m.pi_star
    assert m.residual_pi_star <= 1e-12 and m.residual_x_small <= 1e-12
    # the literal-pi variants reproduce the printed figures to four digits
    assert m.gamma_lg_pi == pytest.approx(5.796e6, rel=1e-4)
    assert m.gamma_l_pi == pytest.approx(6.101e6, rel=1e-4)
    d = m.to_dict()
    assert d["labels"]["gamma_l"] == "pi_star / (19 t_s)"
    with pytest.raises(ValueError):
        lifetime_constants(0.0)


def test_lorentzian():
    assert lorentzian_profile(0.0, 3.0) == 1.0
    assert lorentzian_profile(1.5, 3.0) == 0.5
    assert lorentzian_profile(-1.5, 3.0) == 0.5
    m = lifetime_constants(T_S_NOMINAL)
    assert m.gamma_l == pytest.approx(6.1e6, rel=2e-3)
    assert lorentzian_profile(m.gamma_l / 2, m.gamma_l) == 0.5
    with pytest.raises(ValueError):
        lorentzian_profile(0.0, 0.0)
