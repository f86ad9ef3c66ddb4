import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twolevel.dynamics import (
    DimensionlessPoint,
    DriveKind,
    DriveSpec,
    field_waveform,
    p1,
    p1_detuning_derivative,
    p1_dimensionless,
    p1_envelope,
    p2,
    p2_detuning_derivative,
    p2_dimensionless,
)

# mpmath at 40 digits
SIN2_1 = 0.7080734182735711935
P1_DIM_1_2 = 0.4878407820314618590
P2_DIM_2_HALF = 0.9874759904650522180

omegas = st.floats(0.0, 1e6)
detunings = st.floats(-1e6, 1e6)
taus = st.floats(0.0, 1e3)


def test_p1_examples():
    assert p1(1.0, 0.0, math.pi / 2) == 1.0
    assert p1(1.0, 2.0, math.pi / (2 * math.sqrt(2))) == pytest.approx(0.5, abs=1e-15)
    assert p1(0.0, 0.0, 5.0) == 0.0


@given(omegas, detunings)
def test_p1_starts_at_zero(w, d):
    assert p1(w, d, 0.0) == 0.0


def test_p1_envelope_examples():
    assert p1_envelope(1.0, 0.0) == 1.0
    assert p1_envelope(1.0, 2.0) == 0.5
    assert p1_envelope(1.0, 20.0) == pytest.approx(4 / 404, rel=1e-15)
    with pytest.raises(ValueError):
        p1_envelope(0.0, 0.0)


def test_p2_examples():
    assert p2(1.0, 1.0, math.pi) == pytest.approx(0.0, abs=1e-30)
    assert p2(1.0, 0.0, math.pi / 2) == 1.0
    assert p2(1.0, 1e-12, math.pi / 2) == 1.0
    assert p2(1.0, 1.0, math.pi / 2) == pytest.approx(SIN2_1, rel=1e-15)


def test_dimensionless_examples():
    assert p1_dimensionless(DimensionlessPoint(math.pi / 2, 0.0)) == 1.0
    assert p1_dimensionless(0.0, 3.3) == 0.0
    assert p1_dimensionless(1.0, 2.0) == pytest.approx(P1_DIM_1_2, rel=1e-14)
    w = 3.7e8
    assert p1(w, 2.0 * w, 1.0 / w) == pytest.approx(P1_DIM_1_2, rel=1e-12)
    assert p2_dimensionless(math.pi, 1.0) == pytest.approx(0.0, abs=1e-30)
    assert p2_dimensionless(math.pi / 2, 0.0) == 1.0
    assert p2_dimensionless(math.pi / 2, 1e-12) == 1.0
    assert p2_dimensionless(2.0, 0.5) == pytest.approx(P2_DIM_2_HALF, rel=1e-14)


@pytest.mark.parametrize("fn", [p1, p2])
@pytest.mark.parametrize("args", [(-1.0, 0.0, 1.0), (1.0, 0.0, -1.0), (math.nan, 0.0, 1.0),
                                  (1.0, math.inf, 1.0)])
def test_domain_errors(fn, args):
    with pytest.raises(ValueError):
        fn(*args)


def test_array_and_scalar_paths_agree_bitwise():
    rng = np.random.default_rng(1)
    w = rng.uniform(0, 10, 500)
    d = rng.uniform(-10, 10, 500)
    t = rng.uniform(0, 10, 500)
    for fn in (p1, p2):
        arr = fn(w, d, t)
        assert isinstance(arr, np.ndarray) and arr.shape == (500,)
        for k in range(0, 500, 37):
            assert fn(w[k], d[k], t[k]) == arr[k]
    assert isinstance(p1(1.0, 0.5, 0.3), float)


@given(omegas, detunings, taus)
def test_bounded(w, d, t):
    for fn in (p1, p2):
        v = fn(w, d, t)
        assert 0.0 <= v <= 1.0


@given(omegas, detunings, taus)
def test_detuning_symmetry_exact(w, d, t):
    assert p1(w, d, t) == p1(w, -d, t)
    assert p2(w, d, t) == p2(w, -d, t)


@given(st.floats(1e-3, 1e3), st.floats(-1e3, 1e3), taus)
def test_envelope_bounds_p1(w, d, t):
    assert p1(w, d, t) <= p1_envelope(w, d) * (1 + 1e-15)


@given(st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
def test_envelope_attained(w, d):
    t_star = math.pi / math.sqrt(4 * w * w + d * d)
    assert p1(w, d, t_star) == pytest.approx(p1_envelope(w, d), rel=1e-13)


@given(st.floats(0.01, 10.0), st.floats(0.1, 10.0), st.floats(0.0, 50.0))
def test_p2_periodicity(ratio, d, phase):
    # W/D bounded and D*tau <= 50 keep argument rounding below 1e-12
    w = ratio * d
    tau = phase / d
    assert p2(w, d, tau + 2 * math.pi / d) == pytest.approx(p2(w, d, tau), abs=1e-12)


@pytest.mark.parametrize("ratio,tol", [(1e-4, 1e-6), (1e-6, 1e-10)])
def test_resonant_agreement(ratio, tol):
    # |p2 - sin^2(X)| ~ X^3 ratio^2 / 6; X <= 2 pi keeps it under tol
    x = np.linspace(0.0, 2 * math.pi, 20001)
    w = 1.0
    err = np.abs(p2(w, ratio * w, x / w) - np.sin(x) ** 2)
    assert err.max() <= tol


def test_limit_branch_equals_p1_at_resonance():
    t = np.linspace(0, 20, 4001)
    assert np.allclose(p2(1.3, 0.0, t), p1(1.3, 0.0, t), rtol=0, atol=1e-15)
    assert np.allclose(p2(1.3, 1e-12, t), p1(1.3, 0.0, t), rtol=0, atol=1e-15)


def test_limit_guard_is_continuous():
    w, t = 1.0, 1.0
    below = p2(w, 0.99e-8, t)
    above = p2(w, 1.01e-8, t)
    assert abs(below - above) < 1e-15


@given(st.floats(0.0, 100.0), st.floats(-20.0, 20.0), st.floats(1e3, 1e12))
def test_dimensionless_consistency(x, y, w):
    a1 = p1_dimensionless(x, y)
    b1 = p1(w, y * w, x / w)
    assert math.isclose(a1, b1, rel_tol=1e-12, abs_tol=1e-12)
    a2 = p2_dimensionless(x, y)
    b2 = p2(w, y * w, x / w)
    assert math.isclose(a2, b2, rel_tol=1e-12, abs_tol=1e-12)


def _central(fn, w, d, t, h=1e-6):
    return (fn(w, d + h, t) - fn(w, d - h, t)) / (2 * h)


@pytest.mark.parametrize("w,d,t", [(1.0, 0.3, 2.0), (1.0, 2.0, 10.0), (2.0, -1.5, 0.7), (1.0, 5e-6, 10.0),
                                   (0.5, 3.0, 4.0)])
def test_detuning_derivatives_match_finite_differences(w, d, t):
    assert p1_detuning_derivative(w, d, t) == pytest.approx(_central(p1, w, d, t), abs=1e-7)
    assert p2_detuning_derivative(w, d, t) == pytest.approx(_central(p2, w, d, t), abs=1e-6)


def test_drive_spec():
    mono = DriveSpec(DriveKind.MONOCHROMATIC, 1.0, 0.5, carrier=10.0)
    bi = DriveSpec("bichromatic", 1.0, 1.0, carrier=10.0)
    assert mono.frequencies == (10.5,)
    assert bi.frequencies == (9.0, 11.0)
    assert bi.kind is DriveKind.BICHROMATIC_SYMMETRIC
    assert mono.probability(2.0) == p1(1.0, 0.5, 2.0)
    assert bi.probability(2.0) == p2(1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        DriveSpec(DriveKind.MONOCHROMATIC, -1.0)


def test_field_waveform():
    mono = DriveSpec(DriveKind.MONOCHROMATIC, 1.0, 0.0, carrier=3.0)
    bi = DriveSpec(DriveKind.BICHROMATIC_SYMMETRIC, 1.0, 1.0, carrier=10.0)
    assert field_waveform(mono, 2.5, 0.0) == 2.5
    assert field_waveform(bi, 2.5, 0.0) == 5.0
    assert field_waveform(bi, 1.0, math.pi) == pytest.approx(-2.0, abs=1e-14)
    with pytest.raises(ValueError):
        field_waveform(DriveSpec(DriveKind.MONOCHROMATIC, 1.0), 1.0, 0.0)
