import math

import numpy as np
import pytest

from twolevel.dynamics import p1, p2
from twolevel.oracle import (
    GROUND,
    IntegrationError,
    OdeConfig,
    PopulationTrace,
    compare_traces,
    integrate_bichromatic,
    integrate_damped,
    integrate_rwa_monochromatic,
)
from twolevel.validation import run_bichromatic, run_damped, run_rwa, rwa_cases

T_S = 27.1e-9


def test_resonant_flopping():
    tr = integrate_rwa_monochromatic(1.0, 0.0, math.pi)
    assert tr.times[0] == 0.0 and tr.population[0] == 0.0
    assert compare_traces(lambda t: np.sin(t) ** 2, tr).max_abs_error <= 1e-9


def test_detuned_matches_p1():
    tr = integrate_rwa_monochromatic(1.0, 2.0, 20.0, n_samples=4001)
    assert compare_traces(lambda t: p1(1.0, 2.0, t), tr).max_abs_error <= 1e-6


def test_p1_vs_rwa_three():
    tr = integrate_rwa_monochromatic(1.0, 3.0, 20.0, n_samples=1000)
    assert compare_traces(lambda t: p1(1.0, 3.0, t), tr).max_abs_error <= 1e-6


def test_norm_conservation():
    assert integrate_rwa_monochromatic(1.0, 0.7, 100.0).norm_drift() <= 1e-9
    assert integrate_bichromatic(1.0, 1.0, 100.0).norm_drift() <= 1e-9


@pytest.mark.parametrize("w,d", [(1.0, 0.0), (1.0, 2.0), (3.0, 1.0)])
def test_unitarity_over_100_rabi_periods(w, d):
    cfg = OdeConfig()
    period = math.pi / w
    tr = integrate_rwa_monochromatic(w, d, 100 * period, cfg)
    assert tr.norm_drift() <= 10 * cfg.rel_tol


def test_convergence_with_tolerance():
    errs = []
    for k in range(6):
        rt = 1e-5 / 2**k
        cfg = OdeConfig(rel_tol=rt, abs_tol=rt * 1e-2, max_step=1e3)
        tr = integrate_rwa_monochromatic(1.0, 3.0, 20.0, cfg, n_samples=1000)
        errs.append(compare_traces(lambda t: p1(1.0, 3.0, t), tr).max_abs_error)
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_refinement_invariance():
    cfg = OdeConfig(rel_tol=1e-6, abs_tol=1e-8)
    e = []
    for n in (1000, 2000):
        tr = integrate_rwa_monochromatic(1.0, 3.0, 20.0, cfg, n_samples=n)
        e.append(compare_traces(lambda t: p1(1.0, 3.0, t), tr).max_abs_error)
    assert abs(e[1] - e[0]) <= 0.1 * e[0]


def test_bichromatic_small_detuning_approaches_resonance():
    t = np.linspace(0, 2 * math.pi, 801)
    tr = integrate_bichromatic(1.0, 1e-4, t[-1], times=t)
    assert np.max(np.abs(tr.population - np.sin(t) ** 2)) <= 1e-6


def test_bichromatic_shares_zeros_of_p2():
    zeros = np.arange(1, 7) * math.pi
    tr = integrate_bichromatic(1.0, 1.0, zeros[-1], times=zeros)
    assert np.max(tr.population) <= 1e-6
    assert np.max(p2(1.0, 1.0, zeros)) <= 1e-30


def test_bichromatic_validity_map_is_reported():
    # W/D = 5: the k = 1 model reproduces the closed form, k = 2 does not
    exact = integrate_bichromatic(5.0, 1.0, 20.0)
    full = integrate_bichromatic(5.0, 1.0, 20.0, coupling_factor=2.0)
    e1 = compare_traces(lambda t: p2(5.0, 1.0, t), exact).max_abs_error
    e2 = compare_traces(lambda t: p2(5.0, 1.0, t), full).max_abs_error
    assert e1 <= 1e-6
    assert e2 > 0.5
    rep = run_bichromatic(coupling_factor=2.0)
    assert not rep["passed"] and len(rep["cases"]) == 5
    assert all(c["max_population_at_zeros"] <= 1e-6 for c in rep["cases"])


def test_damped_free_decay():
    gamma = 1 / T_S
    tr = integrate_damped(0.0, 0.0, gamma, 2 * T_S, times=[0.0, T_S, 2 * T_S])
    assert tr.population[1] == pytest.approx(math.exp(-1), rel=1e-8)
    assert tr.population[2] == pytest.approx(math.exp(-2), rel=1e-8)


def test_damped_driven_bounded():
    gamma = 1 / T_S
    tr = integrate_damped(20 * gamma, 3 * gamma, gamma, 5 * T_S, initial=GROUND)
    assert tr.population.min() >= -1e-12 and tr.population.max() <= 1.0
    assert np.all(np.diff(tr.norm) <= 1e-12)
    with pytest.raises(ValueError):
        integrate_damped(1.0, 0.0, 0.0, 1.0)


def test_compare_traces_basics():
    t = np.linspace(0, 1, 11)
    c = compare_traces(lambda x: x**2, t**2, times=t)
    assert c.max_abs_error == 0.0 and c.rms_error == 0.0
    with pytest.raises(ValueError):
        compare_traces(lambda x: x, np.zeros(5), times=t)
    tr = PopulationTrace(t, np.ones(11, complex), np.zeros(11, complex), "test")
    with pytest.raises(ValueError):
        compare_traces(lambda x: x, tr, times=t[:5])


def test_config_validation():
    for kw in ({"rel_tol": 1e-2}, {"abs_tol": 1e-15}, {"max_step": 0.0}, {"method": "Euler"}):
        with pytest.raises(ValueError):
            OdeConfig(**kw)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_integration_failure_raises():
    cfg = OdeConfig(rel_tol=1e-12, abs_tol=1e-13)
    with pytest.raises(IntegrationError, match="integration failed"):
        integrate_rwa_monochromatic(1e300, 0.0, 1.0, cfg)


def test_rwa_suite_and_matrix():
    cases = rwa_cases()
    assert len(cases) == 16
    assert min(d / w for w, d in cases) == 0.0 and max(d / w for w, d in cases) == 8.0
    rep = run_rwa()
    assert rep["passed"] and rep["max_error"] <= 1e-6


def test_damped_suite():
    rep = run_damped()
    assert rep["passed"]
    assert rep["cases"][0]["max_rel_error"] <= 1e-8
