"""Batch comparisons of the closed forms against the ODE oracle.

Each suite returns a JSON-ready report with one entry per case and an
overall ``passed`` flag (every case's error at or below the bar).
"""
from __future__ import annotations

import math
from dataclasses import asdict

import numpy as np

from .dynamics import p1, p2
from .oracle import (
    BICHROMATIC_MODEL,
    GROUND,
    OdeConfig,
    compare_traces,
    integrate_bichromatic,
    integrate_damped,
    integrate_rwa_monochromatic,
)
from .physcore import LITHIUM, spontaneous_emission_time

SUITES = ("rwa", "bichromatic", "damped")

# 2 Rabi frequencies x 8 detuning ratios in [0, 8]
RWA_OMEGAS = (1.0, 2.5)
RWA_RATIOS = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0)
BICHROMATIC_RATIOS = (0.1, 0.5, 1.0, 2.0, 5.0)


def rwa_cases():
    return [(w, r * w) for w in RWA_OMEGAS for r in RWA_RATIOS]


def run_rwa(cfg: OdeConfig = OdeConfig(), bar: float = 1e-6, n_samples: int = 1000,
            rabi_periods: float = 6.0) -> dict:
    """p1 against the rotating-wave integration on the 16-point matrix."""
    cases = []
    for w, d in rwa_cases():
        t_end = rabi_periods * math.pi / w
        tr = integrate_rwa_monochromatic(w, d, t_end, cfg, n_samples=n_samples)
        cmp = compare_traces(lambda t, w=w, d=d: p1(w, d, t), tr, label=f"omega={w:g} detuning={d:g}")
        cases.append({**cmp.to_dict(), "omega_rabi": w, "detuning": d,
                      "norm_drift": tr.norm_drift(), "passed": cmp.max_abs_error <= bar})
    return _report("rwa", "rwa", cfg, bar, cases)


def run_bichromatic(cfg: OdeConfig = OdeConfig(), bar: float = 1e-6, n_samples: int = 1000,
                    detuning: float = 1.0, t_end: float = 20.0,
                    coupling_factor: float = 1.0) -> dict:
    """p2 against the two-frequency integration for several ``W/D`` ratios.

    Also records, per case, the largest population at the shared zeros
    ``tau = k pi / D`` of p2.
    """
    cases = []
    for ratio in BICHROMATIC_RATIOS:
        w = ratio * detuning
        tr = integrate_bichromatic(w, detuning, t_end, cfg, n_samples=n_samples,
                                   coupling_factor=coupling_factor)
        cmp = compare_traces(lambda t, w=w: p2(w, detuning, t), tr, label=f"omega/detuning={ratio:g}")
        zeros = np.arange(1, int(t_end * abs(detuning) / math.pi) + 1) * math.pi / abs(detuning)
        zt = integrate_bichromatic(w, detuning, t_end, cfg, times=zeros,
                                   coupling_factor=coupling_factor) if zeros.size else None
        cases.append({**cmp.to_dict(), "omega_rabi": w, "detuning": detuning, "ratio": ratio,
                      "max_population_at_zeros": float(zt.population.max()) if zt is not None else 0.0,
                      "norm_drift": tr.norm_drift(), "passed": cmp.max_abs_error <= bar})
    rep = _report("bichromatic", BICHROMATIC_MODEL, cfg, bar, cases)
    rep["coupling_factor"] = coupling_factor
    return rep


def run_damped(cfg: OdeConfig = OdeConfig(), bar: float = 1e-8, n_samples: int = 1000,
               t_s: float | None = None) -> dict:
    """Free decay against ``exp(-t/t_s)`` (relative error), plus a driven run checked for bounds."""
    t_s = spontaneous_emission_time(LITHIUM) if t_s is None else float(t_s)
    gamma = 1.0 / t_s
    tr = integrate_damped(0.0, 0.0, gamma, 3.0 * t_s, cfg, n_samples=n_samples)
    expected = np.exp(-gamma * tr.times)
    rel = float(np.max(np.abs(tr.population - expected) / expected))
    case = {"label": "free decay", "gamma_s": gamma, "t_end": 3.0 * t_s, "n": int(tr.times.size),
            "max_rel_error": rel, "passed": rel <= bar}
    w = 20.0 * gamma
    drv = integrate_damped(w, 0.0, gamma, 3.0 * t_s, cfg, n_samples=n_samples, initial=GROUND)
    pop = drv.population
    norm = drv.norm
    bounded = bool(pop.min() >= -bar and pop.max() <= 1.0 + bar)
    decaying = bool(np.all(np.diff(norm) <= bar))
    driven = {"label": "driven decay from ground", "omega_rabi": w, "gamma_s": gamma,
              "min_population": float(pop.min()), "max_population": float(pop.max()),
              "norm_non_increasing": decaying, "passed": bounded and decaying}
    return _report("damped", "damped", cfg, bar, [case, driven])


def _report(suite, model, cfg, bar, cases):
    errs = [c.get("max_abs_error", c.get("max_rel_error")) for c in cases]
    errs = [e for e in errs if e is not None]
    return {
        "suite": suite,
        "model": model,
        "config": asdict(cfg),
        "bar": bar,
        "cases": cases,
        "max_error": max(errs) if errs else None,
        "passed": all(c["passed"] for c in cases),
    }


def run_suite(name: str, cfg: OdeConfig = OdeConfig(), bar: float | None = None, **kwargs) -> dict:
    if name == "rwa":
        return run_rwa(cfg, 1e-6 if bar is None else bar, **kwargs)
    if name == "bichromatic":
        return run_bichromatic(cfg, 1e-6 if bar is None else bar, **kwargs)
    if name == "damped":
        return run_damped(cfg, 1e-8 if bar is None else bar, **kwargs)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
