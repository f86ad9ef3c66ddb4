"""Direct numerical integration of the two-level amplitude equations.

Used as an independent check on the closed forms in :mod:`twolevel.dynamics`.
All models work with complex amplitudes ``(c1, c2)`` in a frame rotating at
the transition frequency, with hbar = 1 and the half-round Rabi frequency
``W`` (rad/s) as off-diagonal coupling:

``rwa``
    ``i d/dt c = [[0, W], [W, -D]] c``. Its exact solution is the
    single-frequency law ``p1``.
``bichromatic`` (model version ``bichromatic-rwa-1``)
    Components at ``w0 -/+ D``, co-rotating terms of both kept,
    counter-rotating terms dropped. The off-diagonal coupling is
    ``k W cos(D t)`` with ``k = coupling_factor``. For ``k = 1`` each
    component contributes ``W/2``, the convention under which the
    field's total peak coupling is ``W``. ``k = 2`` gives each component
    the full ``W``.
``damped``
    ``rwa`` plus an upper-level amplitude decay ``-gamma/2 c2``, so that an
    undriven excited atom has ``|c2|^2 = exp(-gamma t)``.

Integration uses scipy's adaptive Dormand-Prince 8(5,3) with dense output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "BICHROMATIC_MODEL",
    "IntegrationError",
    "OdeConfig",
    "TwoLevelState",
    "PopulationTrace",
    "TraceComparison",
    "default_config",
    "integrate_rwa_monochromatic",
    "integrate_bichromatic",
    "integrate_damped",
    "compare_traces",
]

BICHROMATIC_MODEL = "bichromatic-rwa-1"


class IntegrationError(RuntimeError):
    """The ODE solver gave up (step size collapse or similar)."""


@dataclass(frozen=True)
class OdeConfig:
    """Integrator settings. ``max_step`` in seconds; ``None`` picks a default."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: Optional[float] = None
    method: str = "DOP853"

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (1e-14 < v <= 1e-3):
                raise ValueError(f"{name} must lie in (1e-14, 1e-3], got {v!r}")
        if self.max_step is not None and not (self.max_step > 0):
            raise ValueError("max_step must be positive")
        if self.method not in ("DOP853", "RK45", "RK23"):
            raise ValueError(f"unsupported method {self.method!r}")

    def step_for(self, *rates: float) -> float:
        if self.max_step is not None:
            return self.max_step
        scale = max(abs(r) for r in rates)
        if scale == 0:
            return np.inf
        return (1.0 / 20.0) * 2.0 * math.pi / scale


def default_config() -> OdeConfig:
    return OdeConfig()


@dataclass(frozen=True)
class TwoLevelState:
    c1: complex
    c2: complex
    t: float = 0.0

    @property
    def population(self) -> float:
        return abs(self.c2) ** 2

    @property
    def norm(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2


GROUND = TwoLevelState(1.0 + 0j, 0j)
EXCITED = TwoLevelState(0j, 1.0 + 0j)


@dataclass
class PopulationTrace:
    """Upper-level population ``|c2|^2`` sampled on ``times``."""

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    model: str
    params: dict = field(default_factory=dict)
    nfev: int = 0

    @property
    def population(self) -> np.ndarray:
        return np.abs(self.c2) ** 2

    @property
    def norm(self) -> np.ndarray:
        return np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm - 1.0)))

    def state(self, k: int) -> TwoLevelState:
        return TwoLevelState(complex(self.c1[k]), complex(self.c2[k]), float(self.times[k]))


def _times(t_end, times, n_samples):
    if not (math.isfinite(t_end) and t_end > 0):
        raise ValueError("t_end must be positive and finite")
    if times is None:
        return np.linspace(0.0, t_end, n_samples)
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1 or times.size == 0 or times[0] < 0 or times[-1] > t_end or np.any(np.diff(times) < 0):
        raise ValueError("times must be a non-decreasing 1-D grid inside [0, t_end]")
    return times


def _run(rhs, y0, t_end, times, cfg, step, model, params):
    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        np.asarray(y0, dtype=np.complex128),
        method=cfg.method,
        t_eval=times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=step,
    )
    if not sol.success:
        t_fail = float(np.ravel(sol.t)[-1]) if len(sol.t) else 0.0
        raise IntegrationError(
            f"{model} integration failed at t={t_fail:.6g} "
            f"after {sol.nfev} evaluations: {sol.message}"
        )
    return PopulationTrace(sol.t, sol.y[0], sol.y[1], model, params, int(sol.nfev))


def integrate_rwa_monochromatic(omega_rabi: float, detuning: float, t_end: float,
                                cfg: OdeConfig = OdeConfig(), times=None,
                                n_samples: int = 1001) -> PopulationTrace:
    """Single-frequency drive in the rotating-wave frame, starting in the ground state."""
    w, d = float(omega_rabi), float(detuning)
    times = _times(t_end, times, n_samples)

    def rhs(t, y):
        c1, c2 = y
        return np.array([-1j * w * c2, -1j * (w * c1 - d * c2)])

    return _run(rhs, [1.0, 0.0], t_end, times, cfg, cfg.step_for(w, d), "rwa",
                {"omega_rabi": w, "detuning": d})


def integrate_bichromatic(omega_rabi: float, detuning: float, t_end: float,
                          cfg: OdeConfig = OdeConfig(), times=None, n_samples: int = 1001,
                          coupling_factor: float = 1.0) -> PopulationTrace:
    """Symmetric two-frequency drive, coupling ``coupling_factor * W * cos(D t)``."""
    w, d = float(omega_rabi), float(detuning)
    if d == 0:
        raise ValueError("the bichromatic model needs a non-zero detuning")
    k = float(coupling_factor)
    times = _times(t_end, times, n_samples)

    def rhs(t, y):
        v = k * w * math.cos(d * t)
        c1, c2 = y
        return np.array([-1j * v * c2, -1j * v * c1])

    # the two components beat at D on top of the coupling rate
    return _run(rhs, [1.0, 0.0], t_end, times, cfg, cfg.step_for(abs(k * w) + abs(d)), BICHROMATIC_MODEL,
                {"omega_rabi": w, "detuning": d, "coupling_factor": k})


def integrate_damped(omega_rabi: float, detuning: float, gamma_s: float, t_end: float,
                     cfg: OdeConfig = OdeConfig(), times=None, n_samples: int = 1001,
                     initial: TwoLevelState = EXCITED) -> PopulationTrace:
    """Single-frequency drive with upper-level decay at rate ``gamma_s``.

    Starts in the upper level by default; pass ``initial=GROUND`` for
    damped Rabi flopping from the ground state.
    """
    w, d, g = float(omega_rabi), float(detuning), float(gamma_s)
    if not (math.isfinite(g) and g > 0):
        raise ValueError("gamma_s must be positive")
    times = _times(t_end, times, n_samples)

    def rhs(t, y):
        c1, c2 = y
        return np.array([-1j * w * c2, -1j * (w * c1 - d * c2) - 0.5 * g * c2])

    return _run(rhs, [initial.c1, initial.c2], t_end, times, cfg, cfg.step_for(w, d, g), "damped",
                {"omega_rabi": w, "detuning": d, "gamma_s": g})


@dataclass
class TraceComparison:
    times: np.ndarray
    analytic: np.ndarray
    numeric: np.ndarray
    max_abs_error: float
    rms_error: float
    label: str = ""

    def to_dict(self, include_samples: bool = False) -> dict:
        d = {"label": self.label, "n": int(self.times.size),
             "max_abs_error": self.max_abs_error, "rms_error": self.rms_error}
        if include_samples:
            d.update(times=self.times.tolist(), analytic=self.analytic.tolist(),
                     numeric=self.numeric.tolist())
        return d


def compare_traces(analytic: Callable[[np.ndarray], np.ndarray], trace, times=None,
                   label: str = "") -> TraceComparison:
    """Max-abs and RMS difference between an analytic law and a numeric trace.

    ``trace`` is a :class:`PopulationTrace` or a plain array of values on
    ``times``. ``analytic`` is called once with the whole time grid.

    Raises
    ------
    ValueError
        If the grids do not line up.
    """
    if isinstance(trace, PopulationTrace):
        if times is not None and not np.array_equal(np.asarray(times, dtype=np.float64), trace.times):
            raise ValueError("time grid does not match the trace")
        times, numeric = trace.times, trace.population
    else:
        if times is None:
            raise ValueError("times are required with a bare numeric trace")
        times = np.asarray(times, dtype=np.float64)
        numeric = np.asarray(trace, dtype=np.float64)
    expected = np.asarray(analytic(times), dtype=np.float64)
    if expected.shape != numeric.shape or numeric.shape != times.shape:
        raise ValueError(f"grid mismatch: times {times.shape}, analytic {expected.shape}, numeric {numeric.shape}")
    err = np.abs(expected - numeric)
    return TraceComparison(times, expected, numeric, float(err.max()),
                           float(np.sqrt(np.mean(err * err))), label)
