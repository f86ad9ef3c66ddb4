"""Lifetime statistics of the upper level.

Two exponential densities link the spontaneous emission time ``t_s`` and
the dwell (life) time ``t_l`` of the particle on the upper level:

* ``g1(gamma_s, t_l) = gamma_s exp(-gamma_s t_l)`` with ``gamma_s = 1/t_s``,
* ``g2(gamma_l, t_s) = gamma_l exp(-gamma_l t_s)`` with ``gamma_l = 1/t_l``,

and their product ``g_joint``. Matching both to the ``1/e^2`` level of
``g1`` gives the transcendental equation ``x = exp(x - 2)`` with
``x = t_s / t_l``; its larger root ``pi*`` (just above pi) fixes the damping
constants reported by :func:`lifetime_constants`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Tuple

__all__ = [
    "FixedPointRoots",
    "LifetimeModel",
    "g1",
    "g2",
    "g_joint",
    "g_joint_argmax",
    "fixed_point_residual",
    "solve_fixed_point",
    "lifetime_constants",
    "lorentzian_profile",
    "normalization",
]


def _rate(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be finite and positive, got {value!r}")
    return value


def _time(name, value, strict=False):
    value = float(value)
    if not math.isfinite(value) or value < 0 or (strict and value == 0):
        bound = "positive" if strict else "non-negative"
        raise ValueError(f"{name} must be finite and {bound}, got {value!r}")
    return value


def g1(gamma_s: float, t_l: float) -> float:
    """Density of the life time at known emission rate, ``gamma_s exp(-gamma_s t_l)``."""
    gamma_s = _rate("gamma_s", gamma_s)
    return gamma_s * math.exp(-gamma_s * _time("t_l", t_l))


def g2(gamma_l: float, t_s: float) -> float:
    """Density of the emission time at known life-time damping, ``gamma_l exp(-gamma_l t_s)``."""
    gamma_l = _rate("gamma_l", gamma_l)
    return gamma_l * math.exp(-gamma_l * _time("t_s", t_s))


def g_joint(t_l: float, t_s: float) -> float:
    """Joint density ``g1(1/t_s, t_l) * g2(1/t_l, t_s)``.

    Equal to ``exp(-(t_l^2 + t_s^2) / (t_l t_s)) / (t_l t_s)`` and symmetric
    in its arguments.
    """
    t_l = _time("t_l", t_l, strict=True)
    t_s = _time("t_s", t_s, strict=True)
    prod = t_l * t_s
    return math.exp(-(t_l * t_l + t_s * t_s) / prod) / prod


def g_joint_argmax(t_s: float) -> float:
    """Life time maximising :func:`g_joint` at fixed ``t_s``.

    Setting d/dt_l log g_joint = 0 gives ``t_l^2 + t_l t_s - t_s^2 = 0``, so
    ``t_l* = t_s (sqrt(5) - 1) / 2``.
    """
    t_s = _time("t_s", t_s, strict=True)
    return t_s * (math.sqrt(5.0) - 1.0) / 2.0


def fixed_point_residual(x: float) -> float:
    """``|x - exp(x - 2)|``."""
    return abs(x - math.exp(x - 2.0))


def _f(x):
    return x - math.exp(x - 2.0)


def _df(x):
    return 1.0 - math.exp(x - 2.0)


def _bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"root not bracketed on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= xtol:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish(x: float, lo: float, hi: float) -> float:
    # Newton steps, kept inside the original bracket; stop once no better.
    best, best_res = x, abs(_f(x))
    for _ in range(8):
        d = _df(x)
        if d == 0.0:
            break
        nxt = x - _f(x) / d
        if not (lo <= nxt <= hi):
            break
        res = abs(_f(nxt))
        if res < best_res:
            best, best_res = nxt, res
        if nxt == x:
            break
        x = nxt
    return best


@dataclass(frozen=True)
class FixedPointRoots:
    small: float
    large: float
    residual_small: float
    residual_large: float


def solve_fixed_point(tolerance: float = 1e-12) -> FixedPointRoots:
    """Both positive roots of ``x = exp(x - 2)``.

    Bisection on the brackets ``[1e-6, 1]`` and ``[2, 5]`` followed by
    Newton polishing. ``x exp(-x) = exp(-2)`` has exactly two positive
    solutions because ``exp(-2) < max(x exp(-x)) = exp(-1)``.

    Parameters
    ----------
    tolerance : float
        Required bound on ``|x - exp(x - 2)|``, in (0, 1e-6].

    Raises
    ------
    ValueError
        On an out-of-range tolerance.
    ArithmeticError
        If a polished root misses the tolerance (not expected for
        tolerances down to about 1e-15).
    """
    if not (0 < tolerance <= 1e-6):
        raise ValueError(f"tolerance must lie in (0, 1e-6], got {tolerance!r}")
    roots = []
    for lo, hi in ((1e-6, 1.0), (2.0, 5.0)):
        x = _polish(_bisect(_f, lo, hi, xtol=1e-15), lo, hi)
        res = fixed_point_residual(x)
        if res > tolerance:
            raise ArithmeticError(f"root near {x} has residual {res:.3e} > {tolerance:.3e}")
        roots.append((x, res))
    (xs, rs), (xl, rl) = roots
    return FixedPointRoots(small=xs, large=xl, residual_small=rs, residual_large=rl)


@dataclass(frozen=True)
class LifetimeModel:
    """Emission/lifetime constants derived from ``t_s`` and the fixed-point roots.

    ``gamma_l`` and ``gamma_lg`` use the solved root ``pi_star``; the
    ``*_pi`` fields repeat the same relations with the literal pi so the two
    conventions can be compared side by side. ``t_l2`` and
    ``t_l2_from_small_root`` are the two candidates ``t_s 20/pi*`` and
    ``t_s / x_small`` for the long life time.
    """

    t_s: float
    gamma_s: float
    pi_star: float
    x_small: float
    gamma_l: float
    gamma_lg: float
    ratio_19: float
    t_l1: float
    t_l2: float
    t_l2_from_small_root: float
    residual_pi_star: float
    residual_x_small: float
    ratio_19_pi: float
    gamma_l_pi: float
    gamma_lg_pi: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = {
            "gamma_l": "pi_star / (19 t_s)",
            "gamma_lg": "pi_star / (20 t_s)",
            "ratio_19": "19 / pi_star",
            "t_l1": "t_s / pi_star",
            "t_l2": "t_s * 20 / pi_star",
            "t_l2_from_small_root": "t_s / x_small",
            "ratio_19_pi": "19 / pi (literal pi)",
            "gamma_l_pi": "pi / (19 t_s) (literal pi)",
            "gamma_lg_pi": "pi / (20 t_s) (literal pi)",
        }
        return d


def lifetime_constants(t_s: float, tolerance: float = 1e-12) -> LifetimeModel:
    """Populate a :class:`LifetimeModel` for spontaneous emission time ``t_s`` [s]."""
    t_s = _time("t_s", t_s, strict=True)
    roots = solve_fixed_point(tolerance)
    ps = roots.large
    return LifetimeModel(
        t_s=t_s,
        gamma_s=1.0 / t_s,
        pi_star=ps,
        x_small=roots.small,
        gamma_l=ps / (19.0 * t_s),
        gamma_lg=ps / (20.0 * t_s),
        ratio_19=19.0 / ps,
        t_l1=t_s / ps,
        t_l2=t_s * (20.0 / ps),
        t_l2_from_small_root=t_s / roots.small,
        residual_pi_star=roots.residual_large,
        residual_x_small=roots.residual_small,
        ratio_19_pi=19.0 / math.pi,
        gamma_l_pi=math.pi / (19.0 * t_s),
        gamma_lg_pi=math.pi / (20.0 * t_s),
    )


def lorentzian_profile(detuning, fwhm: float):
    """Unit-peak Lorentzian ``(fwhm/2)^2 / (detuning^2 + (fwhm/2)^2)``."""
    fwhm = _rate("fwhm", fwhm)
    hw2 = (0.5 * fwhm) ** 2
    return hw2 / (detuning * detuning + hw2)


def normalization(density: Callable[[float, float], float], rate: float) -> Tuple[float, float]:
    """Integrate ``density(rate, t)`` over ``[0, inf)``.

    Adaptive quadrature on ``[0, 40/rate]`` plus the analytic tail of an
    exponential density beyond it, ``exp(-40)``.

    Returns
    -------
    (float, float)
        The integral and an error bound (quadrature estimate plus tail).
    """
    from scipy.integrate import quad

    rate = _rate("rate", rate)
    upper = 40.0 / rate
    value, err = quad(lambda t: density(rate, t), 0.0, upper, epsabs=1e-13, epsrel=1e-13, limit=200)
    tail = math.exp(-40.0)
    return value + tail, err + tail
