"""Closed-form upper-level probabilities for a driven two-level atom.

Two drives are covered:

* single-frequency (monochromatic) excitation, probability :func:`p1`
  ``4W^2/(4W^2+D^2) sin^2(t/2 sqrt(4W^2+D^2))``;
* a symmetric frequency pair ``w0 -/+ D`` (quantum interference drive),
  probability :func:`p2` ``sin^2((W/D) sin(D t))``.

Here ``W`` is the half-round Rabi frequency (rad/s), ``D`` the detuning
(rad/s) and ``t`` the interaction time (s). Scaling time by ``W`` and
detuning by ``W`` (``X = t W``, ``Y = D / W``) removes ``W`` entirely, see
:func:`p1_dimensionless` and :func:`p2_dimensionless`.

All functions accept scalars or broadcastable arrays and return a float for
scalar input. Evaluation goes through the kernel backend selected in
:mod:`twolevel._backend`, the same path used for surfaces, so a point
evaluation and the matching surface sample are bit-for-bit identical.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels

__all__ = [
    "LIMIT_GUARD",
    "DriveKind",
    "DriveSpec",
    "DimensionlessPoint",
    "p1",
    "p1_envelope",
    "p2",
    "p1_dimensionless",
    "p2_dimensionless",
    "p1_detuning_derivative",
    "p2_detuning_derivative",
    "field_waveform",
]

# p2 switches to sin^2(W t) when both |D t| and |D/W| are below this.
LIMIT_GUARD = 1e-8


class DriveKind(str, enum.Enum):
    MONOCHROMATIC = "monochromatic"
    BICHROMATIC_SYMMETRIC = "bichromatic"


@dataclass(frozen=True)
class DriveSpec:
    """A monochromatic or symmetric two-frequency drive.

    For the symmetric pair the components sit at ``carrier - detuning`` and
    ``carrier + detuning``. For a single frequency the laser runs at
    ``carrier + detuning``. ``carrier`` is only needed for waveforms.
    """

    kind: DriveKind
    omega_rabi: float
    detuning: float = 0.0
    carrier: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DriveKind(self.kind))
        if not (math.isfinite(self.omega_rabi) and self.omega_rabi >= 0):
            raise ValueError(f"omega_rabi must be finite and >= 0, got {self.omega_rabi!r}")
        if not math.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if self.carrier is not None and not (math.isfinite(self.carrier) and self.carrier > 0):
            raise ValueError("carrier must be finite and positive")

    @property
    def frequencies(self):
        """Angular frequencies of the field components (rad/s)."""
        if self.carrier is None:
            raise ValueError("drive has no carrier frequency")
        if self.kind is DriveKind.MONOCHROMATIC:
            return (self.carrier + self.detuning,)
        return (self.carrier - self.detuning, self.carrier + self.detuning)

    def probability(self, tau):
        """Upper-level probability after interaction time ``tau``."""
        if self.kind is DriveKind.MONOCHROMATIC:
            return p1(self.omega_rabi, self.detuning, tau)
        return p2(self.omega_rabi, self.detuning, tau)


@dataclass(frozen=True)
class DimensionlessPoint:
    """Scaled time ``x = tau * omega`` and scaled detuning ``y = detuning / omega``."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("dimensionless coordinates must be finite")


def _evaluate(fn, omega, detuning, tau):
    o, d, t = np.broadcast_arrays(
        np.asarray(omega, dtype=np.float64),
        np.asarray(detuning, dtype=np.float64),
        np.asarray(tau, dtype=np.float64),
    )
    shape = o.shape
    o = np.ascontiguousarray(o).ravel()
    d = np.ascontiguousarray(d).ravel()
    t = np.ascontiguousarray(t).ravel()
    if not (np.isfinite(o).all() and np.isfinite(d).all() and np.isfinite(t).all()):
        raise ValueError("omega_rabi, detuning and tau must be finite")
    if (o < 0).any():
        raise ValueError("omega_rabi must be non-negative")
    if (t < 0).any():
        raise ValueError("tau must be non-negative (time runs forward)")
    out = np.empty(o.shape, dtype=np.float64)
    fn(o, d, t, out)
    if shape == ():
        return float(out[0])
    return out.reshape(shape)


def p1(omega_rabi, detuning, tau):
    """Single-frequency excitation probability.

    Parameters
    ----------
    omega_rabi : float or array_like
        Half-round Rabi frequency, rad/s, >= 0.
    detuning : float or array_like
        Laser detuning from the transition, rad/s.
    tau : float or array_like
        Interaction time, s, >= 0.

    Returns
    -------
    float or ndarray
        Probability in [0, 1]. With no drive at all (both ``omega_rabi`` and
        ``detuning`` zero) the result is 0.
    """
    return _evaluate(kernels.p1_points, omega_rabi, detuning, tau)


def p1_envelope(omega_rabi, detuning):
    """Supremum over time of :func:`p1`, ``4W^2 / (4W^2 + D^2)``."""
    o = np.asarray(omega_rabi, dtype=np.float64)
    d = np.asarray(detuning, dtype=np.float64)
    w2 = 4.0 * o * o + d * d
    if np.any(w2 == 0):
        raise ValueError("envelope undefined when omega_rabi and detuning are both zero")
    env = 4.0 * o * o / w2
    return float(env) if env.ndim == 0 else env


def p2(omega_rabi, detuning, tau):
    """Symmetric two-frequency (quantum interference) probability.

    ``sin^2((W/D) sin(D tau))``. The expression has a removable singularity
    at ``D = 0``; when ``|D tau|`` and ``|D/W|`` are both below
    :data:`LIMIT_GUARD` the resonant limit ``sin^2(W tau)`` is returned,
    which is then exact to well below double precision.
    """
    return _evaluate(kernels.p2_points, omega_rabi, detuning, tau)


def p1_dimensionless(x, y=None):
    """:func:`p1` in scaled coordinates: ``4/(4+Y^2) sin^2(X/2 sqrt(4+Y^2))``.

    Accepts a :class:`DimensionlessPoint` or ``(x, y)``.
    """
    if isinstance(x, DimensionlessPoint):
        x, y = x.x, x.y
    return _evaluate(kernels.p1_points, 1.0, y, x)


def p2_dimensionless(x, y=None):
    """:func:`p2` in scaled coordinates: ``sin^2(sin(X Y) / Y)``, ``sin^2(X)`` at ``Y -> 0``."""
    if isinstance(x, DimensionlessPoint):
        x, y = x.x, x.y
    return _evaluate(kernels.p2_points, 1.0, y, x)


def p1_detuning_derivative(omega_rabi: float, detuning: float, tau: float) -> float:
    """Analytic d p1 / d detuning at a single point."""
    o, d, t = float(omega_rabi), float(detuning), float(tau)
    w2 = 4.0 * o * o + d * d
    if w2 == 0.0:
        return 0.0
    w = math.sqrt(w2)
    s = math.sin(0.5 * t * w)
    env = 4.0 * o * o / w2
    denv = -8.0 * o * o * d / (w2 * w2)
    # d/dD sin^2(t w / 2) = sin(t w) * (t/2) * D / w
    return denv * s * s + env * math.sin(t * w) * 0.5 * t * d / w


def p2_detuning_derivative(omega_rabi: float, detuning: float, tau: float) -> float:
    """Analytic d p2 / d detuning at a single point (odd in detuning)."""
    o, d, t = float(omega_rabi), float(detuning), float(tau)
    a = d * t
    if abs(a) < 1e-4:
        # (a cos a - sin a) / d^2 = -t^2 a / 3 (1 - a^2/10 + a^4/280 - ...)
        g = -t * t * a / 3.0 * (1.0 - a * a / 10.0 + a**4 / 280.0)
        u = o * t * (1.0 - a * a / 6.0 + a**4 / 120.0)
    else:
        g = (a * math.cos(a) - math.sin(a)) / (d * d)
        u = o * math.sin(a) / d
    return math.sin(2.0 * u) * o * g


def field_waveform(spec: DriveSpec, e0, t):
    """Instantaneous field of the drive [V/m].

    ``E0 cos(w t)`` for one frequency, ``E0 [cos(w1 t) + cos(w2 t)]`` for
    the symmetric pair.

    Raises
    ------
    ValueError
        If ``spec`` has no carrier frequency or ``t`` is negative.
    """
    if spec.carrier is None:
        raise ValueError("field_waveform needs a drive with a carrier frequency")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise ValueError("t must be non-negative")
    field = sum(np.cos(w * t) for w in spec.frequencies) * e0
    return float(field) if np.ndim(field) == 0 else field
