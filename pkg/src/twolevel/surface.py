"""Probability-time-frequency (PTF) surfaces, fixed-time slices and export.

A surface samples :func:`~twolevel.dynamics.p1` or
:func:`~twolevel.dynamics.p2` on a uniform rectangular grid, either in
physical units (time in s along ``x``, detuning in rad/s along ``y``) or in
the scaled coordinates ``X = tau W``, ``Y = D / W``. Rows (fixed ``x``) are
independent, so generation can be split across threads; the values do not
depend on how the rows are split.

Export formats
--------------
``csv``
    Header ``x,y,p`` then one record per sample, ``x`` outermost, numbers
    written with 17 significant digits.
``matrix``
    gnuplot "nonuniform matrix" text: the first row is ``nx x_0 .. x_{nx-1}``,
    each following row is ``y_j p(x_0, y_j) .. p(x_{nx-1}, y_j)``.
``json``
    The whole :class:`Surface`, metadata included.
"""
from __future__ import annotations

import hashlib
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import __version__
from ._backend import BACKEND, kernels
from .dynamics import (
    DriveKind,
    DriveSpec,
    p1,
    p1_detuning_derivative,
    p2,
    p2_detuning_derivative,
)

__all__ = [
    "MAX_SAMPLES",
    "ResourceLimitError",
    "GridSpec",
    "Surface",
    "SpectralSlice",
    "uniform_axis",
    "default_grid",
    "generate_surface",
    "spectral_slice",
    "find_unit_peaks",
    "export_surface",
    "import_surface",
    "export_slice",
]

MAX_SAMPLES = 100_000_000
FORMATS = ("csv", "json", "matrix")


class ResourceLimitError(RuntimeError):
    """A requested grid exceeds :data:`MAX_SAMPLES`."""


def _kind(kind) -> str:
    k = str(getattr(kind, "value", kind)).lower()
    if k not in ("p1", "p2"):
        raise ValueError(f"kind must be 'p1' or 'p2', got {kind!r}")
    return k


def uniform_axis(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` evenly spaced samples from ``lo`` to ``hi`` inclusive.

    When ``lo == -hi`` the samples are made exactly antisymmetric, so a
    surface over a symmetric detuning range is exactly mirror symmetric.
    """
    ax = np.linspace(lo, hi, n)
    if lo == -hi:
        ax = (ax - ax[::-1]) / 2.0
    return ax


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling grid for a surface.

    With ``dimensionless=True`` the axes are ``X`` and ``Y``; otherwise
    time [s] and detuning [rad/s].
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    dimensionless: bool = True
    kind: str = "p1"
    default_ranges: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        for name in ("x_min", "x_max", "y_min", "y_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("nx and ny must be integers")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("nx and ny must be at least 2")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("axis maxima must exceed minima")
        if self.x_min < 0:
            raise ValueError("time axis must start at or after 0")
        if self.nx * self.ny > MAX_SAMPLES:
            raise ResourceLimitError(
                f"{self.nx} x {self.ny} = {self.nx * self.ny} samples exceeds the limit of {MAX_SAMPLES}"
            )

    @property
    def xs(self) -> np.ndarray:
        return uniform_axis(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return uniform_axis(self.y_min, self.y_max, self.ny)


def default_grid(kind="p1", nx: int = 257, ny: int = 161) -> GridSpec:
    """Scaled grid ``X in [0, 4 pi]``, ``Y in [-4, 4]``.

    The defaults hit ``X = pi/2`` and ``Y = 0`` exactly.
    """
    return GridSpec(0.0, 4.0 * math.pi, -4.0, 4.0, nx, ny, True, kind, default_ranges=True)


@dataclass
class Surface:
    """Sampled probabilities: ``values[i, j] = P(xs[i], ys[j])``."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != (self.xs.size, self.ys.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes ({self.xs.size}, {self.ys.size})"
            )

    @property
    def shape(self):
        return self.values.shape

    def checksum(self) -> str:
        return _checksum(self.values)


def _checksum(values) -> str:
    return hashlib.sha256(np.ascontiguousarray(values, dtype="<f8").tobytes()).hexdigest()


def _fill_rows(grid_fn, omega, xs, ys, out, workers):
    nx = xs.size
    if workers <= 1 or nx < 2:
        grid_fn(omega, xs, ys, out)
        return
    bounds = np.linspace(0, nx, min(workers, nx) + 1).astype(int)

    def run(k):
        i0, i1 = bounds[k], bounds[k + 1]
        if i1 > i0:
            grid_fn(omega, xs[i0:i1], ys, out[i0:i1])

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, range(len(bounds) - 1)))


def generate_surface(spec: GridSpec, drive: Optional[DriveSpec] = None, workers: int = 1) -> Surface:
    """Evaluate the probability on every grid point.

    Parameters
    ----------
    spec : GridSpec
        Grid and probability kind.
    drive : DriveSpec, optional
        Supplies the Rabi frequency for a physical-unit grid; must be
        omitted for a dimensionless grid. Its kind has to match ``spec.kind``
        (monochromatic for p1, bichromatic for p2).
    workers : int
        Number of threads sharing the rows.
    """
    if spec.dimensionless:
        if drive is not None:
            raise ValueError("a dimensionless grid takes no drive")
        omega = 1.0
    else:
        if drive is None:
            raise ValueError("a physical-unit grid needs a drive for the Rabi frequency")
        expected = DriveKind.MONOCHROMATIC if spec.kind == "p1" else DriveKind.BICHROMATIC_SYMMETRIC
        if drive.kind is not expected:
            raise ValueError(f"{spec.kind} surfaces need a {expected.value} drive")
        omega = float(drive.omega_rabi)
    xs = np.ascontiguousarray(spec.xs)
    ys = np.ascontiguousarray(spec.ys)
    values = np.empty((xs.size, ys.size), dtype=np.float64)
    grid_fn = kernels.p1_grid if spec.kind == "p1" else kernels.p2_grid
    _fill_rows(grid_fn, omega, xs, ys, values, max(1, int(workers)))

    if spec.dimensionless:
        axes = {
            "x": {"name": "X", "meaning": "tau * omega_rabi", "unit": "1"},
            "y": {"name": "Y", "meaning": "detuning / omega_rabi", "unit": "1"},
        }
    else:
        axes = {
            "x": {"name": "tau", "meaning": "interaction time", "unit": "s"},
            "y": {"name": "detuning", "meaning": "laser detuning", "unit": "rad/s"},
        }
    for key, lo, hi, n in (("x", spec.x_min, spec.x_max, spec.nx), ("y", spec.y_min, spec.y_max, spec.ny)):
        axes[key].update({"min": lo, "max": hi, "n": n, "spacing": "linear"})
    metadata = {
        "kind": spec.kind,
        "dimensionless": spec.dimensionless,
        "omega_rabi_radps": None if spec.dimensionless else omega,
        "axes": axes,
        "default_ranges": spec.default_ranges,
        "conventions": {
            "rabi": "omega_rabi = pi * d * E0 / hbar (rad/s)",
            "time_direction": "forward (tau >= 0)",
            "p2_resonant_limit_guard": 1e-8,
        },
        "generator": {"package": "twolevel", "version": __version__, "backend": BACKEND},
        "checksum_sha256": _checksum(values),
    }
    return Surface(xs, ys, values, metadata)


@dataclass
class SpectralSlice:
    """Probability versus detuning at a fixed interaction time."""

    kind: str
    tau_fixed: float
    omega_rabi: float
    detunings: np.ndarray
    values: np.ndarray
    peaks: List[float] = field(default_factory=list)
    peak_tolerance: Optional[float] = None


def _check_range(det_min, det_max, n):
    if not (math.isfinite(det_min) and math.isfinite(det_max)) or det_max <= det_min:
        raise ValueError(f"invalid detuning range [{det_min}, {det_max}]")
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")


def spectral_slice(kind, tau_fixed: float, omega_rabi: float, det_min: float, det_max: float,
                   n: int) -> SpectralSlice:
    """Probability at fixed ``tau_fixed`` over ``n`` uniform detunings."""
    kind = _kind(kind)
    if not (math.isfinite(tau_fixed) and tau_fixed > 0):
        raise ValueError("tau_fixed must be positive")
    _check_range(det_min, det_max, n)
    dets = uniform_axis(det_min, det_max, int(n))
    fn = p1 if kind == "p1" else p2
    values = fn(omega_rabi, dets, tau_fixed)
    return SpectralSlice(kind, float(tau_fixed), float(omega_rabi), dets, values)


def _scan_step(kind, omega, tau, samples_per_oscillation):
    if kind == "p1":
        # phase tau*sqrt(4W^2+D^2)/2 moves at most tau/2 per unit detuning
        period = 2.0 * math.pi / tau
        if omega > 0:
            period = min(period, 2.0 * omega)
    else:
        # |d/dD (W sin(D tau)/D)| <= W tau^2 / 2; sin^2 has period pi in its argument
        period = 2.0 * math.pi / tau
        if omega > 0:
            period = min(period, 2.0 * math.pi / (omega * tau * tau))
    return period / samples_per_oscillation


def _bisect_max(deriv, lo, hi):
    # deriv(lo) > 0 > deriv(hi)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        d = deriv(mid)
        if d > 0:
            lo = mid
        elif d < 0:
            hi = mid
        else:
            return mid
    return 0.5 * (lo + hi)


def find_unit_peaks(kind, omega_rabi: float, tau_fixed: float, det_min: float, det_max: float,
                    tol: float = 1e-9, samples_per_oscillation: int = 64,
                    max_scan: int = 20_000_000) -> List[float]:
    """Detunings inside ``[det_min, det_max]`` where the probability reaches 1.

    The derivative with respect to detuning is sampled densely (at least
    ``samples_per_oscillation`` points per oscillation of the probability),
    every ``+ -> -`` sign change is refined by bisection, and maxima with
    ``P >= 1 - tol`` are kept. A run of exactly-zero derivative samples
    reports its midpoint. An empty list is a valid answer.
    """
    kind = _kind(kind)
    if not (0 < tol <= 1e-3):
        raise ValueError("tol must lie in (0, 1e-3]")
    omega_rabi = float(omega_rabi)
    tau_fixed = float(tau_fixed)
    if not (math.isfinite(omega_rabi) and math.isfinite(tau_fixed)) or omega_rabi < 0 or tau_fixed <= 0:
        raise ValueError("omega_rabi must be >= 0 and tau_fixed > 0, both finite")
    _check_range(det_min, det_max, 2)
    step = _scan_step(kind, omega_rabi, tau_fixed, samples_per_oscillation)
    n = int(math.ceil((det_max - det_min) / step)) + 1
    n = max(n, 3)
    if n > max_scan:
        raise ResourceLimitError(f"peak scan would need {n} samples (limit {max_scan})")
    grid = uniform_axis(det_min, det_max, n)

    if kind == "p1":
        def deriv(d):
            return p1_detuning_derivative(omega_rabi, d, tau_fixed)
        prob = p1
    else:
        def deriv(d):
            return p2_detuning_derivative(omega_rabi, d, tau_fixed)
        prob = p2

    ds = np.array([deriv(d) for d in grid])
    sgn = np.sign(ds)
    candidates = []
    k = 0
    while k < n:
        if sgn[k] == 0:
            j = k
            while j + 1 < n and sgn[j + 1] == 0:
                j += 1
            before = sgn[k - 1] if k > 0 else 1.0
            after = sgn[j + 1] if j + 1 < n else -1.0
            if before >= 0 and after <= 0:
                candidates.append(0.5 * (grid[k] + grid[j]))
            k = j + 1
            continue
        if k + 1 < n and sgn[k] > 0 and sgn[k + 1] < 0:
            candidates.append(_bisect_max(deriv, grid[k], grid[k + 1]))
        k += 1

    peaks = [float(d) for d in candidates if prob(omega_rabi, d, tau_fixed) >= 1.0 - tol]
    return sorted(peaks)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def export_surface(surface: Surface, fmt: str = "csv") -> bytes:
    """Serialise a surface; see the module docstring for the formats."""
    fmt = fmt.lower()
    xs, ys, vals = surface.xs, surface.ys, surface.values
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("x,y,p\n")
        ystr = [_fmt(y) for y in ys]
        for i, x in enumerate(xs):
            xstr = _fmt(x)
            row = vals[i]
            for j in range(ys.size):
                buf.write(f"{xstr},{ystr[j]},{_fmt(row[j])}\n")
        return buf.getvalue().encode("ascii")
    if fmt == "matrix":
        buf = io.StringIO()
        buf.write(" ".join([str(xs.size)] + [_fmt(x) for x in xs]) + "\n")
        for j, y in enumerate(ys):
            buf.write(" ".join([_fmt(y)] + [_fmt(v) for v in vals[:, j]]) + "\n")
        return buf.getvalue().encode("ascii")
    if fmt == "json":
        doc = {
            "format": "twolevel.surface",
            "format_version": 1,
            "metadata": surface.metadata,
            "xs": xs.tolist(),
            "ys": ys.tolist(),
            "values": vals.tolist(),
        }
        return (json.dumps(doc, allow_nan=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def import_surface(data: bytes, fmt: str = "csv") -> Surface:
    """Inverse of :func:`export_surface`. CSV and matrix carry no metadata."""
    fmt = fmt.lower()
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    if fmt == "csv":
        lines = text.splitlines()
        if not lines or lines[0].strip() != "x,y,p":
            raise ValueError("CSV surface must start with header 'x,y,p'")
        rec = np.array([[float(t) for t in ln.split(",")] for ln in lines[1:] if ln.strip()])
        if rec.size == 0:
            raise ValueError("CSV surface has no records")
        # x changes only between rows of the grid
        breaks = np.flatnonzero(rec[1:, 0] != rec[:-1, 0]) + 1
        ny = int(breaks[0]) if breaks.size else rec.shape[0]
        if rec.shape[0] % ny:
            raise ValueError("CSV records do not form a rectangular grid")
        nx = rec.shape[0] // ny
        xs = rec[::ny, 0].copy()
        ys = rec[:ny, 1].copy()
        values = rec[:, 2].reshape(nx, ny)
        return Surface(xs, ys, values, {})
    if fmt == "matrix":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        nx = int(rows[0][0])
        xs = np.array([float(t) for t in rows[0][1:]])
        if xs.size != nx:
            raise ValueError("matrix header length does not match its count")
        ys = np.array([float(r[0]) for r in rows[1:]])
        values = np.array([[float(t) for t in r[1:]] for r in rows[1:]]).T
        return Surface(xs, ys, values, {})
    if fmt == "json":
        doc = json.loads(text)
        if doc.get("format") != "twolevel.surface":
            raise ValueError("not a twolevel surface document")
        return Surface(np.array(doc["xs"]), np.array(doc["ys"]), np.array(doc["values"]), doc["metadata"])
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def export_slice(sl: SpectralSlice, fmt: str = "csv", metadata: Optional[dict] = None) -> bytes:
    """Serialise a slice; CSV appends ``# peak`` lines when peaks were searched."""
    fmt = fmt.lower()
    prob = p1 if sl.kind == "p1" else p2
    peak_rows = [(d, abs(prob(sl.omega_rabi, d, sl.tau_fixed) - 1.0)) for d in sl.peaks]
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("detuning_radps,p\n")
        for d, v in zip(sl.detunings, sl.values):
            buf.write(f"{_fmt(d)},{_fmt(v)}\n")
        if sl.peak_tolerance is not None:
            buf.write(f"# peaks tol={_fmt(sl.peak_tolerance)} count={len(peak_rows)}\n")
            for d, r in peak_rows:
                buf.write(f"# peak,{_fmt(d)},{_fmt(r)}\n")
        return buf.getvalue().encode("ascii")
    if fmt == "matrix":
        buf = io.StringIO()
        for d, v in zip(sl.detunings, sl.values):
            buf.write(f"{_fmt(d)} {_fmt(v)}\n")
        return buf.getvalue().encode("ascii")
    if fmt == "json":
        doc = {
            "format": "twolevel.slice",
            "format_version": 1,
            "metadata": metadata or {},
            "kind": sl.kind,
            "tau_fixed_s": sl.tau_fixed,
            "omega_rabi_radps": sl.omega_rabi,
            "detunings_radps": sl.detunings.tolist(),
            "values": sl.values.tolist(),
            "peak_tolerance": sl.peak_tolerance,
            "peaks": [{"detuning_radps": d, "residual": r} for d, r in peak_rows],
        }
        return (json.dumps(doc, allow_nan=False) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
