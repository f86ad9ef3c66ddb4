"""Physical constants, atom and laser presets, and field/intensity/Rabi conversions.

Everything internal is SI, with angular frequencies in rad/s. The display
helpers at the bottom of the module are the only place where the "MHz",
"MHz.rad" and "GHz.rad" labels used in the lab notebook style appear.

Rabi convention
---------------
``omega_nu = d * E0 / hbar`` is the bare coupling rate and
``omega = pi * omega_nu`` is the half-round angular frequency that feeds the
transition probabilities in :mod:`twolevel.dynamics`. Both numbers are
carried together in :class:`RabiValue`.
"""
from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from typing import Dict, Optional

__all__ = [
    "PhysicalConstants",
    "CODATA2018",
    "AU_DIPOLE_CM",
    "AtomPreset",
    "LaserPreset",
    "RabiValue",
    "LITHIUM",
    "ATOM_PRESETS",
    "LASER_PRESETS",
    "get_atom",
    "load_presets",
    "rabi_from_field",
    "field_from_rabi",
    "intensity_from_field",
    "field_from_intensity",
    "rabi_from_intensity",
    "intensity_from_rabi",
    "rabi_intensity_constant",
    "spontaneous_emission_time",
    "to_mhz",
    "to_mhz_rad",
    "to_ghz_rad",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants used by the conversions (SI).

    Attributes
    ----------
    hbar : float
        Reduced Planck constant [J s].
    epsilon0 : float
        Vacuum permittivity [F/m].
    c0 : float
        Speed of light in vacuum [m/s].
    """

    hbar: float
    epsilon0: float
    c0: float
    source: str = ""

    def __post_init__(self):
        for name in ("hbar", "epsilon0", "c0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value!r}")


# Frozen here rather than read from scipy.constants, whose CODATA edition
# depends on the installed scipy version.
CODATA2018 = PhysicalConstants(
    hbar=1.054571817e-34,
    epsilon0=8.8541878128e-12,
    c0=299792458.0,
    source="CODATA 2018",
)

# Atomic unit of electric dipole moment, e * a0 [C m].
AU_DIPOLE_CM = 8.4783536255e-30


@dataclass(frozen=True)
class AtomPreset:
    """Two-level transition data for a named atom.

    ``omega0`` is the transition angular frequency [rad/s], ``dipole`` the
    transition dipole moment [C m] and ``fine_splitting`` an optional
    fine-structure splitting of the upper level [rad/s].
    """

    name: str
    omega0: float
    dipole: float
    fine_splitting: Optional[float] = None
    notes: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError(f"omega0 must be finite and positive, got {self.omega0!r}")
        if not (math.isfinite(self.dipole) and self.dipole > 0):
            raise ValueError(f"dipole must be finite and positive, got {self.dipole!r}")
        if self.fine_splitting is not None and not (
            math.isfinite(self.fine_splitting) and self.fine_splitting >= 0
        ):
            raise ValueError("fine_splitting must be finite and non-negative")

    @classmethod
    def from_atomic_units(cls, name, omega0, dipole_au, **kwargs):
        """Build a preset from a dipole given in atomic units (e a0)."""
        return cls(name=name, omega0=omega0, dipole=dipole_au * AU_DIPOLE_CM, **kwargs)

    @property
    def dipole_au(self) -> float:
        return self.dipole / AU_DIPOLE_CM


@dataclass(frozen=True)
class LaserPreset:
    """Instrument figures of merit for a laser source. Data only.

    Units: ``linewidth`` Hz, ``drift_rate`` Hz/hour, ``temp_sensitivity``
    Hz/degC, ``power`` W. Unknown figures are ``None``.
    """

    name: str
    linewidth: Optional[float] = None
    drift_rate: Optional[float] = None
    temp_sensitivity: Optional[float] = None
    power: Optional[float] = None
    notes: str = ""

    def __post_init__(self):
        for name in ("linewidth", "drift_rate", "temp_sensitivity", "power"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")


@dataclass(frozen=True)
class RabiValue:
    """Rabi frequency in both conventions.

    Attributes
    ----------
    omega : float
        Half-round angular Rabi frequency [rad/s], ``pi * omega_nu``.
    omega_nu : float
        Bare coupling rate ``d * E0 / hbar`` [1/s].
    """

    omega: float
    omega_nu: float
    convention: str = field(default="omega = pi * omega_nu", compare=False)

    @classmethod
    def from_omega_nu(cls, omega_nu: float) -> "RabiValue":
        return cls(omega=math.pi * omega_nu, omega_nu=omega_nu)

    @classmethod
    def from_omega(cls, omega: float) -> "RabiValue":
        return cls(omega=omega, omega_nu=omega / math.pi)


LITHIUM = AtomPreset(
    name="lithium",
    omega0=2.0 * math.pi * 4.468e14,
    dipole=1.988e-29,
    fine_splitting=2.0 * math.pi * 10e9,
    notes="2S-2P transition; d21 = 2.3452 a.u.; 2P1/2-2P3/2 splitting ~ (2 pi) 10 GHz",
)

ATOM_PRESETS: Dict[str, AtomPreset] = {LITHIUM.name: LITHIUM}

LASER_PRESETS: Dict[str, LaserPreset] = {
    "coherent-899-21": LaserPreset(
        name="coherent-899-21",
        linewidth=500e3,
        drift_rate=50e6,
        notes="dye laser with temperature-stabilised reference cell",
    ),
    "spectra-physics-375d": LaserPreset(
        name="spectra-physics-375d",
        temp_sensitivity=90e6,
        notes="broadband dye laser, quartz rod resonator, single-mode procedure; "
        "410 MHz/degC through the refractive index of air",
    ),
    "new-focus-6202": LaserPreset(
        name="new-focus-6202",
        linewidth=100e3,
        power=6e-3,
        notes="diode laser",
    ),
    "eosi-diode": LaserPreset(
        name="eosi-diode",
        linewidth=100e3,
        power=6e-3,
        notes="diode laser",
    ),
}


def get_atom(name: str, extra: Optional[Dict[str, AtomPreset]] = None) -> AtomPreset:
    """Look up an atom preset by case-insensitive name.

    Raises
    ------
    KeyError
        If no preset with that name exists.
    """
    table = dict(ATOM_PRESETS)
    if extra:
        table.update(extra)
    key = name.strip().lower()
    if key not in table:
        raise KeyError(f"unknown atom preset {name!r}; known: {', '.join(sorted(table))}")
    return table[key]


def load_presets(path) -> Dict[str, AtomPreset]:
    """Read atom presets from an INI-style key/value file.

    Each section describes one atom::

        [sodium]
        omega0_rad_s = 3.1977e15
        dipole_Cm = 2.1e-29
        fine_splitting_rad_s = 3.24e12   ; optional
        notes = D2 line                    ; optional

    A ``name`` key overrides the section title. Names are lower-cased.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    with open(os.fspath(path), encoding="utf-8") as fh:
        parser.read_file(fh)
    presets = {}
    for section in parser.sections():
        sec = parser[section]
        try:
            omega0 = float(sec["omega0_rad_s"])
            dipole = float(sec["dipole_Cm"])
        except KeyError as exc:
            raise ValueError(f"preset [{section}] is missing key {exc.args[0]!r}") from None
        fine = sec.get("fine_splitting_rad_s")
        name = sec.get("name", section).strip().lower()
        presets[name] = AtomPreset(
            name=name,
            omega0=omega0,
            dipole=dipole,
            fine_splitting=float(fine) if fine not in (None, "") else None,
            notes=sec.get("notes", ""),
        )
    return presets


def _check_nonneg(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return value


def rabi_from_field(preset: AtomPreset, e0: float, constants: PhysicalConstants = CODATA2018) -> RabiValue:
    """Rabi frequency for a field amplitude ``e0`` [V/m]."""
    e0 = _check_nonneg("e0", e0)
    return RabiValue.from_omega_nu(preset.dipole * e0 / constants.hbar)


def field_from_rabi(preset: AtomPreset, rabi: RabiValue, constants: PhysicalConstants = CODATA2018) -> float:
    """Field amplitude [V/m] producing ``rabi``."""
    omega_nu = _check_nonneg("omega_nu", rabi.omega_nu)
    return omega_nu * constants.hbar / preset.dipole


def intensity_from_field(e0: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Cycle-averaged intensity ``eps0 c E0^2 / 2`` [W/m^2]."""
    e0 = _check_nonneg("e0", e0)
    return 0.5 * constants.epsilon0 * constants.c0 * e0 * e0


def field_from_intensity(intensity: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Inverse of :func:`intensity_from_field`."""
    intensity = _check_nonneg("intensity", intensity)
    return math.sqrt(2.0 * intensity / (constants.epsilon0 * constants.c0))


def rabi_intensity_constant(preset: AtomPreset, constants: PhysicalConstants = CODATA2018) -> float:
    """``K`` in ``omega_nu = K sqrt(I)``, i.e. ``(d/hbar) sqrt(2/(eps0 c))``."""
    return (preset.dipole / constants.hbar) * math.sqrt(2.0 / (constants.epsilon0 * constants.c0))


def rabi_from_intensity(preset: AtomPreset, intensity: float, constants: PhysicalConstants = CODATA2018) -> RabiValue:
    """Rabi frequency for a cw intensity [W/m^2]; scales as ``sqrt(I)``."""
    intensity = _check_nonneg("intensity", intensity)
    return RabiValue.from_omega_nu(rabi_intensity_constant(preset, constants) * math.sqrt(intensity))


def intensity_from_rabi(preset: AtomPreset, rabi: RabiValue, constants: PhysicalConstants = CODATA2018) -> float:
    return intensity_from_field(field_from_rabi(preset, rabi, constants), constants)


def spontaneous_emission_time(preset: AtomPreset, constants: PhysicalConstants = CODATA2018) -> float:
    """Radiative lifetime ``3 pi hbar eps0 c^3 / (omega0^3 d^2)`` [s].

    Raises
    ------
    ValueError
        For a zero dipole (infinite lifetime) or zero transition frequency.
    """
    if preset.dipole <= 0:
        raise ValueError("zero dipole moment: the spontaneous emission time is infinite")
    if preset.omega0 <= 0:
        raise ValueError("transition frequency must be positive")
    num = 3.0 * math.pi * constants.hbar * constants.epsilon0 * constants.c0**3
    return num / (preset.omega0**3 * preset.dipole**2)


# Display helpers. Values go in SI, numbers come out scaled for labels.

def to_mhz(rate: float) -> float:
    """A rate in 1/s expressed in units of 1e6 1/s ("MHz" in the lab labels)."""
    return rate / 1e6


def to_mhz_rad(omega: float) -> float:
    return omega / 1e6


def to_ghz_rad(omega: float) -> float:
    return omega / 1e9
