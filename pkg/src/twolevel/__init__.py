"""Two-level atom transition probabilities, lifetime statistics and PTF surfaces."""
__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .dynamics import (  # noqa: E402
    DimensionlessPoint,
    DriveKind,
    DriveSpec,
    p1,
    p1_dimensionless,
    p1_envelope,
    p2,
    p2_dimensionless,
)
from .lifetime import lifetime_constants, solve_fixed_point  # noqa: E402
from .physcore import LITHIUM, spontaneous_emission_time  # noqa: E402

__all__ = [
    "BACKEND",
    "DimensionlessPoint",
    "DriveKind",
    "DriveSpec",
    "LITHIUM",
    "lifetime_constants",
    "p1",
    "p1_dimensionless",
    "p1_envelope",
    "p2",
    "p2_dimensionless",
    "solve_fixed_point",
    "spontaneous_emission_time",
]
