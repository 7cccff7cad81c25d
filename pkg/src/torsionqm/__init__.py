"""Schroedinger dynamics on a lattice with screw dislocations.

First-order torsion corrections for plane waves and Gaussian packets, the
double-slit screen pattern they produce, probability bookkeeping with a point
mass at the defect, and numerical oracles for every closed form.
"""

from .errors import (
    ConfigError,
    DomainError,
    GridMismatchError,
    NonConvergenceError,
    PairingError,
    PathThroughDefectError,
    SingularPointError,
    ToleranceNotMetError,
    TorsionQMError,
    ZeroWaveVectorError,
)
from .geometry import DefectSet, FrameField
from .interference import IntensityProfile, SlitExperiment
from .wavefunction import AuxiliaryAlphaBeta, PacketParams, SpacetimePoint

__version__ = "0.1.0"

__all__ = [
    "AuxiliaryAlphaBeta",
    "ConfigError",
    "DefectSet",
    "DomainError",
    "FrameField",
    "GridMismatchError",
    "IntensityProfile",
    "NonConvergenceError",
    "PacketParams",
    "PairingError",
    "PathThroughDefectError",
    "SingularPointError",
    "SlitExperiment",
    "SpacetimePoint",
    "ToleranceNotMetError",
    "TorsionQMError",
    "ZeroWaveVectorError",
]
