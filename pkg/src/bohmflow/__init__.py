"""bohmflow: short-time quantum propagators, Bohmian trajectories, and
measurement-driven classicalization on a line.

The heavy lifting lives in the submodules; this namespace re-exports the
handful of types that almost every caller needs.
"""

from .core import ComplexField, SpatialGrid, SystemConfig, TimeWindow, l2_distance
from .gaussian import GaussianWavepacket, coherent_width
from .potentials import AveragedPotential, Free, Harmonic, Quartic, Tabulated

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ComplexField",
    "SpatialGrid",
    "SystemConfig",
    "TimeWindow",
    "l2_distance",
    "GaussianWavepacket",
    "coherent_width",
    "AveragedPotential",
    "Free",
    "Harmonic",
    "Quartic",
    "Tabulated",
]
