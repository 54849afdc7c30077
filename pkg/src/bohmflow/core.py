"""Shared value types: physical constants bundle, grids, time windows, fields.

Everything downstream (kernels, Bohmian integration, flows) speaks in terms of
these small frozen containers, so validation happens once at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "SystemConfig",
    "SpatialGrid",
    "TimeWindow",
    "ComplexField",
    "l2_distance",
]

#: Minimum number of grid points a SpatialGrid will accept.
MIN_GRID_POINTS = 8


@dataclass(frozen=True)
class SystemConfig:
    """Physical constants of the problem: hbar and the per-dof masses.

    Masses are per degree of freedom; a single particle in 2D with mass m is
    ``masses=(m, m)``.
    """

    hbar: float = 1.0
    masses: tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        if not self.hbar > 0.0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if len(self.masses) == 0:
            raise ValueError("masses must contain at least one entry")
        if any(not m > 0.0 for m in self.masses):
            raise ValueError(f"all masses must be positive, got {self.masses}")
        # normalize to a plain tuple of floats so configs hash/compare cleanly
        object.__setattr__(self, "masses", tuple(float(m) for m in self.masses))

    @property
    def dof(self) -> int:
        return len(self.masses)

    @property
    def mass(self) -> float:
        """Mass of the single degree of freedom (errors if there are several)."""
        if self.dof != 1:
            raise ValueError(f"mass is ambiguous for dof={self.dof}; use mass_array")
        return self.masses[0]

    @property
    def mass_array(self) -> np.ndarray:
        return np.asarray(self.masses, dtype=float)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform 1D grid on [x_min, x_max] with n points (endpoints included)."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if not self.x_max > self.x_min:
            raise ValueError(
                f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]"
            )
        if self.n < MIN_GRID_POINTS:
            raise ValueError(f"need at least {MIN_GRID_POINTS} grid points, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        x = np.linspace(self.x_min, self.x_max, self.n)
        x.flags.writeable = False
        return x

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


@dataclass(frozen=True)
class TimeWindow:
    """Forward time interval [t_start, t_end] divided into n_slices equal steps."""

    t_start: float
    t_end: float
    n_slices: int = 1

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError(
                f"t_end must exceed t_start, got [{self.t_start}, {self.t_end}]"
            )
        if self.n_slices < 1:
            raise ValueError(f"n_slices must be >= 1, got {self.n_slices}")

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def dt(self) -> float:
        return self.duration / self.n_slices

    @cached_property
    def edges(self) -> np.ndarray:
        t = np.linspace(self.t_start, self.t_end, self.n_slices + 1)
        t.flags.writeable = False
        return t


class ComplexField:
    """A complex-valued function sampled on a SpatialGrid.

    Wraps the raw array so norms, normalization and distances always use the
    same trapezoid quadrature as the rest of the package.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: SpatialGrid, values: np.ndarray):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n,):
            raise ValueError(
                f"field shape {values.shape} does not match grid with {grid.n} points"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        self.grid = grid
        self.values = values

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy())

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        """L2 norm, sqrt of the trapezoid integral of |psi|^2."""
        return float(np.sqrt(np.trapezoid(self.density(), dx=self.grid.dx)))

    def normalized(self) -> "ComplexField":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize an identically zero field")
        return ComplexField(self.grid, self.values / n)

    def inner(self, other: "ComplexField") -> complex:
        """L2 inner product <self|other> (conjugate-linear in self)."""
        _require_same_grid(self, other)
        return complex(
            np.trapezoid(np.conj(self.values) * other.values, dx=self.grid.dx)
        )


def _require_same_grid(a: ComplexField, b: ComplexField) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def l2_distance(a: ComplexField, b: ComplexField) -> float:
    """L2 distance between two fields on the same grid."""
    _require_same_grid(a, b)
    diff = np.abs(a.values - b.values) ** 2
    return float(np.sqrt(np.trapezoid(diff, dx=a.grid.dx)))
