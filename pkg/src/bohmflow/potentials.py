"""Potential energy functions and their straight-line averages.

All potentials act elementwise on coordinate arrays; a multi-dof potential is
understood as the separable sum V(x) = sum_j V(x_j), which covers the free,
isotropic harmonic and quartic cases used throughout. ``AveragedPotential``
implements the line average

    Vbar(x, x0) = integral_0^1 V(tau*x + (1-tau)*x0) dtau

by fixed-order Gauss-Legendre quadrature (exact for polynomial potentials up
to degree 2*n_nodes - 1, so harmonic and quartic are averaged exactly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "Potential",
    "Free",
    "Harmonic",
    "Quartic",
    "Tabulated",
    "AveragedPotential",
]


class Potential:
    """Base class: scalar potential with value and gradient, elementwise."""

    name = "potential"

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.value(x)

    def total(self, x) -> float:
        """V at a configuration point (sum over dof of the separable terms)."""
        return float(np.sum(self.value(np.asarray(x, dtype=float))))

    def is_quadratic(self) -> bool:
        """True when V is at most quadratic (free/harmonic)."""
        return False


@dataclass(frozen=True)
class Free(Potential):
    """V(x) = 0."""

    name = "free"

    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def gradient(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def is_quadratic(self) -> bool:
        return True


@dataclass(frozen=True)
class Harmonic(Potential):
    """V(x) = 1/2 m omega^2 x^2."""

    mass: float = 1.0
    omega: float = 1.0
    name = "harmonic"

    def __post_init__(self) -> None:
        if self.mass <= 0.0 or self.omega <= 0.0:
            raise ValueError("harmonic potential needs mass > 0 and omega > 0")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.mass * self.omega**2 * x**2

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return self.mass * self.omega**2 * x

    def is_quadratic(self) -> bool:
        return True


@dataclass(frozen=True)
class Quartic(Potential):
    """V(x) = c x^4."""

    c: float = 1.0
    name = "quartic"

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.c * x**4

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return 4.0 * self.c * x**3


class Tabulated(Potential):
    """Cubic-spline interpolation of sampled potential values.

    Evaluation outside [nodes[0], nodes[-1]] raises: extrapolated splines are
    silently wrong in exactly the regime where kernels are most sensitive.
    """

    name = "tabulated"

    def __init__(self, nodes, values):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.ndim != 1 or nodes.size < 4:
            raise ValueError("need at least 4 tabulation nodes")
        if nodes.shape != values.shape:
            raise ValueError("nodes and values must have matching shapes")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("tabulation nodes must be strictly increasing")
        self.nodes = nodes
        self.values_table = values
        self._spline = CubicSpline(nodes, values)
        self._deriv = self._spline.derivative()

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])

    def _check_domain(self, x) -> None:
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        if np.any(x < lo) or np.any(x > hi):
            raise ValueError(
                f"tabulated potential evaluated outside its domain [{lo}, {hi}]"
            )

    def value(self, x):
        self._check_domain(x)
        return self._spline(np.asarray(x, dtype=float))

    def gradient(self, x):
        self._check_domain(x)
        return self._deriv(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class AveragedPotential:
    """Straight-line average of a potential between two configurations.

    value(x, x0) and the partial gradient in the endpoint x,

        d/dx Vbar(x, x0) = integral_0^1 tau * V'(tau*x + (1-tau)*x0) dtau,

    both evaluated with a shared Gauss-Legendre rule on [0, 1]. At coincidence
    the gradient reduces to V'(x)/2 (the half-gradient law) exactly, because
    the rule integrates tau itself exactly.
    """

    potential: Potential
    n_nodes: int = 16
    _taus: np.ndarray = field(init=False, repr=False, compare=False)
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_nodes < 8:
            raise ValueError(f"need at least 8 quadrature nodes, got {self.n_nodes}")
        xi, w = np.polynomial.legendre.leggauss(self.n_nodes)
        # map [-1, 1] -> [0, 1]; weights then sum to 1
        object.__setattr__(self, "_taus", 0.5 * (xi + 1.0))
        object.__setattr__(self, "_weights", 0.5 * w)

    def _segment_points(self, tau: float, x, x0):
        return tau * np.asarray(x, dtype=float) + (1.0 - tau) * np.asarray(x0, dtype=float)

    def value(self, x, x0):
        """Line-averaged potential Vbar(x, x0), broadcasting over x and x0."""
        x = np.asarray(x, dtype=float)
        x0 = np.asarray(x0, dtype=float)
        acc = None
        for tau, w in zip(self._taus, self._weights):
            term = w * self.potential.value(self._segment_points(tau, x, x0))
            acc = term if acc is None else acc + term
        if acc.ndim == 0:
            return float(acc)
        return acc

    def gradient_x(self, x, x0):
        """Partial derivative of Vbar with respect to the endpoint x."""
        x = np.asarray(x, dtype=float)
        x0 = np.asarray(x0, dtype=float)
        acc = None
        for tau, w in zip(self._taus, self._weights):
            term = w * tau * self.potential.gradient(self._segment_points(tau, x, x0))
            acc = term if acc is None else acc + term
        if acc.ndim == 0:
            return float(acc)
        return acc
