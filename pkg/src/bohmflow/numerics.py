"""Basic numerical building blocks: quadrature, stencils, order fits.

These are deliberately boring; every physics module routes through them so the
discretization conventions (trapezoid weights, 2nd-order stencils, edge
handling) live in exactly one place.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "EDGE_POINTS",
    "trapezoid_integral",
    "finite_difference",
    "fit_convergence_order",
    "unwrap_phase",
]

#: Number of points per boundary that derivative-based diagnostics should
#: exclude: the one-sided stencils there are 2nd order but noticeably noisier.
EDGE_POINTS = 2


def trapezoid_integral(values, x=None, dx: float = 1.0) -> complex:
    """Trapezoid-rule integral of sampled values (complex-safe).

    Parameters
    ----------
    values : array_like
        Samples of the integrand, length >= 2.
    x : array_like, optional
        Sample locations. If omitted, uniform spacing ``dx`` is assumed.
    dx : float
        Uniform spacing, used only when ``x`` is None.

    Returns
    -------
    complex
        The integral. Exact for integrands affine in x.
    """
    values = np.asarray(values)
    if values.ndim != 1 or values.size < 2:
        raise ValueError("need a 1D array with at least 2 samples")
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand contains non-finite samples")
    if x is not None:
        x = np.asarray(x, dtype=float)
        if x.shape != values.shape:
            raise ValueError("x and values must have the same shape")
        return complex(np.trapezoid(values, x=x))
    return complex(np.trapezoid(values, dx=dx))


def finite_difference(values, dx: float, order: int = 1) -> np.ndarray:
    """First or second derivative of uniformly sampled values.

    Central 2nd-order stencils in the interior; one-sided 2nd-order stencils
    at the two boundary points, so the returned array has the same length as
    the input. Both stencil families are exact on quadratics.

    Parameters
    ----------
    values : array_like
        Samples on a uniform grid (real or complex).
    dx : float
        Grid spacing, > 0.
    order : int
        1 for d/dx, 2 for d^2/dx^2.
    """
    f = np.asarray(values)
    if dx <= 0.0:
        raise ValueError(f"dx must be positive, got {dx}")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if f.ndim != 1 or f.size < 4:
        raise ValueError("need a 1D array with at least 4 samples")

    out = np.empty_like(f, dtype=complex if np.iscomplexobj(f) else float)
    if order == 1:
        out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
    else:
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / dx**2
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dx**2
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / dx**2
    return out


def fit_convergence_order(h_values, errors) -> float:
    """Least-squares slope of log(error) against log(h).

    Parameters
    ----------
    h_values : array_like
        Step sizes / mesh widths, all > 0, at least 3 of them.
    errors : array_like
        Error measurements at each h.

    Returns
    -------
    float
        Fitted order. Returns ``math.inf`` when any error is <= 0, which
        signals exact agreement (there is no slope left to measure).
    """
    h = np.asarray(h_values, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.shape != e.shape or h.ndim != 1:
        raise ValueError("h_values and errors must be 1D arrays of equal length")
    if h.size < 3:
        raise ValueError(f"need at least 3 samples to fit an order, got {h.size}")
    if np.any(h <= 0.0):
        raise ValueError("all h values must be positive")
    if np.any(e <= 0.0):
        return math.inf
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


def unwrap_phase(angles, anchor: int = 0) -> np.ndarray:
    """Unwrap a sampled phase by 2*pi jumps, scanning outward from ``anchor``.

    Unlike a plain left-to-right unwrap, anchoring at (say) the density maximum
    keeps noisy low-amplitude edges from corrupting the bulk phase. Jumps of
    magnitude up to pi (genuine node crossings) are preserved.
    """
    a = np.asarray(angles, dtype=float)
    if a.ndim != 1:
        raise ValueError("angles must be a 1D array")
    if not 0 <= anchor < a.size:
        raise ValueError(f"anchor {anchor} outside array of length {a.size}")
    out = np.empty_like(a)
    out[anchor:] = np.unwrap(a[anchor:])
    out[: anchor + 1] = np.unwrap(a[anchor::-1])[::-1]
    return out
