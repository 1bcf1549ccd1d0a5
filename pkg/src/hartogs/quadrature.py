"""Trapezoid quadrature on circles and winding numbers."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import NonFinite, NotConverged, OnBoundary
from .geometry import Circle, Contour

__all__ = [
    "DEFAULT_NODE_CAP",
    "DEFAULT_TOL",
    "START_NODES",
    "QuadratureResult",
    "integrate_contour",
    "trapezoid_circle",
    "trapezoid_circle_mp",
    "trapezoid_contour",
    "winding_number",
]

DEFAULT_TOL = 1e-10
DEFAULT_NODE_CAP = 1 << 14
START_NODES = 64

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: np.ndarray
    est_error: float
    nodes_used: int
    converged: bool

    @property
    def scalar(self) -> complex:
        return complex(self.value[0])


def _evaluate(integrand: Integrand, zeta: np.ndarray) -> np.ndarray:
    vals = np.asarray(integrand(zeta), dtype=complex)
    if vals.ndim == 1:
        vals = vals[:, None]
    if not np.all(np.isfinite(vals)):
        bad = zeta[~np.all(np.isfinite(vals), axis=1)][0]
        raise NonFinite(f"integrand is not finite at zeta = {bad:.6g}")
    return vals


def _circle_sum(integrand: Integrand, circle: Circle, n: int, offset: bool) -> np.ndarray:
    """Sum of f(zeta_k) (zeta_k - c) over n equispaced nodes (odd half-steps if offset)."""
    k = np.arange(n) + (0.5 if offset else 0.0)
    w = circle.radius * np.exp(2j * np.pi * k / n)
    vals = _evaluate(integrand, circle.center + w)
    return (vals * w[:, None]).sum(axis=0)


def _scale(total: np.ndarray, circle: Circle, n: int) -> np.ndarray:
    # dζ = i (ζ - c) dθ and dθ = 2π/n
    return circle.orientation * 1j * (2 * np.pi / n) * total


def trapezoid_circle(integrand: Integrand, circle: Circle, n: int) -> np.ndarray:
    """Fixed n-node trapezoid approximation of the contour integral over one circle."""
    return _scale(_circle_sum(integrand, circle, n, False), circle, n)


def trapezoid_contour(integrand: Integrand, contour: Contour, n: int) -> np.ndarray:
    return sum(trapezoid_circle(integrand, c, n) for c in contour.curves)


def trapezoid_circle_mp(integrand: Callable, center: complex, radius: float, n: int, dps: int = 60):
    """Same rule in mpmath arithmetic; used to measure truncation error below double roundoff."""
    import mpmath

    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        c = mpmath.mpc(center)
        for k in range(n):
            w = radius * mpmath.expjpi(mpmath.mpf(2 * k) / n)
            total += integrand(c + w) * w
        return 1j * 2 * mpmath.pi / n * total


def integrate_contour(
    integrand: Integrand,
    contour: Contour,
    tol: float = DEFAULT_TOL,
    node_cap: int = DEFAULT_NODE_CAP,
    start_nodes: int = START_NODES,
) -> QuadratureResult:
    """Trapezoid rule per circle, doubling node counts until two levels agree.

    The integrand maps a 1-D array of nodes to an ``(N,)`` or ``(N, m)`` array.
    Nodes are nested across levels, so each doubling only evaluates the new
    half.  Hitting ``node_cap`` returns a result with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = min(start_nodes, node_cap)
    sums = [_circle_sum(integrand, c, n, False) for c in contour.curves]
    value = sum(_scale(s, c, n) for s, c in zip(sums, contour.curves))
    est = math.inf
    while n < node_cap:
        sums = [s + _circle_sum(integrand, c, n, True) for s, c in zip(sums, contour.curves)]
        n *= 2
        new = sum(_scale(s, c, n) for s, c in zip(sums, contour.curves))
        est = float(np.max(np.abs(new - value)))
        value = new
        if est <= tol:
            break
    return QuadratureResult(np.atleast_1d(value), est, n * len(contour.curves), est <= tol)


def winding_number(contour: Contour, z: complex, delta: float = 1e-9) -> int:
    """Index of ``z`` with respect to the contour, from the Cauchy integral of 1/(ζ - z)."""
    for c in contour.curves:
        if abs(abs(z - c.center) - c.radius) < delta:
            raise OnBoundary(f"{z} lies within {delta} of a contour circle")
    res = integrate_contour(lambda s: 1.0 / (s - z), contour)
    idx = res.scalar / (2j * np.pi)
    k = round(idx.real)
    if abs(idx - k) > 0.01:
        raise NotConverged(f"winding number residual {abs(idx - k):.3g} exceeds 0.01", res)
    return int(k)
