"""Constant-curvature local model: metric density g and bundle weight a.

The model lives on a coordinate disk centered at the base point.  Both g and
a are rotationally symmetric, normalized to 1 at the center, and satisfy
Delta log g = -rho and -d^2(log a)/dz dzbar = g.  For rho < 0 the model is
only valid on |z| < sqrt(2/|rho|); for rho >= 0 it is entire.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "ModelGeometry",
    "metric_density",
    "bundle_weight",
    "log_metric_density",
    "log_bundle_weight",
    "curvature_residual",
    "polar_ode_residual",
    "k_coordinate_check",
    "default_step",
]


class DomainError(ValueError):
    """A point (or its finite-difference stencil) leaves the model disk."""


@dataclass(frozen=True)
class ModelGeometry:
    """Curvature parameter plus an optional user cap on the disk radius.

    ``radius_cap`` stands in for an externally known injectivity radius; the
    model itself cannot compute one.
    """

    rho: float
    radius_cap: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.rho):
            raise ValueError("curvature must be finite")
        if self.radius_cap is not None and not self.radius_cap > 0:
            raise ValueError("radius_cap must be positive")

    @property
    def max_radius(self) -> float:
        if self.rho < 0:
            natural = math.sqrt(-2.0 / self.rho)
        else:
            natural = math.inf
        if self.radius_cap is None:
            return natural
        return min(natural, self.radius_cap)

    def require_inside(self, r: float, margin: float = 0.0) -> None:
        if r < 0 or not r + margin < self.max_radius:
            raise DomainError(
                f"radius {r!r} (+{margin!r}) outside model disk of radius "
                f"{self.max_radius!r}"
            )


def default_step(scale: float) -> float:
    """Default finite-difference step: 1e-3 * max(1, scale)."""
    return 1e-3 * max(1.0, abs(scale))


def log_metric_density(geom: ModelGeometry, r: float) -> float:
    """log g at radius r; g = (1 + rho r^2 / 2)^(-2), identically 1 at rho=0."""
    geom.require_inside(r)
    if geom.rho == 0.0:
        return 0.0
    return -2.0 * math.log1p(0.5 * geom.rho * r * r)


def log_bundle_weight(geom: ModelGeometry, r: float) -> float:
    """log a at radius r; a = (1 + rho r^2 / 2)^(-2/rho), e^(-r^2) at rho=0."""
    geom.require_inside(r)
    if geom.rho == 0.0:
        return -r * r
    return (-2.0 / geom.rho) * math.log1p(0.5 * geom.rho * r * r)


def metric_density(geom: ModelGeometry, z: complex) -> float:
    return math.exp(log_metric_density(geom, abs(z)))


def bundle_weight(geom: ModelGeometry, z: complex) -> float:
    return math.exp(log_bundle_weight(geom, abs(z)))


def _log_g_xy(geom: ModelGeometry, x: float, y: float) -> float:
    if geom.rho == 0.0:
        return 0.0
    return -2.0 * math.log1p(0.5 * geom.rho * (x * x + y * y))


def curvature_residual(geom: ModelGeometry, z: complex, h: float | None = None) -> float:
    """Finite-difference residual of g^-1 d^2(log g)/dz dzbar + rho.

    The mixed Wirtinger derivative is taken as one quarter of the Euclidean
    Laplacian, evaluated with the standard 5-point stencil; the residual
    vanishes at rate O(h^2) for the exact model metric.
    """
    if h is None:
        h = default_step(abs(z))
    if h <= 0:
        raise ValueError("step must be positive")
    geom.require_inside(abs(z), margin=h * math.sqrt(2.0))
    x, y = z.real, z.imag
    lap = (
        _log_g_xy(geom, x + h, y)
        + _log_g_xy(geom, x - h, y)
        + _log_g_xy(geom, x, y + h)
        + _log_g_xy(geom, x, y - h)
        - 4.0 * _log_g_xy(geom, x, y)
    ) / (h * h)
    return 0.25 * lap / metric_density(geom, z) + geom.rho


def polar_ode_residual(geom: ModelGeometry, r: float, h: float | None = None) -> float:
    """Finite-difference residual of g'' + g'/r - (g')^2/g + 4 rho g^2."""
    if h is None:
        h = default_step(r)
    if h <= 0:
        raise ValueError("step must be positive")
    if r - h <= 0:
        raise DomainError("stencil crosses r = 0")
    geom.require_inside(r, margin=h)
    gm = math.exp(log_metric_density(geom, r - h))
    g0 = math.exp(log_metric_density(geom, r))
    gp = math.exp(log_metric_density(geom, r + h))
    d1 = (gp - gm) / (2.0 * h)
    d2 = (gp - 2.0 * g0 + gm) / (h * h)
    return d2 + d1 / r - d1 * d1 / g0 + 4.0 * geom.rho * g0 * g0


def k_coordinate_check(
    geom: ModelGeometry, order: int, step: float = 1e-2, samples: int = 64
) -> list[float]:
    """Magnitudes of the pure holomorphic derivatives of g and a at 0.

    Estimated from the angular Fourier coefficients of each field on the
    circle |z| = step: the frequency-p coefficient equals the p-th pure
    derivative times step^p / p! up to higher-order radial corrections.  Both
    fields are radial, so every magnitude must vanish to sampling accuracy.
    """
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    geom.require_inside(step)
    angles = 2.0 * math.pi * np.arange(samples) / samples
    pts = step * np.exp(1j * angles)
    out: list[float] = []
    for field in (metric_density, bundle_weight):
        vals = np.array([field(geom, z) for z in pts])
        coeffs = np.fft.fft(vals) / samples
        for p in range(1, order + 1):
            out.append(abs(coeffs[p]) * math.factorial(p) / step**p)
    return out
