"""Cut-off profiles and the logarithmic weight used by peak-section bounds.

Two cut-off profiles are shipped.  The "c1" profile is piecewise quadratic
with second derivative -8 on (1/2, 3/4] and +8 on (3/4, 1); its slope jumps
at the knots t = 1/2 and t = 1 and stays in [-3, -1] on the transition, so
the sampled bounds 0 <= -eta' <= 4 and |eta''| <= 8 hold at every non-knot
point.  No globally C^1 profile with unit drop on a width-1/2 transition can
satisfy both of those bounds (the extremal slope-trapezoid argument caps the
drop at 1/2), hence the "smooth" variant: the cubic smoothstep, globally C^1
with -eta' <= 3 but |eta''| <= 24.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import ModelGeometry, metric_density

__all__ = [
    "PoleError",
    "CutoffProfile",
    "C1_PROFILE",
    "SMOOTH_PROFILE",
    "get_profile",
    "WeightParams",
    "psi",
    "HessianBoundCheck",
    "psi_hessian_bound_check",
]

TWO_PI = 2.0 * math.pi


class PoleError(ValueError):
    """The weight function has a logarithmic pole at the origin."""


class CutoffProfile:
    """A cut-off equal to 1 on [0, 1/2] and 0 on [1, inf)."""

    name: str
    d1_bound: float
    d2_bound: float
    knots: tuple[float, ...]

    def eta(self, t: float) -> float:
        raise NotImplementedError

    def eta_d1(self, t: float) -> float:
        raise NotImplementedError

    def eta_d2(self, t: float) -> float:
        raise NotImplementedError


class _PiecewiseQuadratic(CutoffProfile):
    name = "c1"
    d1_bound = 4.0
    d2_bound = 8.0
    knots = (0.5, 1.0)

    def eta(self, t: float) -> float:
        if t <= 0.5:
            return 1.0
        if t >= 1.0:
            return 0.0
        if t <= 0.75:
            u = t - 0.5
            return 1.0 - u - 4.0 * u * u
        u = 1.0 - t
        return u + 4.0 * u * u

    def eta_d1(self, t: float) -> float:
        if t <= 0.5 or t >= 1.0:
            return 0.0
        if t <= 0.75:
            return -1.0 - 8.0 * (t - 0.5)
        return -1.0 - 8.0 * (1.0 - t)

    def eta_d2(self, t: float) -> float:
        if t <= 0.5 or t >= 1.0:
            return 0.0
        return -8.0 if t <= 0.75 else 8.0


class _Smoothstep(CutoffProfile):
    name = "smooth"
    d1_bound = 4.0
    d2_bound = 24.0
    knots = (0.5, 1.0)

    def eta(self, t: float) -> float:
        if t <= 0.5:
            return 1.0
        if t >= 1.0:
            return 0.0
        s = 2.0 * (t - 0.5)
        return 1.0 - s * s * (3.0 - 2.0 * s)

    def eta_d1(self, t: float) -> float:
        if t <= 0.5 or t >= 1.0:
            return 0.0
        s = 2.0 * (t - 0.5)
        return -12.0 * s * (1.0 - s)

    def eta_d2(self, t: float) -> float:
        if t <= 0.5 or t >= 1.0:
            return 0.0
        s = 2.0 * (t - 0.5)
        return -24.0 * (1.0 - 2.0 * s)


C1_PROFILE: CutoffProfile = _PiecewiseQuadratic()
SMOOTH_PROFILE: CutoffProfile = _Smoothstep()

_PROFILES = {p.name: p for p in (C1_PROFILE, SMOOTH_PROFILE)}


def get_profile(name: str) -> CutoffProfile:
    try:
        return _PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown cut-off profile {name!r}") from None


@dataclass(frozen=True)
class WeightParams:
    """Order cap p', tensor power m, and (fixed) dimension n = 1."""

    p_prime: int
    m: int
    n: int = 1

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("tensor power m must be >= 2")
        if self.p_prime < 1:
            raise ValueError("p_prime must be a positive integer")
        if self.n != 1:
            raise ValueError("only dimension 1 is modeled")

    @property
    def degree_factor(self) -> int:
        return self.n + 2 * self.p_prime

    @property
    def meets_power_threshold(self) -> bool:
        # Advisory only; the asymptotic statements assume this but the weight
        # itself is well defined for any m >= 2.
        return self.m > math.exp(8.0 * (self.p_prime - 1 + self.n))


def _psi_of_t(params: WeightParams, t: float, profile: CutoffProfile) -> float:
    if t <= 0.0:
        raise PoleError("weight function has a logarithmic pole at z = 0")
    if t >= 1.0:
        return 0.0
    return params.degree_factor * profile.eta(t) * math.log(t)


def psi(params: WeightParams, z: complex, profile: CutoffProfile = C1_PROFILE) -> float:
    """(n + 2p') * eta(m|z|^2 / (log m)^2) * log(m|z|^2 / (log m)^2)."""
    log_m = math.log(params.m)
    t = params.m * abs(z) ** 2 / log_m**2
    return _psi_of_t(params, t, profile)


@dataclass(frozen=True)
class HessianBoundCheck:
    min_observed: float
    bound_at_min: float
    margin: float
    passed: bool
    points_checked: int


def psi_hessian_bound_check(
    params: WeightParams,
    geom: ModelGeometry,
    profile: CutoffProfile = C1_PROFILE,
    radial_points: int = 24,
    angular_points: int = 6,
    step_scale: float = 1e-3,
) -> HessianBoundCheck:
    """Check d^2 Psi / dz dzbar >= -100 m (n+2p') / (log m)^2 * g / (2 pi).

    The mixed derivative is one quarter of the 5-point Laplacian.  The bound
    is the curvature inequality written for the Kahler form convention
    omega = (i/2pi) g dz ^ dzbar; dropping the 2 pi only loosens it.  The
    grid covers the inner plateau, the transition annulus, and the outer
    region, staying clear of the logarithmic pole.
    """
    m = params.m
    log_m = math.log(m)
    coeff = -100.0 * m * params.degree_factor / log_m**2 / TWO_PI

    # eta-argument values; offsets keep stencils off the knot circles.
    t_values = [0.12, 0.25, 0.40, 1.05, 1.15, 1.30]
    for i in range(radial_points):
        t_values.append(0.52 + (0.98 - 0.52) * i / max(radial_points - 1, 1))

    min_margin = math.inf
    min_observed = math.nan
    bound_at_min = math.nan
    count = 0
    for t in t_values:
        r = log_m * math.sqrt(t / m)
        if r <= log_m / (10.0 * math.sqrt(m)):
            continue  # too close to the pole
        h = step_scale * r
        geom.require_inside(r, margin=2.0 * h)
        for j in range(angular_points):
            theta = TWO_PI * (j + 0.5) / angular_points
            x, y = r * math.cos(theta), r * math.sin(theta)

            def p(xx: float, yy: float) -> float:
                tt = m * (xx * xx + yy * yy) / log_m**2
                return _psi_of_t(params, tt, profile)

            lap = (p(x + h, y) + p(x - h, y) + p(x, y + h) + p(x, y - h) - 4.0 * p(x, y)) / (h * h)
            observed = 0.25 * lap
            bound = coeff * metric_density(geom, complex(x, y))
            margin = observed - bound
            count += 1
            if margin < min_margin:
                min_margin = margin
                min_observed = observed
                bound_at_min = bound
    return HessianBoundCheck(
        min_observed=min_observed,
        bound_at_min=bound_at_min,
        margin=min_margin,
        passed=min_margin >= 0.0,
        points_checked=count,
    )
