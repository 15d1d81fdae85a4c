import math

import pytest
from hypothesis import given, strategies as st

from bergmanlab.geometry import (
    DomainError,
    ModelGeometry,
    bundle_weight,
    curvature_residual,
    default_step,
    k_coordinate_check,
    metric_density,
    polar_ode_residual,
)

HYPERBOLIC = ModelGeometry(-2.0)
FLAT = ModelGeometry(0.0)
SPHERE = ModelGeometry(2.0)


def test_metric_density_examples():
    assert metric_density(HYPERBOLIC, 0j) == 1.0
    assert metric_density(FLAT, 0.5) == 1.0
    assert metric_density(SPHERE, 1j) == pytest.approx(0.25, rel=1e-15)


def test_bundle_weight_examples():
    for geom in (HYPERBOLIC, FLAT, SPHERE):
        assert bundle_weight(geom, 0j) == 1.0
    assert bundle_weight(FLAT, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert bundle_weight(SPHERE, 1.0) == pytest.approx(0.5, rel=1e-15)


def test_max_radius():
    assert HYPERBOLIC.max_radius == 1.0
    assert FLAT.max_radius == math.inf
    assert SPHERE.max_radius == math.inf
    assert ModelGeometry(-0.5).max_radius == 2.0
    assert ModelGeometry(2.0, radius_cap=0.3).max_radius == 0.3


def test_domain_errors():
    with pytest.raises(DomainError):
        metric_density(HYPERBOLIC, 1.0)
    with pytest.raises(DomainError):
        bundle_weight(HYPERBOLIC, 1.2j)
    with pytest.raises(DomainError):
        curvature_residual(HYPERBOLIC, 0.9999, 1e-3)


def test_bundle_weight_continuous_in_rho():
    for r in (0.2, 0.7, 1.3):
        near_flat = bundle_weight(ModelGeometry(1e-9), r)
        assert near_flat == pytest.approx(math.exp(-r * r), rel=1e-8)


@given(
    st.floats(min_value=0.01, max_value=0.9),
    st.floats(min_value=0.0, max_value=2.0 * math.pi),
    st.sampled_from([-2.0, -1.0, 0.0, 2.0]),
)
def test_rotation_invariance(r, theta, rho):
    geom = ModelGeometry(rho)
    z = r * complex(math.cos(theta), math.sin(theta))
    assert metric_density(geom, z) == pytest.approx(metric_density(geom, r), rel=1e-14)
    assert bundle_weight(geom, z) == pytest.approx(bundle_weight(geom, r), rel=1e-14)


@pytest.mark.parametrize("rho", [-2.0, -1.0, 0.0, 2.0])
def test_log_weight_hessian_equals_metric(rho):
    # -d^2(log a)/dz dzbar = g, checked by 5-point finite differences.
    geom = ModelGeometry(rho)
    h = 1e-4
    for z in (0.1 + 0.2j, 0.35 - 0.1j, -0.4 + 0.3j):

        def la(x, y):
            return math.log(bundle_weight(geom, complex(x, y)))

        x, y = z.real, z.imag
        lap = (la(x + h, y) + la(x - h, y) + la(x, y + h) + la(x, y - h) - 4 * la(x, y)) / h**2
        assert -0.25 * lap == pytest.approx(metric_density(geom, z), abs=1e-6)


def test_curvature_residual_flat_exact():
    assert curvature_residual(FLAT, 0.3, 1e-3) == 0.0


@pytest.mark.parametrize("rho", [-2.0, 2.0])
def test_curvature_residual_small(rho):
    geom = ModelGeometry(rho)
    assert abs(curvature_residual(geom, 0.2, 1e-3)) <= 1e-5


def test_polar_ode_residual():
    assert abs(polar_ode_residual(SPHERE, 0.5, 1e-3)) <= 1e-5
    # rho < 0 has a larger finite-difference floor at this step size.
    assert abs(polar_ode_residual(HYPERBOLIC, 0.3, 1e-3)) <= 1e-4


@pytest.mark.parametrize("rho", [-2.0, 2.0])
def test_residual_second_order_decay(rho):
    geom = ModelGeometry(rho)
    pts = [0.15 + 0.3j, 0.4 - 0.2j, -0.25 - 0.35j]
    coarse = max(abs(curvature_residual(geom, z, 1e-3)) for z in pts)
    fine = max(abs(curvature_residual(geom, z, 5e-4)) for z in pts)
    order = math.log2(coarse / fine)
    assert 1.7 <= order <= 2.3


def test_metric_diverges_at_boundary():
    r = HYPERBOLIC.max_radius * (1.0 - 1e-4)
    assert metric_density(HYPERBOLIC, r) > 1e6


def test_k_coordinate_check():
    assert max(k_coordinate_check(FLAT, 2)) <= 1e-12
    assert max(k_coordinate_check(HYPERBOLIC, 1)) <= 1e-8
    assert max(k_coordinate_check(SPHERE, 3, step=1e-2)) <= 1e-6
    with pytest.raises(ValueError):
        k_coordinate_check(SPHERE, 5)


def test_default_step():
    assert default_step(0.2) == 1e-3
    assert default_step(4.0) == 4e-3
