import math

import numpy as np
import pytest

from bergmanlab.geometry import ModelGeometry, log_bundle_weight, log_metric_density
from bergmanlab.quadrature import (
    QuadratureConfig,
    QuadratureError,
    lambda0_closed_form,
    lambda0_tail,
    lambda_inv_sq,
    monomial_moment,
    peak_norm_bound_check,
    truncation_radius,
)

FLAT = ModelGeometry(0.0)
SPHERE = ModelGeometry(2.0)
HYPERBOLIC = ModelGeometry(-2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=1e-3)
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)


def test_flat_closed_form():
    for m in (10, 100, 10_000):
        log_m = math.log(m)
        expected = -math.expm1(-log_m * log_m) / m
        got = lambda_inv_sq(FLAT, m, 0, truncation_radius(m))
        assert got.value == pytest.approx(expected, rel=1e-11)
        assert got.abs_err <= 1e-11 * got.value


@pytest.mark.parametrize("rho", [-2.0, -1.0, 0.5, 2.0])
@pytest.mark.parametrize("m", [10, 1000, 100_000])
def test_quadrature_matches_closed_form(rho, m):
    geom = ModelGeometry(rho)
    closed = lambda0_closed_form(geom, m)
    got = lambda_inv_sq(geom, m, 0, truncation_radius(m))
    assert got.value == pytest.approx(closed, rel=1e-11)


def test_sphere_beta_integral():
    # full-plane moment at rho=2, m=3: integral (1+r^2)^(-5) 2r dr = 1/4
    got = lambda_inv_sq(SPHERE, 3, 0, 50.0)
    assert got.value == pytest.approx(0.25, rel=1e-11)


def test_flat_gamma_identity():
    # large-radius moments reduce to p! / m^(p+1)
    for m, p in ((5, 0), (5, 1), (8, 2), (8, 3)):
        got = lambda_inv_sq(FLAT, m, p, 40.0 / math.sqrt(m))
        assert got.value == pytest.approx(math.factorial(p) / m ** (p + 1), rel=1e-11)


def test_closed_form_examples():
    m = 100
    log_m = math.log(m)
    assert lambda0_closed_form(FLAT, m) == pytest.approx(
        (1 - math.exp(-log_m**2)) / m, rel=1e-14
    )
    m = 10
    log_m = math.log(m)
    expected = (1 / 11) * (1 - (1 + log_m**2 / 10) ** -11)
    assert lambda0_closed_form(SPHERE, m) == pytest.approx(expected, rel=1e-13)


def test_closed_form_tail_envelope_negative_curvature():
    # the relative gap lambda0^-2 (m + rho/2) - 1 equals -tail exactly, and the
    # tail must be formed analytically: below m ~ 500 the float subtraction
    # would already be pure rounding noise.
    for m in (1000, 10_000, 100_000):
        assert lambda0_tail(HYPERBOLIC, m) <= 2.0 * math.exp(-math.log(m) ** 2)


def test_closed_form_preconditions():
    with pytest.raises(ValueError):
        lambda0_closed_form(SPHERE, 1)
    # rho = -8 -> max_radius = 0.5 < log(m)/sqrt(m) at m = 10
    with pytest.raises(Exception):
        lambda0_closed_form(ModelGeometry(-8.0), 10)


def test_moment_decreasing_in_p():
    vals = [lambda_inv_sq(FLAT, 20, p, 0.9).value for p in range(4)]
    assert all(vals[i + 1] < vals[i] for i in range(3))


def test_moment_increasing_in_radius():
    radii = [0.2, 0.4, 0.8, 1.5]
    vals = [lambda_inv_sq(FLAT, 20, 0, r).value for r in radii]
    assert all(vals[i + 1] > vals[i] for i in range(3))


def test_flat_tail_identity():
    # tail beyond the truncation radius equals e^(-(log m)^2)/m exactly
    m = 10
    log_m = math.log(m)
    inner = lambda_inv_sq(FLAT, m, 0, truncation_radius(m)).value
    full = lambda_inv_sq(FLAT, m, 0, 20.0 / math.sqrt(m)).value
    assert full - inner == pytest.approx(math.exp(-log_m**2) / m, rel=1e-9)


def test_monomial_moment_offdiagonal_exact_zero():
    for alpha in range(5):
        for beta in range(5):
            if alpha != beta:
                val = monomial_moment(SPHERE, 20, alpha, beta, truncation_radius(20))
                assert val == 0j


def test_monomial_moment_diagonal():
    m = 50
    R = truncation_radius(m)
    val = monomial_moment(HYPERBOLIC, m, 3, 3, R)
    assert val.imag == 0.0
    assert val.real == lambda_inv_sq(HYPERBOLIC, m, 3, R).value


def test_monomial_moment_vs_trapezoid():
    # independent oracle: fine-grid trapezoid of the same radial integrand
    m = 50
    R = truncation_radius(m)
    r = np.linspace(0.0, R, 200_001)
    for alpha in (1, 2):
        f = np.zeros_like(r)
        mask = r > 0
        rm = r[mask]
        logs = np.array(
            [
                m * log_bundle_weight(HYPERBOLIC, ri) + log_metric_density(HYPERBOLIC, ri)
                for ri in rm
            ]
        )
        f[mask] = 2.0 * rm ** (2 * alpha + 1) * np.exp(logs)
        oracle = float(np.trapezoid(f, r))
        val = monomial_moment(HYPERBOLIC, m, alpha, alpha, R)
        assert val.real == pytest.approx(oracle, rel=1e-9)


def test_peak_norm_bound_flat():
    ms = [100, 1000, 10_000]
    check = peak_norm_bound_check(FLAT, ms, 0)
    assert check.passed
    assert check.max_ratio == pytest.approx(1.0, rel=1e-6)
    check1 = peak_norm_bound_check(FLAT, ms, 1)
    assert check1.max_ratio == pytest.approx(1.0, rel=1e-3)


def test_peak_norm_bound_hyperbolic():
    ms = [int(round(v)) for v in np.logspace(2, 5, 7)]
    check = peak_norm_bound_check(HYPERBOLIC, ms, 2)
    assert check.passed
    assert check.max_ratio <= 3.0
    assert check.top_decade_variation <= 0.1


def test_quadrature_failure_carries_best_estimate():
    cfg = QuadratureConfig(rel_tol=1e-12, max_subdivisions=1)
    with pytest.raises(QuadratureError) as info:
        lambda_inv_sq(FLAT, 10**6, 0, truncation_radius(10**6), cfg)
    assert info.value.best > 0.0
    assert info.value.abs_err > 0.0


def test_validation_errors():
    with pytest.raises(ValueError):
        lambda_inv_sq(FLAT, 1, 0, 0.5)
    with pytest.raises(ValueError):
        lambda_inv_sq(FLAT, 10, -1, 0.5)
    with pytest.raises(ValueError):
        lambda_inv_sq(HYPERBOLIC, 10, 0, 1.5)
    with pytest.raises(ValueError):
        peak_norm_bound_check(FLAT, [], 0)
    with pytest.raises(ValueError):
        peak_norm_bound_check(FLAT, [100], 4)
