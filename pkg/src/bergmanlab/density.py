"""Density estimates, the m + rho/2 reference, and the exact sphere oracle."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .geometry import ModelGeometry
from .gram import ErrorBudget, assemble_truncated_gram, schur_i00
from .quadrature import lambda0_tail

__all__ = [
    "DensityReport",
    "SweepResult",
    "expansion_reference",
    "density_estimate",
    "cp1_density",
    "cp1_density_terms",
    "remainder_sweep",
    "remainder_envelope",
    "sweep_to_csv",
    "sweep_to_json",
    "CSV_HEADER",
]

CSV_HEADER = "m,rho,density,lo,hi,reference,remainder"


def expansion_reference(m: int, rho: float) -> float:
    """Leading terms of the density expansion: m + rho/2, exact arithmetic."""
    return m + 0.5 * rho


def remainder_envelope(m: int) -> float:
    """The expansion's remainder envelope e^(-(log m)^2 / 8)."""
    return math.exp(-math.log(m) ** 2 / 8.0)


@dataclass(frozen=True)
class DensityReport:
    m: int
    rho: float
    density: float
    lo: float
    hi: float
    reference: float
    remainder: float
    budget_c: float

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class SweepResult:
    reports: tuple[DensityReport, ...]
    fitted_c: float
    decay_violations: tuple[int, ...]


def density_estimate(
    geom: ModelGeometry,
    m: int,
    budget: ErrorBudget,
    v_degrees: list[int] = (),
) -> DensityReport:
    """Density = (inverse-Gram corner) * lambda_0^2 with a propagated interval.

    The interval combines the first-order budget spread through the Schur
    formula with the exact gap between lambda_0^2 and the reference m + rho/2
    (the tail of the truncated normalization integral).  The remainder is
    assembled from the tail term directly: the tail sits far below machine
    epsilon for large m, so density - reference computed by subtraction would
    be pure rounding noise there.
    """
    if m < 10:
        raise ValueError("m must be >= 10")
    reference = expansion_reference(m, geom.rho)
    t = lambda0_tail(geom, m)
    lam0_sq = reference / (1.0 - t)
    gram = assemble_truncated_gram(geom, m, list(v_degrees), budget)
    i00, (i00_lo, i00_hi) = schur_i00(gram)
    density = i00 * lam0_sq
    tail = reference * t / (1.0 - t)
    remainder = (i00 - 1.0) * lam0_sq + tail
    half = (i00_hi - i00) * lam0_sq + tail
    return DensityReport(
        m=m,
        rho=geom.rho,
        density=density,
        lo=density - half,
        hi=density + half,
        reference=reference,
        remainder=remainder,
        budget_c=budget.c,
    )


def cp1_density_terms(m: int, z: complex) -> list[float]:
    """Per-degree contributions to the global density on the sphere model.

    Basis z^k, k = 0..m, with exact Beta-integral norms
    lambda_k^-2 = k!(m-k)!/(m+1)!; each term is evaluated in log space.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    s = abs(z) ** 2
    log_s = math.log(s) if s > 0.0 else -math.inf
    log_w = math.log1p(s)
    terms = []
    for k in range(m + 1):
        if s == 0.0:
            terms.append(float(m + 1) if k == 0 else 0.0)
            continue
        log_lambda_sq = (
            math.lgamma(m + 2) - math.lgamma(k + 1) - math.lgamma(m - k + 1)
        )
        terms.append(math.exp(log_lambda_sq + k * log_s - m * log_w))
    return terms


def cp1_density(m: int, z: complex) -> float:
    """Exact global density on the sphere model, summed term by term.

    The analytic simplification is the constant m + 1 (equivalently
    expansion_reference(m, 2)); the term sum must reproduce it, realizing the
    expansion with identically zero remainder.
    """
    return math.fsum(cp1_density_terms(m, z))


def remainder_sweep(
    rho: float,
    m_list: list[int],
    budget: ErrorBudget,
    v_degrees: list[int] = (),
) -> SweepResult:
    """Run density_estimate over a sweep of m and fit the remainder constant.

    fitted_c is the max-ratio estimator max |remainder| * e^((log m)^2 / 8);
    decay_violations lists the m at which the normalized remainder increased
    relative to its predecessor.
    """
    geom = ModelGeometry(rho)
    reports = tuple(
        density_estimate(geom, m, budget, v_degrees) for m in sorted(m_list)
    )
    fitted_c = 0.0
    normalized = []
    for rep in reports:
        ratio = abs(rep.remainder) / remainder_envelope(rep.m)
        normalized.append(ratio)
        fitted_c = max(fitted_c, ratio)
    violations = tuple(
        reports[i].m for i in range(1, len(reports)) if normalized[i] > normalized[i - 1]
    )
    return SweepResult(reports=reports, fitted_c=fitted_c, decay_violations=violations)


def _row(rep: DensityReport) -> str:
    return ",".join(
        [
            str(rep.m),
            repr(rep.rho),
            repr(rep.density),
            repr(rep.lo),
            repr(rep.hi),
            repr(rep.reference),
            repr(rep.remainder),
        ]
    )


def sweep_to_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    lines.extend(_row(rep) for rep in result.reports)
    return "\n".join(lines) + "\n"


def sweep_to_json(result: SweepResult) -> str:
    payload = {
        "fitted_c": result.fitted_c,
        "decay_violations": list(result.decay_violations),
        "reports": [
            {
                "m": rep.m,
                "rho": rep.rho,
                "density": rep.density,
                "lo": rep.lo,
                "hi": rep.hi,
                "reference": rep.reference,
                "remainder": rep.remainder,
                "budget_c": rep.budget_c,
            }
            for rep in result.reports
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
