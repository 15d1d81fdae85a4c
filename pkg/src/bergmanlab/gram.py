"""Bordered Gram matrices and three routes to the (0,0) entry of the inverse.

The truncated model sections (normalized monomials over the truncation disk)
are exactly orthonormal, so their Gram matrix is the identity; the effect of
the uncomputable global corrections is carried as per-entry error budgets of
size C * e^(-(log m)^2 / 8) on the two bordered rows and columns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ModelGeometry
from .quadrature import truncation_radius

__all__ = [
    "NonPositiveDefiniteError",
    "SingularComplementError",
    "ErrorBudget",
    "BorderedGram",
    "assemble_truncated_gram",
    "schur_i00",
    "inverse00_oracle",
    "orthonormalize_i00",
]


class NonPositiveDefiniteError(ValueError):
    """The Gram matrix is not positive definite."""


class SingularComplementError(ValueError):
    """The Schur complement block is numerically singular."""


@dataclass(frozen=True)
class ErrorBudget:
    """Scale factor C for the canonical budget C * e^(-(log m)^2 / 8)."""

    c: float = 1.0

    def __post_init__(self) -> None:
        if self.c < 0:
            raise ValueError("budget constant must be nonnegative")

    def scale_for(self, m: float) -> float:
        return self.c * math.exp(-math.log(m) ** 2 / 8.0)


@dataclass
class BorderedGram:
    """Hermitian Gram matrix with per-entry absolute error budgets."""

    entries: np.ndarray
    budgets: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        if self.dim < 2:
            raise ValueError("bordered Gram matrix needs dimension >= 2")
        if not np.array_equal(self.entries, self.entries.conj().T):
            raise ValueError("entries must be exactly Hermitian")
        if self.budgets is None:
            self.budgets = np.zeros(self.entries.shape)
        self.budgets = np.asarray(self.budgets, dtype=float)
        if self.budgets.shape != self.entries.shape:
            raise ValueError("budgets must match entries in shape")
        if (self.budgets < 0).any():
            raise ValueError("budgets must be nonnegative")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[float(v.real), float(v.imag)] for v in self.entries.ravel()],
            "budgets": [float(b) for b in self.budgets.ravel()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BorderedGram":
        k = int(data["dim"])
        flat = np.array([complex(re, im) for re, im in data["entries"]])
        budgets = np.array(data["budgets"], dtype=float).reshape(k, k)
        return cls(entries=flat.reshape(k, k), budgets=budgets)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BorderedGram":
        return cls.from_dict(json.loads(text))


def assemble_truncated_gram(
    geom: ModelGeometry,
    m: int,
    extra_degrees: list[int],
    budget: ErrorBudget,
) -> BorderedGram:
    """Gram matrix of the normalized truncated monomial sections.

    Basis: degree 0, degree 1, then one section per entry of extra_degrees
    (each >= 2, realizing the vanishing-to-first-order subspace).  A radial
    weight makes distinct monomial degrees exactly orthogonal and the
    normalization makes the diagonal exactly 1, so the matrix is the
    identity; the budgets carry the peak-section correction pattern.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    degrees = list(extra_degrees)
    if len(set(degrees)) != len(degrees):
        raise ValueError("extra degrees must be distinct")
    if any(d < 2 for d in degrees):
        raise ValueError("extra degrees must be >= 2")
    geom.require_inside(truncation_radius(m))

    k = 2 + len(degrees)
    entries = np.eye(k, dtype=complex)
    budgets = np.zeros((k, k))
    scale = budget.scale_for(m)
    budgets[0, :] = scale
    budgets[:, 0] = scale
    budgets[1, :] = scale
    budgets[:, 1] = scale
    return BorderedGram(entries=entries, budgets=budgets)


def _cholesky(G: BorderedGram) -> np.ndarray:
    try:
        return np.linalg.cholesky(G.entries)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefiniteError("Gram matrix is not positive definite") from exc


def schur_i00(G: BorderedGram) -> tuple[float, tuple[float, float]]:
    """Corner entry of the inverse via the bordered Schur-complement formula.

    Returns the value together with an interval obtained by first-order
    propagation of the entry budgets: the sensitivity of the corner entry to
    F_ij is -(F^-1)_0i (F^-1)_j0.
    """
    _cholesky(G)  # positive-definiteness gate
    F = G.entries
    f00 = F[0, 0].real
    row = F[0, 1:]
    col = F[1:, 0]
    m_tilde = F[1:, 1:] - np.outer(col, row) / f00
    try:
        x = np.linalg.solve(m_tilde, col)
    except np.linalg.LinAlgError as exc:
        raise SingularComplementError("Schur complement block is singular") from exc
    value = float(1.0 / f00 + (row @ x).real / f00**2)

    f_inv = np.linalg.inv(F)
    sensitivity = np.abs(np.outer(f_inv[0, :], f_inv[:, 0]))
    spread = float(np.sum(G.budgets * sensitivity))
    return value, (float(value - spread), float(value + spread))


def inverse00_oracle(G: BorderedGram) -> float:
    """Reference route: dense LU solve for the first column of the inverse."""
    _cholesky(G)
    e0 = np.zeros(G.dim, dtype=complex)
    e0[0] = 1.0
    return float(np.linalg.solve(G.entries, e0)[0].real)


def orthonormalize_i00(G: BorderedGram) -> float:
    """Orthonormalization route: factor F = L L*, sum |(L^-1)_i0|^2."""
    L = _cholesky(G)
    e0 = np.zeros(G.dim, dtype=complex)
    e0[0] = 1.0
    y = np.linalg.solve(L, e0)
    return float(np.sum(np.abs(y) ** 2))
