"""First canonical correlation between two 2-column variable sets.

Used to relate the neighborhood pair (deg, evc) to the shortest-paths
pair (bwc, clc). Because each set has exactly two variables, the whole
problem reduces to 2x2 matrices and is solved in closed form.

Canonical correlations are conventionally nonnegative; the signed value
reported here comes from a fixed orientation rule (first weight component
of each set nonnegative) followed by the plain Pearson correlation of the
two oriented canonical variates. A different orientation rule could flip
the sign while leaving the magnitude untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import standardize_columns


class DegenerateSetError(ValueError):
    """A within-set covariance matrix is singular or near-singular."""


class Regime(Enum):
    STRONG_POSITIVE = "strong_positive"
    STRONG_NEGATIVE = "strong_negative"
    WEAK_MODERATE = "weak_moderate"


@dataclass
class CcaResult:
    """Signed first canonical correlation with its weight vectors.

    Both weight vectors have unit Euclidean norm and a nonnegative first
    component. ``ccc`` equals the Pearson correlation of the two canonical
    variates under that orientation.
    """

    ccc: float
    weights_x: list[float]
    weights_y: list[float]
    regime: Regime

    def to_dict(self) -> dict:
        return {
            "ccc": self.ccc,
            "weights_x": self.weights_x,
            "weights_y": self.weights_y,
            "regime": self.regime.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CcaResult":
        return cls(
            ccc=data["ccc"],
            weights_x=list(data["weights_x"]),
            weights_y=list(data["weights_y"]),
            regime=Regime(data["regime"]),
        )


def classify_regime(ccc: float, strong_threshold: float = 0.79) -> Regime:
    """Bucket a signed canonical correlation against the strong threshold."""
    if ccc >= strong_threshold:
        return Regime.STRONG_POSITIVE
    if ccc <= -strong_threshold:
        return Regime.STRONG_NEGATIVE
    return Regime.WEAK_MODERATE


def _inverse_2x2(mat: np.ndarray) -> np.ndarray:
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    return np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]]) / det


def _symmetric_2x2_extremes(mat: np.ndarray) -> tuple[float, float]:
    # eigenvalues of a symmetric 2x2, (smallest, largest)
    mean = (mat[0, 0] + mat[1, 1]) / 2.0
    half_gap = float(np.hypot((mat[0, 0] - mat[1, 1]) / 2.0, mat[0, 1]))
    return mean - half_gap, mean + half_gap


def _check_conditioning(cov: np.ndarray, which: str) -> None:
    smallest, largest = _symmetric_2x2_extremes(cov)
    if smallest <= 0.0 or largest / smallest >= 1e12:
        raise DegenerateSetError(
            f"{which} within-set covariance is singular or ill-conditioned "
            f"(eigenvalues {smallest:.3e}, {largest:.3e})"
        )


def _orient(weights: np.ndarray) -> np.ndarray:
    if weights[0] < 0.0 or (weights[0] == 0.0 and weights[1] < 0.0):
        return -weights
    return weights


def cca_first(
    x: np.ndarray, y: np.ndarray, strong_threshold: float = 0.79
) -> CcaResult:
    """First canonical correlation of two n x 2 variable sets.

    Columns are standardized, the 2x2 covariance blocks formed, and the
    squared canonical correlation taken as the largest eigenvalue of
    inv(Sxx) Sxy inv(Syy) Syx, solved in closed form. The x-weights are
    the matching eigenvector; the y-weights follow as inv(Syy) Syx wx,
    unit-normalized.

    Raises:
        ValueError: on bad shapes or fewer than 4 rows.
        DegenerateColumnError: if any column has zero variance.
        DegenerateSetError: if a within-set covariance is singular (for
            example two perfectly correlated columns).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or y.ndim != 2 or x.shape[1] != 2 or y.shape[1] != 2:
        raise ValueError("expected two n x 2 matrices")
    if x.shape[0] != y.shape[0] or x.shape[0] < 4:
        raise ValueError("need matching row counts of at least 4")

    n = x.shape[0]
    zx = standardize_columns(x)
    zy = standardize_columns(y)
    sxx = (zx.T @ zx) / n
    syy = (zy.T @ zy) / n
    sxy = (zx.T @ zy) / n
    _check_conditioning(sxx, "x")
    _check_conditioning(syy, "y")

    product = _inverse_2x2(sxx) @ sxy @ _inverse_2x2(syy) @ sxy.T
    trace = product[0, 0] + product[1, 1]
    det = product[0, 0] * product[1, 1] - product[0, 1] * product[1, 0]
    disc = max(trace * trace - 4.0 * det, 0.0)
    largest = (trace + float(np.sqrt(disc))) / 2.0

    # eigenvector of the 2x2 product for its largest eigenvalue; both rows
    # of (product - largest I) are parallel, pick the better-conditioned
    cand_a = np.array([product[0, 1], largest - product[0, 0]])
    cand_b = np.array([largest - product[1, 1], product[1, 0]])
    wx = cand_a if np.linalg.norm(cand_a) >= np.linalg.norm(cand_b) else cand_b
    norm = np.linalg.norm(wx)
    if norm < 1e-12:
        wx = np.array([1.0, 0.0])  # repeated eigenvalue, any direction works
    else:
        wx = wx / norm
    wx = _orient(wx)

    wy = _inverse_2x2(syy) @ sxy.T @ wx
    norm = np.linalg.norm(wy)
    if norm < 1e-12:
        wy = np.array([1.0, 0.0])  # cross-covariance vanished, ccc is 0
    else:
        wy = wy / norm
    wy = _orient(wy)

    u = zx @ wx
    v = zy @ wy
    denom = float(np.linalg.norm(u) * np.linalg.norm(v))
    ccc = float(u @ v) / denom if denom > 0.0 else 0.0
    ccc = float(np.clip(ccc, -1.0, 1.0))
    return CcaResult(
        ccc=ccc,
        weights_x=[float(w) for w in wx],
        weights_y=[float(w) for w in wy],
        regime=classify_regime(ccc, strong_threshold),
    )
