"""Exploratory factor analysis of the 4-metric correlation matrix.

The chain is: eigendecompose the correlation matrix, scale the leading m
eigenvector columns by sqrt(eigenvalue) to get initial loadings, rotate
them with varimax, and score each metric's communality (row sum of squared
loadings). Orthogonal rotation preserves row norms, so the communalities
are fixed by m alone; rotation just redistributes loadings across factors
to expose which factor dominates each metric. The fit loop therefore picks
the smallest m in {1, 2, 3} whose minimum communality clears the
threshold.

The sqrt(eigenvalue) scaling matters: it is what makes the m retained
factors reproduce the standardized variance each metric contributes
(unscaled orthonormal eigenvector rows cannot reach communality 1 for
every metric at once, since their squared entries sum to m over all four
rows combined).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .centrality import METRICS
from .linalg import EigenDecomposition, jacobi_eigen, sign_canonicalize_columns


class ModelNotFoundError(ValueError):
    """No factor count within the allowed range reached the communality
    threshold. Carries the communalities of the largest model tried."""

    def __init__(self, max_factors: int, communalities: list[float]):
        self.max_factors = max_factors
        self.communalities = communalities
        worst = min(communalities)
        super().__init__(
            f"no model with at most {max_factors} factors reaches the "
            f"communality threshold (best attempt bottoms out at {worst:.4f})"
        )


@dataclass
class RotationResult:
    """Varimax output: rotated loadings, the orthogonal rotation applied
    (output = input @ rotation), and any numerical warnings."""

    loadings: np.ndarray
    rotation: np.ndarray
    sweeps: int
    warnings: list[str] = field(default_factory=list)


@dataclass
class FactorModel:
    """Accepted factor solution for one network.

    ``dominant`` maps each metric to the 1-based indices of the factor(s)
    with maximal absolute loading (several on a tie). The variance-rule
    retention count is reported alongside for comparison; acceptance is
    decided by communality.
    """

    m: int
    variance_retention_m: int
    loadings: list[list[float]]
    communalities: list[float]
    dominant: dict[str, list[int]]
    rotation: list[list[float]]
    kaiser_normalize: bool
    warnings: list[str] = field(default_factory=list)

    def min_communality(self) -> float:
        return min(self.communalities)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "variance_retention_m": self.variance_retention_m,
            "loadings": self.loadings,
            "communalities": self.communalities,
            "dominant": self.dominant,
            "rotation": self.rotation,
            "kaiser_normalize": self.kaiser_normalize,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FactorModel":
        return cls(
            m=data["m"],
            variance_retention_m=data["variance_retention_m"],
            loadings=data["loadings"],
            communalities=data["communalities"],
            dominant={k: list(v) for k, v in data["dominant"].items()},
            rotation=data["rotation"],
            kaiser_normalize=data["kaiser_normalize"],
            warnings=list(data["warnings"]),
        )


def retained_factor_count_by_variance(
    eigenvalues: Sequence[float], threshold: float = 0.99
) -> int:
    """Smallest m whose leading eigenvalues sum to ``threshold`` times the
    total variance p (the matrix dimension). Expects a descending list
    summing to about p; m = p always qualifies."""
    p = len(eigenvalues)
    cumulative = 0.0
    for m, value in enumerate(eigenvalues, start=1):
        cumulative += value
        if cumulative >= threshold * p:
            return m
    return p


def initial_loadings(eig: EigenDecomposition, m: int) -> np.ndarray:
    """Initial p x m loading matrix: eigenvector column j scaled by
    sqrt(eigenvalue j). Tiny negative eigenvalues (rounding artifacts of a
    PSD matrix, down to -1e-9) clamp to zero."""
    if not 1 <= m <= len(eig.eigenvalues):
        raise ValueError(f"factor count {m} out of range")
    scales = []
    for value in eig.eigenvalues[:m]:
        if value < -1e-9:
            raise ValueError(f"eigenvalue {value} is negative beyond rounding")
        scales.append(np.sqrt(max(value, 0.0)))
    return eig.eigenvectors[:, :m] * np.array(scales)


def communalities(loadings: np.ndarray) -> np.ndarray:
    """Row sums of squared loadings: the share of each metric's
    standardized variance the retained factors carry."""
    loadings = np.asarray(loadings, dtype=float)
    return np.sum(loadings * loadings, axis=1)


def varimax_criterion(loadings: np.ndarray) -> float:
    """Raw varimax objective: total per-factor variance of squared
    loadings, sum_j [ mean_i(l_ij^4) - mean_i(l_ij^2)^2 ]."""
    sq = np.asarray(loadings, dtype=float) ** 2
    return float(np.sum(np.mean(sq * sq, axis=0) - np.mean(sq, axis=0) ** 2))


def _pair_rotation_angle(x: np.ndarray, y: np.ndarray, p: int) -> float:
    # Closed-form angle maximizing the criterion for one factor pair.
    u = x * x - y * y
    v = 2.0 * x * y
    a = float(u.sum())
    b = float(v.sum())
    c = float((u * u - v * v).sum())
    d = float((2.0 * u * v).sum())
    num = d - 2.0 * a * b / p
    den = c - (a * a - b * b) / p
    if num == 0.0 and den == 0.0:
        return 0.0
    return 0.25 * float(np.arctan2(num, den))


def varimax(
    loadings: np.ndarray,
    tol: float = 1e-10,
    max_sweeps: int = 500,
    kaiser_normalize: bool = False,
) -> RotationResult:
    """Varimax rotation by cyclic pairwise planar rotations.

    Each sweep rotates every factor pair by its closed-form optimal angle,
    so the criterion never decreases; sweeps stop once a full sweep gains
    less than ``tol``. With ``kaiser_normalize`` rows are scaled to unit
    length before rotation and unscaled after (this changes which rotation
    wins, never any communality). Output columns are sorted by descending
    sum of squares and sign-canonicalized. For a single factor the input
    comes back unchanged with the identity rotation.

    Exhausting ``max_sweeps`` is reported as a warning on the result, not
    an error.
    """
    out = np.array(loadings, dtype=float)
    p, m = out.shape
    rotation = np.eye(m)
    warnings: list[str] = []
    if m == 1:
        return RotationResult(out, rotation, sweeps=0, warnings=warnings)

    row_scale = np.ones(p)
    if kaiser_normalize:
        norms = np.sqrt(np.sum(out * out, axis=1))
        row_scale = np.where(norms > 0.0, norms, 1.0)
        out /= row_scale[:, None]

    criterion = varimax_criterion(out)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        for j in range(m - 1):
            for k in range(j + 1, m):
                phi = _pair_rotation_angle(out[:, j], out[:, k], p)
                if phi == 0.0:
                    continue
                c, s = float(np.cos(phi)), float(np.sin(phi))
                col_j, col_k = out[:, j].copy(), out[:, k].copy()
                out[:, j] = c * col_j + s * col_k
                out[:, k] = -s * col_j + c * col_k
                rot_j, rot_k = rotation[:, j].copy(), rotation[:, k].copy()
                rotation[:, j] = c * rot_j + s * rot_k
                rotation[:, k] = -s * rot_j + c * rot_k
        new_criterion = varimax_criterion(out)
        if new_criterion - criterion < tol:
            criterion = new_criterion
            break
        criterion = new_criterion
    else:
        warnings.append(
            f"varimax stopped after {max_sweeps} sweeps without meeting tol {tol:.1e}"
        )

    if kaiser_normalize:
        out *= row_scale[:, None]

    # canonical presentation; permutations and sign flips are orthogonal,
    # so output = input @ rotation is preserved
    order = np.argsort(-np.sum(out * out, axis=0), kind="stable")
    out = out[:, order]
    rotation = rotation[:, order]
    for j in range(m):
        lead = int(np.argmax(np.abs(out[:, j])))
        if out[lead, j] < 0:
            out[:, j] = -out[:, j]
            rotation[:, j] = -rotation[:, j]
    return RotationResult(out, rotation, sweeps=sweeps, warnings=warnings)


def dominant_factor_map(
    loadings: np.ndarray,
    tie_tol: float = 1e-6,
    names: Sequence[str] = METRICS,
) -> dict[str, list[int]]:
    """Map each metric to the factor(s) of maximal absolute loading.

    Factors within ``tie_tol`` of the row maximum all count, so an exact
    tie maps the metric to every tying factor. Indices are 1-based.
    """
    magnitudes = np.abs(np.asarray(loadings, dtype=float))
    mapping: dict[str, list[int]] = {}
    for i, name in enumerate(names):
        row = magnitudes[i]
        best = float(row.max())
        mapping[name] = [j + 1 for j in range(len(row)) if best - row[j] <= tie_tol]
    return mapping


def fit_from_eigen(
    eig: EigenDecomposition,
    communality_threshold: float = 0.98,
    max_factors: int = 3,
    variance_threshold: float = 0.99,
    varimax_tol: float = 1e-10,
    varimax_max_sweeps: int = 500,
    kaiser_normalize: bool = False,
    tie_tol: float = 1e-6,
) -> FactorModel:
    """Select and rotate a factor model from a given eigenstructure.

    Tries m = 1, 2, ... in order, accepting the first whose minimum
    post-rotation communality reaches ``communality_threshold``. The
    variance-rule retention count is computed once from all eigenvalues
    and reported alongside.

    Raises:
        ModelNotFoundError: when even ``max_factors`` factors fall short;
            the error carries that largest model's communalities.
    """
    variance_m = retained_factor_count_by_variance(eig.eigenvalues, variance_threshold)
    scores: np.ndarray | None = None
    for m in range(1, max_factors + 1):
        rotated = varimax(
            initial_loadings(eig, m),
            tol=varimax_tol,
            max_sweeps=varimax_max_sweeps,
            kaiser_normalize=kaiser_normalize,
        )
        scores = communalities(rotated.loadings)
        if float(scores.min()) >= communality_threshold:
            return FactorModel(
                m=m,
                variance_retention_m=variance_m,
                loadings=rotated.loadings.tolist(),
                communalities=[float(h) for h in scores],
                dominant=dominant_factor_map(rotated.loadings, tie_tol),
                rotation=rotated.rotation.tolist(),
                kaiser_normalize=kaiser_normalize,
                warnings=rotated.warnings,
            )
    raise ModelNotFoundError(max_factors, [float(h) for h in scores])


def fit_factor_model(
    corr: np.ndarray,
    communality_threshold: float = 0.98,
    max_factors: int = 3,
    **kwargs,
) -> FactorModel:
    """Eigendecompose a correlation matrix and fit a factor model.

    See :func:`fit_from_eigen` for the keyword knobs and failure mode.
    """
    return fit_from_eigen(
        jacobi_eigen(corr),
        communality_threshold=communality_threshold,
        max_factors=max_factors,
        **kwargs,
    )
