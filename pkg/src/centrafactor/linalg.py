"""Small dense symmetric linear algebra.

Column standardization, Pearson correlation matrices, and a cyclic Jacobi
eigensolver. Everything here targets matrices of a handful of columns
(correlation matrices are 4x4; adjacency matrices only appear in tests),
where Jacobi's simplicity and provable convergence beat anything fancier.
Matrices are plain ``numpy.ndarray`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DegenerateColumnError(ValueError):
    """A column has zero variance, so it cannot be standardized."""

    def __init__(self, index: int, name: str | None = None):
        self.index = index
        self.name = name
        label = name if name is not None else f"#{index}"
        super().__init__(f"column {label} has zero variance")


class NonSymmetricError(ValueError):
    """Input matrix is not symmetric within tolerance."""


class JacobiConvergenceError(RuntimeError):
    """Jacobi sweeps exhausted before the off-diagonal norm met tolerance."""


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.

    ``eigenvectors`` holds one orthonormal eigenvector per column, column j
    pairing with ``eigenvalues[j]``. Each column is sign-canonicalized so
    its largest-magnitude entry is positive.
    """

    eigenvalues: tuple[float, ...]
    eigenvectors: np.ndarray


def standardize_columns(
    matrix: np.ndarray, names: Sequence[str] | None = None
) -> np.ndarray:
    """Z-score every column: mean 0, population standard deviation 1.

    Variances divide by n (not n - 1), so the correlation matrix of the
    result has an exactly unit diagonal.

    Raises:
        DegenerateColumnError: for a column with zero variance; ``names``
            (when given) supplies the column name in the message.
    """
    values = np.asarray(matrix, dtype=float)
    if values.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    means = values.mean(axis=0)
    sds = values.std(axis=0)  # population convention
    for j in range(values.shape[1]):
        spread = float(np.ptp(values[:, j])) if values.shape[0] else 0.0
        if spread == 0.0 or sds[j] < 1e-12 * max(1.0, abs(means[j])):
            raise DegenerateColumnError(j, names[j] if names is not None else None)
    return (values - means) / sds


def correlation_matrix(
    values: np.ndarray, names: Sequence[str] | None = None
) -> np.ndarray:
    """Pearson correlation matrix of the columns of ``values``.

    Computed as (1/n) Z'Z of the standardized matrix, which makes the
    result invariant under any per-column positive affine rescaling of the
    input.
    """
    z = standardize_columns(values, names)
    n = z.shape[0]
    if n < 3:
        raise ValueError("need at least 3 rows for a meaningful correlation")
    corr = (z.T @ z) / n
    corr = (corr + corr.T) / 2.0
    np.fill_diagonal(corr, 1.0)
    return corr


def validate_correlation_matrix(corr: np.ndarray) -> None:
    """Check correlation-matrix invariants, raising ValueError on failure.

    Symmetry to 1e-12, unit diagonal, entries in [-1, 1] up to 1e-12,
    positive semidefinite within -1e-9, and trace p within 1e-9.
    """
    corr = np.asarray(corr, dtype=float)
    p = corr.shape[0]
    if corr.shape != (p, p):
        raise ValueError("correlation matrix must be square")
    if np.max(np.abs(corr - corr.T)) > 1e-12:
        raise ValueError("correlation matrix not symmetric")
    if np.max(np.abs(np.diag(corr) - 1.0)) > 1e-12:
        raise ValueError("correlation matrix diagonal not unit")
    if np.max(np.abs(corr)) > 1.0 + 1e-12:
        raise ValueError("correlation entries outside [-1, 1]")
    if abs(float(np.trace(corr)) - p) > 1e-9:
        raise ValueError("correlation trace differs from dimension")
    eig = jacobi_eigen(corr)
    if eig.eigenvalues[-1] < -1e-9:
        raise ValueError("correlation matrix not positive semidefinite")


def sign_canonicalize_columns(matrix: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's largest-|entry| is positive.

    Ties on magnitude resolve to the lowest row index. Returns the same
    array, modified in place.
    """
    for j in range(matrix.shape[1]):
        col = matrix[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            matrix[:, j] = -col
    return matrix


def jacobi_eigen(
    matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100
) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate every off-diagonal pair in row order until the
    off-diagonal Frobenius norm drops below ``tol``. Eigenpairs come back
    sorted by descending eigenvalue with sign-canonicalized eigenvectors.

    Raises:
        NonSymmetricError: if the input is asymmetric beyond 1e-12.
        JacobiConvergenceError: if ``max_sweeps`` sweeps do not converge.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSymmetricError("expected a square matrix")
    if np.max(np.abs(a - a.T)) > 1e-12:
        raise NonSymmetricError("matrix is not symmetric within 1e-12")
    a = (a + a.T) / 2.0
    n = a.shape[0]
    v = np.eye(n)
    converged = False
    for _ in range(max_sweeps):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        if float(np.linalg.norm(off)) < tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff  # tiny-angle limit, avoids overflow in tau
                else:
                    tau = diff / (2.0 * apq)
                    t = 1.0 / (abs(tau) + float(np.hypot(1.0, tau)))
                    if tau < 0.0:
                        t = -t
                c = 1.0 / float(np.hypot(1.0, t))
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0  # exact by choice of rotation angle
                a[q, p] = 0.0
                v_p, v_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q
    if not converged:
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        if float(np.linalg.norm(off)) >= tol:
            raise JacobiConvergenceError(
                f"off-diagonal norm {float(np.linalg.norm(off)):.3e} after "
                f"{max_sweeps} sweeps (tol {tol:.1e})"
            )
    order = np.argsort(-np.diag(a), kind="stable")
    eigenvalues = tuple(float(x) for x in np.diag(a)[order])
    eigenvectors = sign_canonicalize_columns(v[:, order])
    return EigenDecomposition(eigenvalues, eigenvectors)
