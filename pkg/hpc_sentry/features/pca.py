"""
This file contains the principal component analysis used for counter
selection, computed with cyclic Jacobi rotations of the covariance matrix.
"""

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..exceptions import FeatureExtractionError

logger = logging.getLogger(__name__)

MAX_SWEEPS = 100
TOLERANCE = 1e-15


class PcaResult(NamedTuple):
    components: np.ndarray
    """(cols, n_components), one unit eigenvector per column."""
    eigenvalues: np.ndarray


def covariance(matrix: np.ndarray) -> np.ndarray:
    """
    Sample covariance (ddof 1) of the columns of `matrix`.
    """

    data = np.asarray(matrix, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] < 2:
        raise FeatureExtractionError("Covariance needs a 2-d matrix with at least 2 rows.")
    centered = data - data.mean(axis=0)
    return centered.T @ centered / (data.shape[0] - 1)


def jacobi_eigh(
    symmetric: np.ndarray, max_sweeps: int = MAX_SWEEPS, tolerance: float = TOLERANCE
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        Unsorted eigenvalues and the matrix whose columns are the matching eigenvectors.
    """

    a = np.array(symmetric, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(float(np.linalg.norm(a)), 1.0)
    for _ in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.tril(a, -1) ** 2)))
        if off <= tolerance * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        logger.warning("Jacobi rotations did not converge in %d sweeps", max_sweeps)
    return np.diag(a).copy(), v


def pca(matrix: np.ndarray, n_components: Optional[int] = None) -> PcaResult:
    """
    Principal components of the columns of `matrix`.

    Parameters
    ----------
    matrix : np.ndarray
        (rows, cols) data, rows >= 2.
    n_components : Optional[int], optional
        Components to keep, by default all cols.

    Returns
    -------
    PcaResult
        Components sorted by descending eigenvalue. Each component has its
        largest-magnitude loading positive. A zero covariance yields zero
        eigenvalues and the identity components.

    Raises
    ------
    FeatureExtractionError
        If there are fewer than 2 rows or too many components are requested.
    """

    cov = covariance(matrix)
    cols = cov.shape[0]
    n_components = cols if n_components is None else n_components
    if not 1 <= n_components <= cols:
        raise FeatureExtractionError(f"n_components must be within [1, {cols}].")

    eigenvalues, vectors = jacobi_eigh(cov)
    order = np.argsort(-eigenvalues, kind="stable")[:n_components]
    eigenvalues, vectors = eigenvalues[order], vectors[:, order]
    for j in range(n_components):
        if vectors[np.argmax(np.abs(vectors[:, j])), j] < 0:
            vectors[:, j] = -vectors[:, j]
    return PcaResult(components=vectors, eigenvalues=eigenvalues)
