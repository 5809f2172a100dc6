"""
This file contains the one-class SVM with RBF kernel and its dual solver.

The dual is solved in the normalized form

    min 1/2 a^T Q a   s.t.   0 <= a_i <= 1 / (nu * l),   sum(a) = 1

by pairwise coordinate descent on the most violating pair.
"""

import logging
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from ..exceptions import FeatureExtractionError, SolverConvergenceError
from ..features.feature_matrix import FeatureMatrix
from ..features.selection import CounterSelection
from ..features.standardization import StandardizationStats, fit_standardize, standardize_values

logger = logging.getLogger(__name__)

KKT_TOLERANCE = 1e-6
MARGIN_EPSILON = 1e-12
MIN_TRAINING_ROWS = 10
ITERATIONS_PER_ROW = 10**6
CURVATURE_FLOOR = 1e-12


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """
    exp(-gamma * ||a_i - b_j||^2) for every row pair.
    """

    sq = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * a @ b.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


class DualSolution(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    alphas: np.ndarray
    rho: float
    iterations: int
    kkt_violation: float


def solve_dual(
    q: np.ndarray,
    nu: float,
    tolerance: float = KKT_TOLERANCE,
    max_iterations: Optional[int] = None,
) -> DualSolution:
    """
    Solve the one-class dual for a precomputed kernel matrix `q`.

    The first floor(nu * l) coefficients start at the upper bound and the
    remainder of the unit mass goes to the next one.

    Raises
    ------
    SolverConvergenceError
        If the KKT violation is still above `tolerance` after `max_iterations`
        pair updates, by default 10^6 * l.
    """

    size = q.shape[0]
    bound = 1.0 / (nu * size)
    max_iterations = ITERATIONS_PER_ROW * size if max_iterations is None else max_iterations

    alphas = np.zeros(size)
    n_full = min(int(np.floor(nu * size)), size)
    alphas[:n_full] = bound
    if n_full < size:
        alphas[n_full] = 1.0 - n_full * bound
    gradient = q @ alphas

    iterations = 0
    violation = np.inf
    while True:
        up = alphas < bound
        low = alphas > 0.0
        if not np.any(up) or not np.any(low):
            violation = 0.0
            break
        i = int(np.flatnonzero(up)[np.argmin(gradient[up])])
        j = int(np.flatnonzero(low)[np.argmax(gradient[low])])
        violation = float(gradient[j] - gradient[i])
        if violation < tolerance:
            break
        if iterations >= max_iterations:
            raise SolverConvergenceError(iterations, violation)

        curvature = max(q[i, i] + q[j, j] - 2.0 * q[i, j], CURVATURE_FLOOR)
        room = bound - alphas[i]
        step = min(violation / curvature, room, alphas[j])
        if step == room:
            alphas[j] -= step
            alphas[i] = bound
        elif step == alphas[j]:
            alphas[i] += step
            alphas[j] = 0.0
        else:
            alphas[i] += step
            alphas[j] -= step
        gradient += step * (q[:, i] - q[:, j])
        iterations += 1

    free = (alphas > MARGIN_EPSILON) & (alphas < bound - MARGIN_EPSILON)
    if np.any(free):
        rho = float(gradient[free].mean())
    else:
        rho = float(np.median(gradient[alphas > 0.0]))
    logger.debug("Dual solved in %d iterations, violation %.3e", iterations, violation)
    return DualSolution(
        alphas=alphas, rho=rho, iterations=iterations, kkt_violation=max(violation, 0.0)
    )


class OneClassSvmModel(BaseModel):
    """
    A trained one-class SVM.

    Attributes
    ----------
    support_vectors : np.ndarray
        Standardized training rows with a non-zero coefficient.
    alphas : np.ndarray
        Their dual coefficients.
    rho : float
        Offset of the decision function.
    gamma : float
        RBF width.
    nu : float
        Outlier fraction bound.
    columns : List[str]
        Feature columns the model expects.
    standardization : Optional[StandardizationStats]
        Statistics applied to rows before the decision function.
    selection : Optional[CounterSelection]
        Counters the features were built from.
    n_train : int
        Training rows.
    iterations : int
        Solver iterations.
    kkt_violation : float
        KKT violation at convergence.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    support_vectors: np.ndarray
    alphas: np.ndarray
    rho: float
    gamma: float
    nu: float
    columns: List[str]
    standardization: Optional[StandardizationStats] = None
    selection: Optional[CounterSelection] = None
    n_train: int = 0
    iterations: int = 0
    kkt_violation: float = 0.0

    @field_validator("support_vectors", "alphas", mode="before")
    def validate_arrays(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=np.float64)

    @field_serializer("support_vectors", "alphas")
    def serialize_arrays(self, v: np.ndarray) -> Any:
        return v.tolist()

    def decision_values(self, rows: np.ndarray) -> np.ndarray:
        """
        Decision values of already standardized rows.
        """

        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise FeatureExtractionError(
                f"Rows of width {rows.shape[-1]} do not match the model width {len(self.columns)}."
            )
        sv = self.support_vectors.reshape(-1, len(self.columns))
        return rbf_kernel(rows, sv, self.gamma) @ self.alphas - self.rho

    def standardized(self, features: FeatureMatrix) -> np.ndarray:
        if list(features.columns) != list(self.columns):
            raise FeatureExtractionError(
                f"Feature columns {features.columns} do not match the model columns {self.columns}."
            )
        if self.standardization is None:
            return features.values
        return standardize_values(features, self.standardization)[0]

    def decision_function(self, features: FeatureMatrix) -> np.ndarray:
        return self.decision_values(self.standardized(features))

    def predict(self, features: FeatureMatrix) -> np.ndarray:
        """
        +1 (trusted) where the decision value is >= 0, else -1.
        """

        return np.where(self.decision_function(features) >= 0.0, 1, -1)


def kernel_matrix(rows: np.ndarray, gamma: float) -> np.ndarray:
    return rbf_kernel(rows, rows, gamma)


def prepare_training(
    features: FeatureMatrix, standardize: bool = True
) -> Tuple[np.ndarray, Optional[StandardizationStats]]:
    """
    Training rows after standardization, and the fitted statistics.
    """

    if features.n_rows < MIN_TRAINING_ROWS:
        raise FeatureExtractionError(
            f"Training needs at least {MIN_TRAINING_ROWS} rows, got {features.n_rows}."
        )
    if not standardize:
        return features.values, None
    stats = fit_standardize(features)
    return standardize_values(features, stats)[0], stats


def train_ocsvm(
    features: FeatureMatrix,
    gamma: float,
    nu: float,
    selection: Optional[CounterSelection] = None,
    standardize: bool = True,
    q: Optional[np.ndarray] = None,
    tolerance: float = KKT_TOLERANCE,
    max_iterations: Optional[int] = None,
) -> OneClassSvmModel:
    """
    Train a one-class SVM on trusted features.

    Parameters
    ----------
    features : FeatureMatrix
        Trusted rows, at least 10.
    gamma : float
        RBF width, > 0.
    nu : float
        Outlier fraction bound, within (0, 1].
    selection : Optional[CounterSelection], optional
        Stored on the model, by default None
    standardize : bool, optional
        Fit and apply standardization statistics, by default True
    q : Optional[np.ndarray], optional
        Precomputed kernel matrix of the standardized rows, by default computed here.
    tolerance : float, optional
        KKT tolerance, by default 1e-6
    max_iterations : Optional[int], optional
        Iteration cap, by default 10^6 * rows

    Returns
    -------
    OneClassSvmModel
        The trained model.

    Raises
    ------
    FeatureExtractionError
        If there are fewer than 10 rows.
    SolverConvergenceError
        If the solver hits its iteration cap.
    """

    if gamma <= 0:
        raise ValueError("gamma must be positive.")
    if not 0 < nu <= 1:
        raise ValueError("nu must be within (0, 1].")
    rows, stats = prepare_training(features, standardize)
    if q is None:
        q = kernel_matrix(rows, gamma)
    solution = solve_dual(q, nu, tolerance, max_iterations)
    support = solution.alphas > 0.0
    logger.info(
        "Trained one-class SVM on %d rows (gamma=%g, nu=%g): %d support vectors",
        rows.shape[0],
        gamma,
        nu,
        int(support.sum()),
    )
    return OneClassSvmModel(
        support_vectors=rows[support],
        alphas=solution.alphas[support],
        rho=solution.rho,
        gamma=gamma,
        nu=nu,
        columns=list(features.columns),
        standardization=stats,
        selection=selection,
        n_train=rows.shape[0],
        iterations=solution.iterations,
        kkt_violation=solution.kkt_violation,
    )
