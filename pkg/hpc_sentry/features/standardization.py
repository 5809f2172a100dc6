"""
This file contains the z-score standardization of feature matrices. Time-series
columns are standardized globally, checkpoint columns per checkpoint id.
"""

import warnings
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from ..exceptions import FeatureExtractionError
from .feature_matrix import FeatureKind, FeatureMatrix

SIGMA_FLOOR = 1e-9


class ColumnStats(BaseModel):
    mean: List[float]
    std: List[float]

    @classmethod
    def fit(cls, values: np.ndarray) -> "ColumnStats":
        return cls(
            mean=values.mean(axis=0).tolist(),
            std=np.maximum(values.std(axis=0), SIGMA_FLOOR).tolist(),
        )

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (values - np.asarray(self.mean)) / np.asarray(self.std)


class StandardizationStats(BaseModel):
    """
    Per-column statistics fitted on trusted features.

    Attributes
    ----------
    kind : FeatureKind
        Kind of the fitted features.
    columns : List[str]
        Column labels in fitting order.
    overall : ColumnStats
        Statistics over all rows. Used for time-series features and for
        checkpoint ids unseen at fitting time.
    per_checkpoint : Dict[int, ColumnStats]
        Checkpoint features: statistics per checkpoint id.
    coefficient_of_variation : Dict[int, List[float]]
        Checkpoint features: std / |mean| per checkpoint id and column, 0 for a zero mean.
    """

    kind: FeatureKind
    columns: List[str]
    overall: ColumnStats
    per_checkpoint: Dict[int, ColumnStats] = {}
    coefficient_of_variation: Dict[int, List[float]] = {}


def fit_standardize(matrix: FeatureMatrix) -> StandardizationStats:
    """
    Fit standardization statistics on trusted features.
    """

    values = matrix.values
    stats = StandardizationStats(
        kind=matrix.kind, columns=list(matrix.columns), overall=ColumnStats.fit(values)
    )
    if matrix.kind == FeatureKind.CHECKPOINT and matrix.checkpoint_ids is not None:
        for checkpoint_id in np.unique(matrix.checkpoint_ids):
            rows = values[matrix.checkpoint_ids == checkpoint_id]
            group = ColumnStats.fit(rows)
            mean = np.abs(np.asarray(group.mean))
            spread = rows.std(axis=0)
            cv = np.divide(spread, mean, out=np.zeros_like(spread), where=mean > 0)
            stats.per_checkpoint[int(checkpoint_id)] = group
            stats.coefficient_of_variation[int(checkpoint_id)] = cv.tolist()
    return stats


def standardize_values(
    matrix: FeatureMatrix, stats: StandardizationStats
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    if list(matrix.columns) != list(stats.columns):
        raise FeatureExtractionError(
            f"Feature columns {matrix.columns} do not match the fitted columns {stats.columns}."
        )
    if stats.kind != FeatureKind.CHECKPOINT or matrix.checkpoint_ids is None:
        return stats.overall.apply(matrix.values), None

    out = stats.overall.apply(matrix.values)
    novel = np.ones(matrix.n_rows, dtype=bool)
    for checkpoint_id, group in stats.per_checkpoint.items():
        rows = matrix.checkpoint_ids == checkpoint_id
        if np.any(rows):
            out[rows] = group.apply(matrix.values[rows])
            novel[rows] = False
    if np.any(novel):
        unseen = sorted(set(int(c) for c in matrix.checkpoint_ids[novel]))
        warnings.warn(f"Checkpoint ids {unseen} were not seen in training, using global statistics.")
    return out, novel


def apply_standardize(matrix: FeatureMatrix, stats: StandardizationStats) -> FeatureMatrix:
    """
    Standardize `matrix` with fitted statistics.

    Returns
    -------
    FeatureMatrix
        The z-scores. For checkpoint features `novel` flags the rows whose
        checkpoint id was unseen at fitting time.
    """

    values, novel = standardize_values(matrix, stats)
    return matrix.with_values(values, novel)
