"""
This file contains the counter selection methods.
"""

import logging
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, field_validator

from ..exceptions import FeatureExtractionError
from ..vpmu.events import N_COUNTERS, EventKind
from ..vpmu.signatures import CheckpointSignature, TimeSeriesSignature
from .pca import pca

logger = logging.getLogger(__name__)

FISHER_DENOMINATOR_FLOOR = 1e-12


class SelectionMethod(str, Enum):
    PCA = "pca"
    MAX_STD = "max_std"
    MAX_VAR = "max_var"
    FISHER = "fisher"


class CounterSelection(BaseModel):
    """
    Counters chosen for feature construction.

    Attributes
    ----------
    method : SelectionMethod
        How the counters were ranked.
    chosen : List[EventKind]
        Selected counters, best first.
    scores : Dict[str, float]
        Score of every counter, by counter name.
    """

    method: SelectionMethod
    chosen: List[EventKind]
    scores: Dict[str, float] = {}

    @field_validator("chosen")
    def validate_chosen(cls, v: List[EventKind]) -> List[EventKind]:
        if not 1 <= len(v) <= N_COUNTERS:
            raise ValueError(f"Between 1 and {N_COUNTERS} counters must be chosen.")
        if len(set(v)) != len(v):
            raise ValueError("Chosen counters must be distinct.")
        return v

    @property
    def z(self) -> int:
        return len(self.chosen)

    @property
    def ordered(self) -> List[EventKind]:
        """
        Chosen counters in ordinal order, the column order of the feature matrices.
        """

        return sorted(self.chosen)

    @classmethod
    def all_counters(cls, method: SelectionMethod = SelectionMethod.PCA) -> "CounterSelection":
        return cls(method=method, chosen=list(EventKind))


def counter_matrix(data: Any) -> np.ndarray:
    """
    (rows, 8) counter values of a signature or a raw matrix.
    """

    if isinstance(data, TimeSeriesSignature):
        values = data.samples
    elif isinstance(data, CheckpointSignature):
        values = data.deltas
    else:
        values = np.asarray(data)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[1] != N_COUNTERS:
        raise FeatureExtractionError(f"Expected a (rows, {N_COUNTERS}) counter matrix.")
    return values


def fisher_scores(values: np.ndarray, labels: Sequence[Any]) -> np.ndarray:
    """
    (mu1 - mu2)^2 / (var1 + var2) per column, with population variances.
    """

    labels = np.asarray(labels)
    if labels.shape[0] != values.shape[0]:
        raise FeatureExtractionError("FISHER needs one label per row.")
    classes = np.unique(labels)
    if classes.size != 2:
        raise FeatureExtractionError(f"FISHER needs exactly two classes, got {classes.size}.")
    first, second = values[labels == classes[0]], values[labels == classes[1]]
    gap = (first.mean(axis=0) - second.mean(axis=0)) ** 2
    spread = first.var(axis=0) + second.var(axis=0)
    return gap / np.maximum(spread, FISHER_DENOMINATOR_FLOOR)


def select_counters(
    data: Any,
    method: SelectionMethod = SelectionMethod.PCA,
    z: int = 4,
    labels: Optional[Sequence[Any]] = None,
    threshold: Optional[float] = None,
) -> CounterSelection:
    """
    Rank the 8 counters and keep the top `z`.

    Parameters
    ----------
    data : Any
        A TimeSeriesSignature, a CheckpointSignature or a (rows, 8) matrix.
    method : SelectionMethod, optional
        PCA ranks by |loading| on the first principal component, MAX_STD and
        MAX_VAR by standard deviation and variance, FISHER by the Fisher score
        of two labeled classes. By default PCA.
    z : int, optional
        Number of counters to keep, by default 4
    labels : Optional[Sequence[Any]], optional
        Class of every row, required by FISHER, by default None
    threshold : Optional[float], optional
        MAX_STD and MAX_VAR only: keep counters scoring above it, by default None

    Returns
    -------
    CounterSelection
        Ties in score are broken by higher variance, then by lower ordinal.

    Raises
    ------
    FeatureExtractionError
        If z is out of range, or FISHER does not get two classes.
    """

    if not 1 <= z <= N_COUNTERS:
        raise FeatureExtractionError(f"z must be within [1, {N_COUNTERS}], got {z}.")
    method = SelectionMethod(method)
    values = counter_matrix(data)
    variance = values.var(axis=0, ddof=1) if values.shape[0] > 1 else np.zeros(N_COUNTERS)

    if method == SelectionMethod.PCA:
        if values.shape[0] < 2:
            raise FeatureExtractionError("PCA selection needs at least 2 rows.")
        scores = np.abs(pca(values, 1).components[:, 0])
        if not np.any(variance > 0):
            scores = np.zeros(N_COUNTERS)
    elif method == SelectionMethod.MAX_STD:
        scores = np.sqrt(variance)
    elif method == SelectionMethod.MAX_VAR:
        scores = variance
    else:
        if labels is None:
            raise FeatureExtractionError("FISHER selection needs labels.")
        scores = fisher_scores(values, labels)

    ranked = sorted(range(N_COUNTERS), key=lambda c: (-scores[c], -variance[c], c))
    chosen = ranked[:z]
    if threshold is not None and method in (SelectionMethod.MAX_STD, SelectionMethod.MAX_VAR):
        chosen = [c for c in chosen if scores[c] > threshold] or ranked[:1]

    selection = CounterSelection(
        method=method,
        chosen=[EventKind(c) for c in chosen],
        scores={EventKind(c).name: float(scores[c]) for c in range(N_COUNTERS)},
    )
    logger.info("%s selected %s", method.value, [c.name for c in selection.chosen])
    return selection
