"""
This file contains the separation statistics of trusted and suspect decision values.
"""

from typing import Sequence, Union

import numpy as np

from ..features.feature_matrix import FeatureMatrix
from .ensemble import EnsembleModel
from .ocsvm import OneClassSvmModel


def decision_auc(trusted_scores: Sequence[float], suspect_scores: Sequence[float]) -> float:
    """
    Mann-Whitney estimate of P(trusted score > suspect score), ties counted 1/2.
    """

    a = np.asarray(trusted_scores, dtype=np.float64)
    b = np.asarray(suspect_scores, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("decision_auc needs scores on both sides.")
    b_sorted = np.sort(b)
    below = np.searchsorted(b_sorted, a, side="left")
    not_above = np.searchsorted(b_sorted, a, side="right")
    return float((below.sum() + 0.5 * (not_above - below).sum()) / (a.size * b.size))


def overlap_fraction(model: Union[OneClassSvmModel, EnsembleModel], suspect: FeatureMatrix) -> float:
    """
    Fraction of suspect rows the model places inside the trusted region.
    """

    if suspect.n_rows == 0:
        raise ValueError("overlap_fraction needs at least one suspect row.")
    return float(np.mean(model.predict(suspect) == 1))
