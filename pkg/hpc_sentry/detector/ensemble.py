"""
This file contains the checkpoint ensemble: one one-class SVM per counter
subset, combined by a unanimity-to-trust rule.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from ..features.feature_matrix import FeatureMatrix
from ..features.selection import CounterSelection
from ..vpmu.events import EventKind
from .ocsvm import OneClassSvmModel, train_ocsvm

logger = logging.getLogger(__name__)

DEFAULT_SUBSETS: List[List[EventKind]] = [
    [EventKind.CYCLES, EventKind.L2_TCM, EventKind.BR_MSP, EventKind.L1_ICM],
    [EventKind.L1_DCA, EventKind.L2_DCA, EventKind.L1_DCM, EventKind.L2_DCM],
]


class EnsembleModel(BaseModel):
    """
    Members trained on disjoint counter subsets.

    Attributes
    ----------
    members : List[OneClassSvmModel]
        One model per non-empty subset.
    subsets : List[List[EventKind]]
        Counters of every member.
    selection : Optional[CounterSelection]
        Counters the features were built from.
    """

    members: List[OneClassSvmModel]
    subsets: List[List[EventKind]]
    selection: Optional[CounterSelection] = None

    @property
    def gamma(self) -> float:
        return self.members[0].gamma

    @property
    def nu(self) -> float:
        return self.members[0].nu

    def member_votes(self, features: FeatureMatrix) -> np.ndarray:
        """
        (members, rows) labels.
        """

        return np.stack(
            [m.predict(features.subset_counters(s)) for m, s in zip(self.members, self.subsets)]
        )

    def decision_function(self, features: FeatureMatrix) -> np.ndarray:
        """
        Row-wise minimum of the member decision values.
        """

        return np.min(
            np.stack(
                [
                    m.decision_function(features.subset_counters(s))
                    for m, s in zip(self.members, self.subsets)
                ]
            ),
            axis=0,
        )

    def predict(self, features: FeatureMatrix) -> np.ndarray:
        """
        +1 only where every member labels the row trusted.
        """

        return combine_unanimous(self.member_votes(features))


def combine_unanimous(votes: np.ndarray) -> np.ndarray:
    return np.where(np.all(np.asarray(votes) == 1, axis=0), 1, -1)


def train_ensemble(
    features: FeatureMatrix,
    gamma: float,
    nu: float,
    subsets: Sequence[Sequence[EventKind]] = DEFAULT_SUBSETS,
    selection: Optional[CounterSelection] = None,
) -> EnsembleModel:
    """
    Train one member per counter subset present in `features`.

    Raises
    ------
    ValueError
        If no subset shares a counter with `features`.
    """

    members = []
    kept = []
    for subset in subsets:
        part = features.subset_counters(subset)
        if part.width == 0:
            logger.debug("No feature column for subset %s", [c.name for c in subset])
            continue
        members.append(train_ocsvm(part, gamma, nu, selection=selection))
        kept.append(list(part.counters))
    if not members:
        raise ValueError("No counter subset matches the feature columns.")
    return EnsembleModel(members=members, subsets=kept, selection=selection)
