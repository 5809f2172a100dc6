"""
This file contains the seed-level cross validation of the checkpoint ensemble
and the hyper-parameter grid searches of both models.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from ..exceptions import CrossValidationError
from ..features.feature_matrix import FeatureMatrix
from ..features.selection import CounterSelection
from ..vpmu.events import EventKind
from .ensemble import DEFAULT_SUBSETS, EnsembleModel, train_ensemble
from .ocsvm import OneClassSvmModel, train_ocsvm

logger = logging.getLogger(__name__)

DEFAULT_FOLDS = 3
DEFAULT_GAMMAS = (0.01, 0.001, 0.0001)
DEFAULT_NUS = (0.1, 0.2, 0.3, 0.4)
TS_TRAIN_FRACTION = 0.9


class CrossValidationResult(BaseModel):
    """
    Outcome of the seed-level cross validation.

    Attributes
    ----------
    folds : List[List[int]]
        Seed ids of every fold.
    scores : List[float]
        Held-out fraction of rows labeled trusted, per fold.
    chosen_fold : int
        Fold with the highest score, the lowest index on ties.
    chosen_seeds : List[int]
        Seeds of the chosen fold, used for detection.
    mean_score : float
        Mean of the fold scores.
    model : Optional[EnsembleModel]
        The ensemble trained without the chosen fold.
    """

    folds: List[List[int]]
    scores: List[float]
    chosen_fold: int
    chosen_seeds: List[int]
    mean_score: float
    model: Optional[EnsembleModel] = None


class GridPoint(BaseModel):
    gamma: float
    nu: float
    score: float


def make_folds(seed_ids: Sequence[int], n_folds: int = DEFAULT_FOLDS) -> List[List[int]]:
    """
    Round-robin assignment of the sorted distinct seed ids to `n_folds` folds.
    """

    seeds = sorted({int(s) for s in seed_ids})
    if len(seeds) < n_folds:
        raise CrossValidationError(
            f"{n_folds}-fold cross validation needs at least {n_folds} seeds, got {len(seeds)}."
        )
    return [seeds[k::n_folds] for k in range(n_folds)]


def cross_validate_pc(
    features: FeatureMatrix,
    gamma: float,
    nu: float,
    folds: int = DEFAULT_FOLDS,
    subsets: Sequence[Sequence[EventKind]] = DEFAULT_SUBSETS,
    selection: Optional[CounterSelection] = None,
) -> CrossValidationResult:
    """
    Train the ensemble on all folds but one and score the held-out fold.

    Parameters
    ----------
    features : FeatureMatrix
        Trusted checkpoint features.
    gamma : float
        RBF width.
    nu : float
        Outlier fraction bound.
    folds : int, optional
        Number of folds, by default 3
    subsets : Sequence[Sequence[EventKind]], optional
        Ensemble counter subsets, by default ordinals 0-3 and 4-7.
    selection : Optional[CounterSelection], optional
        Stored on the models, by default None

    Returns
    -------
    CrossValidationResult
        Fold scores and the chosen detection seeds.

    Raises
    ------
    CrossValidationError
        If there are fewer seeds than folds.
    """

    if features.seed_ids is None:
        raise CrossValidationError("Cross validation needs checkpoint features with seed ids.")
    partition = make_folds(features.seed_ids, folds)
    scores = []
    models = []
    for k, held_out in enumerate(partition):
        test = np.isin(features.seed_ids, held_out)
        model = train_ensemble(features.select_rows(~test), gamma, nu, subsets, selection)
        score = float(np.mean(model.predict(features.select_rows(test)) == 1))
        logger.debug("Fold %d: %d held-out seeds, score %.4f", k, len(held_out), score)
        scores.append(score)
        models.append(model)

    chosen = int(np.argmax(scores))
    return CrossValidationResult(
        folds=partition,
        scores=scores,
        chosen_fold=chosen,
        chosen_seeds=partition[chosen],
        mean_score=float(np.mean(scores)),
        model=models[chosen],
    )


def temporal_split(features: FeatureMatrix, fraction: float = TS_TRAIN_FRACTION) -> Tuple[FeatureMatrix, FeatureMatrix]:
    """
    First `fraction` of the rows for training, the rest for validation.
    """

    cut = int(np.floor(fraction * features.n_rows))
    index = np.arange(features.n_rows)
    return features.select_rows(index < cut), features.select_rows(index >= cut)


def grid_search_ts(
    features: FeatureMatrix,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    nus: Sequence[float] = DEFAULT_NUS,
    selection: Optional[CounterSelection] = None,
) -> Tuple[OneClassSvmModel, List[GridPoint]]:
    """
    Train the time-series model on the first 90% of the trusted windows for
    every (gamma, nu) and keep the one labeling most of the last 10% trusted.
    Ties go to the earlier grid point.
    """

    train, validation = temporal_split(features)
    best: Optional[OneClassSvmModel] = None
    best_score = -1.0
    grid = []
    for gamma in gammas:
        for nu in nus:
            model = train_ocsvm(train, gamma, nu, selection=selection)
            score = float(np.mean(model.predict(validation) == 1)) if validation.n_rows else 0.0
            grid.append(GridPoint(gamma=gamma, nu=nu, score=score))
            if score > best_score:
                best, best_score = model, score
    assert best is not None
    logger.info("Time-series model: gamma=%g, nu=%g, score %.4f", best.gamma, best.nu, best_score)
    return best, grid


def grid_search_pc(
    features: FeatureMatrix,
    gammas: Sequence[float] = DEFAULT_GAMMAS,
    nus: Sequence[float] = DEFAULT_NUS,
    folds: int = DEFAULT_FOLDS,
    subsets: Sequence[Sequence[EventKind]] = DEFAULT_SUBSETS,
    selection: Optional[CounterSelection] = None,
) -> Tuple[CrossValidationResult, List[GridPoint]]:
    """
    Cross validate the ensemble for every (gamma, nu) and keep the best mean
    score. Ties go to the earlier grid point.
    """

    best: Optional[CrossValidationResult] = None
    grid = []
    for gamma in gammas:
        for nu in nus:
            result = cross_validate_pc(features, gamma, nu, folds, subsets, selection)
            grid.append(GridPoint(gamma=gamma, nu=nu, score=result.mean_score))
            if best is None or result.mean_score > best.mean_score:
                best = result
    assert best is not None and best.model is not None
    logger.info(
        "Checkpoint ensemble: gamma=%g, nu=%g, CV score %.4f",
        best.model.gamma,
        best.model.nu,
        best.mean_score,
    )
    return best, grid
