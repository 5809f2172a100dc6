import hashlib

import numpy as np
import pytest
from pydantic import ValidationError

from hpc_sentry.detector import (
    DEFAULT_SUBSETS,
    ModelDocument,
    Thresholds,
    combine_unanimous,
    cross_validate_pc,
    grid_search_pc,
    grid_search_ts,
    make_folds,
    model_digest,
    temporal_split,
    train_ensemble,
)
from hpc_sentry.exceptions import CrossValidationError
from hpc_sentry.features import CounterSelection, FeatureKind, FeatureMatrix, SelectionMethod, pc_features
from hpc_sentry.vpmu import CheckpointSignature, EventKind


def trusted_checkpoints(seeds: int = 9, rows_per_seed: int = 4) -> FeatureMatrix:
    rng = np.random.default_rng(3)
    rows = seeds * rows_per_seed
    deltas = rng.integers(100, 200, size=(rows, 8))
    checkpoint_ids = np.tile([1, 2], rows // 2)
    deltas[checkpoint_ids == 2] += 500
    signature = CheckpointSignature(
        seed_ids=np.repeat(np.arange(seeds), rows_per_seed),
        checkpoint_ids=checkpoint_ids,
        hit_indices=np.zeros(rows, dtype=np.int64),
        deltas=deltas,
    )
    return pc_features(signature, CounterSelection.all_counters())


def trusted_windows(rows: int = 30) -> FeatureMatrix:
    rng = np.random.default_rng(4)
    return FeatureMatrix(
        kind=FeatureKind.TIME_SERIES,
        values=rng.normal(size=(rows, 4)),
        columns=["mean_CYCLES", "kurt_CYCLES", "tau_CYCLES", "max_CYCLES"],
        counters=[EventKind.CYCLES],
    )


def test_unanimity() -> None:
    votes = np.array([[1, 1, -1, -1], [1, -1, 1, -1]])
    assert list(combine_unanimous(votes)) == [1, -1, -1, -1]


def test_ensemble_members_follow_the_subsets() -> None:
    features = trusted_checkpoints()
    model = train_ensemble(features, gamma=0.1, nu=0.2)
    assert len(model.members) == 2
    assert model.subsets == DEFAULT_SUBSETS
    assert model.members[0].columns == ["CYCLES", "L2_TCM", "BR_MSP", "L1_ICM"]
    votes = model.member_votes(features)
    assert votes.shape == (2, features.n_rows)
    assert np.array_equal(model.predict(features), combine_unanimous(votes))
    decisions = np.stack(
        [m.decision_function(features.subset_counters(s)) for m, s in zip(model.members, model.subsets)]
    )
    assert np.allclose(model.decision_function(features), decisions.min(axis=0))
    assert (model.gamma, model.nu) == (0.1, 0.2)


def test_subsets_without_columns_are_skipped() -> None:
    features = trusted_checkpoints().subset_counters([EventKind.L1_DCA, EventKind.L2_DCM])
    model = train_ensemble(features, gamma=0.1, nu=0.2)
    assert model.subsets == [[EventKind.L1_DCA, EventKind.L2_DCM]]
    with pytest.raises(ValueError):
        train_ensemble(features, gamma=0.1, nu=0.2, subsets=[[EventKind.CYCLES]])


def test_folds_are_round_robin_over_sorted_seeds() -> None:
    assert make_folds([5, 1, 3, 2, 4, 1], 3) == [[1, 4], [2, 5], [3]]
    with pytest.raises(CrossValidationError):
        make_folds([1, 2], 3)


def test_cross_validation() -> None:
    features = trusted_checkpoints()
    result = cross_validate_pc(features, gamma=0.1, nu=0.2)
    assert result.folds == [[0, 3, 6], [1, 4, 7], [2, 5, 8]]
    assert len(result.scores) == 3
    assert all(0.0 <= s <= 1.0 for s in result.scores)
    assert result.chosen_fold == int(np.argmax(result.scores))
    assert result.chosen_seeds == result.folds[result.chosen_fold]
    assert result.mean_score == pytest.approx(np.mean(result.scores))
    assert result.model is not None


def test_cross_validation_needs_seeds() -> None:
    with pytest.raises(CrossValidationError):
        cross_validate_pc(trusted_windows(), gamma=0.1, nu=0.2)
    with pytest.raises(CrossValidationError):
        cross_validate_pc(trusted_checkpoints(seeds=2, rows_per_seed=10), gamma=0.1, nu=0.2)


def test_temporal_split() -> None:
    train, validation = temporal_split(trusted_windows(30))
    assert (train.n_rows, validation.n_rows) == (27, 3)
    assert np.array_equal(validation.values, trusted_windows(30).values[27:])


def test_grid_search_ts_keeps_the_first_best_point() -> None:
    model, grid = grid_search_ts(trusted_windows(), gammas=[0.1, 0.01], nus=[0.2, 0.4])
    assert [(p.gamma, p.nu) for p in grid] == [(0.1, 0.2), (0.1, 0.4), (0.01, 0.2), (0.01, 0.4)]
    best = max(p.score for p in grid)
    first = next(p for p in grid if p.score == best)
    assert (model.gamma, model.nu) == (first.gamma, first.nu)


def test_grid_search_pc_keeps_the_first_best_point() -> None:
    cv, grid = grid_search_pc(trusted_checkpoints(), gammas=[0.1, 0.01], nus=[0.2, 0.4])
    assert len(grid) == 4
    best = max(p.score for p in grid)
    first = next(p for p in grid if p.score == best)
    assert cv.mean_score == best
    assert cv.model is not None
    assert (cv.model.gamma, cv.model.nu) == (first.gamma, first.nu)


def test_model_document(tmp_path) -> None:
    windows = trusted_windows()
    checkpoints = trusted_checkpoints()
    ts_model, grid_ts = grid_search_ts(windows, gammas=[0.1], nus=[0.2])
    cv, grid_pc = grid_search_pc(checkpoints, gammas=[0.1], nus=[0.2])
    document = ModelDocument(
        scheme="lattice",
        config_digest="abc",
        signature_kinds=["time_series", "checkpoint"],
        selection=CounterSelection(method=SelectionMethod.PCA, chosen=[EventKind.CYCLES]),
        thresholds=Thresholds(t_ts=11, t_pc=11),
        ts_model=ts_model,
        pc_model=cv.model,
        cv=cv.model_copy(update={"model": None}),
        grid_ts=grid_ts,
        grid_pc=grid_pc,
    )
    path = document.to_json(tmp_path / "model.json")
    loaded = ModelDocument.from_json_file(path)
    assert loaded.detection_seeds == cv.chosen_seeds
    assert loaded.thresholds.t_pc == 11
    assert np.allclose(loaded.ts_model.decision_function(windows), ts_model.decision_function(windows))
    assert np.allclose(
        loaded.pc_model.decision_function(checkpoints), cv.model.decision_function(checkpoints)
    )
    assert model_digest(path) == hashlib.sha256(path.read_bytes()).hexdigest()


def test_model_document_validation() -> None:
    selection = CounterSelection.all_counters()
    with pytest.raises(ValidationError):
        ModelDocument(schema_version=2, scheme="uov", config_digest="x", selection=selection)
    with pytest.raises(ValidationError):
        Thresholds(t_ts=4)
    assert ModelDocument(scheme="uov", config_digest="x", selection=selection).detection_seeds == []
