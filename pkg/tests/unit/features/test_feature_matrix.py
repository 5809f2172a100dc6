import numpy as np
import pytest

from hpc_sentry.exceptions import FeatureExtractionError
from hpc_sentry.features import (
    CounterSelection,
    FeatureKind,
    FeatureMatrix,
    SelectionMethod,
    apply_standardize,
    fit_standardize,
    kde_scatter,
    pc_features,
    ts_features,
)
from hpc_sentry.vpmu import CheckpointSignature, EventKind, TimeSeriesSignature

SELECTION = CounterSelection(method=SelectionMethod.MAX_VAR, chosen=[EventKind.L1_DCM, EventKind.CYCLES])


def ramp_signature() -> TimeSeriesSignature:
    samples = np.zeros((11, 8), dtype=np.int64)
    samples[:, int(EventKind.CYCLES)] = np.arange(11)
    samples[:, int(EventKind.L1_DCM)] = 5
    return TimeSeriesSignature(samples=samples, t_s=10, t_m=100)


def checkpoint_signature() -> CheckpointSignature:
    rng = np.random.default_rng(2)
    rows = 12
    deltas = rng.integers(0, 50, size=(rows, 8))
    deltas[:, int(EventKind.CYCLES)] += np.repeat([100, 1000], rows // 2)
    return CheckpointSignature(
        seed_ids=np.tile([0, 1, 2], rows // 3),
        checkpoint_ids=np.repeat([1, 2], rows // 2),
        hit_indices=np.zeros(rows, dtype=np.int64),
        deltas=deltas,
    )


def test_ts_feature_windows() -> None:
    features = ts_features(ramp_signature(), t_len=40, t_shift=20, selection=SELECTION)
    assert features.kind == FeatureKind.TIME_SERIES
    assert features.columns == [
        "mean_CYCLES",
        "kurt_CYCLES",
        "tau_CYCLES",
        "max_CYCLES",
        "mean_L1_DCM",
        "kurt_L1_DCM",
        "tau_L1_DCM",
        "max_L1_DCM",
    ]
    # 6 windows, the last one starts at the final sample
    assert features.n_rows == 5
    assert features.dropped_windows == 1
    first = features.values[0]
    assert first[:4] == pytest.approx([1.5, 2.5625 / 1.25**2, 1.0, 3.0])
    assert first[4:] == pytest.approx([5.0, 0.0, 0.0, 5.0])
    # clamped window holds samples 8..10
    assert features.values[-1][3] == 10.0


@pytest.mark.parametrize("t_len, t_shift", [(40, 5), (10, 10), (20, 40)])
def test_invalid_windows(t_len: int, t_shift: int) -> None:
    with pytest.raises(FeatureExtractionError):
        ts_features(ramp_signature(), t_len=t_len, t_shift=t_shift, selection=SELECTION)


def test_pc_features() -> None:
    signature = checkpoint_signature()
    features = pc_features(signature, SELECTION)
    assert features.columns == ["CYCLES", "L1_DCM"]
    assert features.values.shape == (12, 2)
    assert np.array_equal(features.seed_ids, signature.seed_ids)
    assert np.array_equal(features.values[:, 1], signature.deltas[:, int(EventKind.L1_DCM)])
    assert features.select_seeds([0]).n_rows == 4
    assert features.hit_profile() == {s: {1: 2, 2: 2} for s in (0, 1, 2)}


def test_time_series_rows_have_no_hit_profile() -> None:
    with pytest.raises(FeatureExtractionError):
        ts_features(ramp_signature(), t_len=40, t_shift=20, selection=SELECTION).hit_profile()


def test_pc_features_need_rows() -> None:
    with pytest.raises(FeatureExtractionError):
        pc_features(CheckpointSignature.empty(), SELECTION)


def test_subset_counters() -> None:
    ts = ts_features(ramp_signature(), t_len=40, t_shift=20, selection=SELECTION)
    only_cycles = ts.subset_counters([EventKind.CYCLES])
    assert only_cycles.columns == ["mean_CYCLES", "kurt_CYCLES", "tau_CYCLES", "max_CYCLES"]
    assert only_cycles.counters == [EventKind.CYCLES]
    pc = pc_features(checkpoint_signature(), CounterSelection.all_counters())
    assert pc.subset_counters([EventKind.L2_DCM, EventKind.L2_TCM]).columns == ["L2_TCM", "L2_DCM"]


def test_feature_csv(tmp_path) -> None:
    features = pc_features(checkpoint_signature(), SELECTION)
    features.to_csv(tmp_path / "pc.csv")
    loaded = FeatureMatrix.from_csv(tmp_path / "pc.csv", FeatureKind.CHECKPOINT)
    assert loaded.columns == features.columns
    assert loaded.counters == [EventKind.CYCLES, EventKind.L1_DCM]
    assert np.array_equal(loaded.checkpoint_ids, features.checkpoint_ids)


def test_non_finite_features_are_rejected() -> None:
    with pytest.raises(ValueError):
        FeatureMatrix(kind=FeatureKind.CHECKPOINT, values=[[np.nan]], columns=["CYCLES"], counters=[EventKind.CYCLES])


def test_kde_scatter() -> None:
    frame = kde_scatter(checkpoint_signature(), 2, ["cycles", "L1-DCM"], seeds=[1])
    assert list(frame.columns) == ["checkpoint_id", "seed_id", "hit_idx", "CYCLES", "L1_DCM"]
    assert len(frame) == 2
    assert (frame["CYCLES"] >= 1000).all()


def test_time_series_standardization() -> None:
    features = ts_features(ramp_signature(), t_len=40, t_shift=20, selection=SELECTION)
    stats = fit_standardize(features)
    z = apply_standardize(features, stats).values
    varying = features.values.std(axis=0) > 0
    assert np.allclose(z.mean(axis=0), 0.0, atol=1e-9)
    assert np.allclose(z.std(axis=0)[varying], 1.0)
    assert np.allclose(z[:, ~varying], 0.0)


def test_checkpoint_standardization_is_per_checkpoint() -> None:
    features = pc_features(checkpoint_signature(), SELECTION)
    stats = fit_standardize(features)
    assert sorted(stats.per_checkpoint) == [1, 2]
    z = apply_standardize(features, stats)
    for checkpoint_id in (1, 2):
        rows = z.values[features.checkpoint_ids == checkpoint_id]
        assert np.allclose(rows.mean(axis=0), 0.0, atol=1e-9)
    assert not z.novel.any()
    group = features.values[features.checkpoint_ids == 2, 0]
    assert stats.coefficient_of_variation[2][0] == pytest.approx(group.std() / group.mean())


def test_unseen_checkpoint_uses_global_statistics() -> None:
    features = pc_features(checkpoint_signature(), SELECTION)
    stats = fit_standardize(features)
    shifted = FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=features.values,
        columns=features.columns,
        counters=features.counters,
        seed_ids=features.seed_ids,
        checkpoint_ids=np.where(features.checkpoint_ids == 2, 9, 1),
    )
    with pytest.warns(UserWarning):
        z = apply_standardize(shifted, stats)
    assert list(z.novel) == [False] * 6 + [True] * 6
    assert np.allclose(z.values[6:], stats.overall.apply(features.values[6:]))


def test_standardization_needs_matching_columns() -> None:
    features = pc_features(checkpoint_signature(), SELECTION)
    stats = fit_standardize(features)
    with pytest.raises(FeatureExtractionError):
        apply_standardize(features.subset_counters([EventKind.CYCLES]), stats)
