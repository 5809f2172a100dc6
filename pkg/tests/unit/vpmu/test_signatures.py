import numpy as np
import pytest
from pydantic import ValidationError

from hpc_sentry.vpmu import (
    COUNTER_NAMES,
    CheckpointSignature,
    CounterVector,
    EventKind,
    TimeSeriesSignature,
)


def checkpoint_signature() -> CheckpointSignature:
    deltas = np.arange(32, dtype=np.int64).reshape(4, 8)
    return CheckpointSignature(
        seed_ids=[0, 0, 1, 1],
        checkpoint_ids=[4, 5, 4, 5],
        hit_indices=[0, 0, 0, 0],
        deltas=deltas,
    )


def test_event_kinds_are_stable() -> None:
    assert len(EventKind) == 8
    assert COUNTER_NAMES == [
        "CYCLES",
        "L2_TCM",
        "BR_MSP",
        "L1_ICM",
        "L1_DCA",
        "L2_DCA",
        "L1_DCM",
        "L2_DCM",
    ]


@pytest.mark.parametrize("name", ["L1_ICM", "l1-icm", "l1 icm", " L1-icm "])
def test_counter_names_are_normalized(name: str) -> None:
    assert EventKind.parse(name) == EventKind.L1_ICM


def test_unknown_counter_name() -> None:
    with pytest.raises(ValueError):
        EventKind.parse("L3_TCM")


def test_counter_vector_delta() -> None:
    later = CounterVector(counts=[5, 4, 3, 2, 1, 1, 1, 1], virtual_cycle=5)
    earlier = CounterVector(counts=[2, 1, 0, 0, 0, 0, 0, 1], virtual_cycle=2)
    delta = later.delta(earlier)
    assert delta.counts == [3, 3, 3, 2, 1, 1, 1, 0]
    assert delta.virtual_cycle == 3
    assert delta[EventKind.BR_MSP] == 3


def test_counter_vector_needs_eight_counts() -> None:
    with pytest.raises(ValidationError):
        CounterVector(counts=[1, 2, 3])


def test_time_series_shape_is_enforced() -> None:
    with pytest.raises(ValidationError):
        TimeSeriesSignature(samples=np.zeros((10, 8)), t_s=10, t_m=100)
    signature = TimeSeriesSignature(samples=np.zeros((11, 8)), t_s=10, t_m=100)
    assert signature.final_interval_cycles == 0


def test_negative_deltas_are_rejected() -> None:
    samples = np.zeros((2, 8))
    samples[0, 0] = -1
    with pytest.raises(ValidationError):
        TimeSeriesSignature(samples=samples, t_s=10, t_m=10)


def test_time_series_csv_header(tmp_path) -> None:
    signature = TimeSeriesSignature(samples=np.ones((3, 8)), t_s=5, t_m=10)
    path = tmp_path / "ts.csv"
    signature.to_csv(path)
    assert path.read_text().splitlines()[0] == "sample_idx," + ",".join(COUNTER_NAMES)
    assert np.array_equal(TimeSeriesSignature.from_csv(path, t_s=5, t_m=10).samples, signature.samples)


def test_checkpoint_csv_header(tmp_path) -> None:
    path = tmp_path / "pc.csv"
    signature = checkpoint_signature()
    signature.to_csv(path)
    assert path.read_text().splitlines()[0] == "seed_id,checkpoint_id,hit_idx," + ",".join(COUNTER_NAMES)
    loaded = CheckpointSignature.from_csv(path)
    assert loaded.to_frame().equals(signature.to_frame())


def test_select_seeds_and_concat() -> None:
    signature = checkpoint_signature()
    first = signature.select_seeds([0])
    second = signature.select_seeds([1])
    assert first.n_rows == second.n_rows == 2
    joined = CheckpointSignature.concat([first, second])
    assert joined.to_frame().equals(signature.to_frame())


def test_counter_pair() -> None:
    frame = checkpoint_signature().counter_pair(5, [EventKind.CYCLES, "l1-dcm"])
    assert list(frame.columns) == ["seed_id", "hit_idx", "CYCLES", "L1_DCM"]
    assert list(frame["CYCLES"]) == [8, 24]
    assert list(frame["L1_DCM"]) == [14, 30]


def test_key_columns_must_match_rows() -> None:
    with pytest.raises(ValidationError):
        CheckpointSignature(seed_ids=[0], checkpoint_ids=[1, 2], hit_indices=[0, 0], deltas=np.zeros((2, 8)))
