import numpy as np
import pytest

from hpc_sentry.exceptions import SignatureCollectionError, TargetAbortError
from hpc_sentry.vpmu import (
    CheckpointSignature,
    EventKind,
    TimeSeriesSignature,
    collect_checkpoints,
    run_checkpoints,
    sample_time_series,
)
from tests.conftest import AbortingProgram, LoopProgram, SilentProgram, StagedProgram


@pytest.mark.parametrize("t_m, t_s", [(100_000, 1000), (1000, 1000), (5000, 7), (12345, 100)])
def test_sample_count(t_m: int, t_s: int) -> None:
    signature = sample_time_series(LoopProgram(), [b"\x01"], t_m, t_s)
    assert isinstance(signature, TimeSeriesSignature)
    assert signature.n_samples == t_m // t_s + 1


def test_monitored_period_is_covered() -> None:
    signature = sample_time_series(LoopProgram(), [b"\x01", b"\x02"], 20_000, 100)
    assert signature.totals()[int(EventKind.CYCLES)] >= 20_000
    assert (signature.samples >= 0).all()


def test_sampling_is_deterministic() -> None:
    first = sample_time_series(LoopProgram(), [b"\x01", b"\x07"], 30_000, 50)
    second = sample_time_series(LoopProgram(), [b"\x01", b"\x07"], 30_000, 50)
    assert np.array_equal(first.samples, second.samples)


@pytest.mark.parametrize("t_m, t_s", [(100, 0), (10, 100)])
def test_invalid_sampling_parameters(t_m: int, t_s: int) -> None:
    with pytest.raises(SignatureCollectionError):
        sample_time_series(LoopProgram(), [b"\x01"], t_m, t_s)


def test_sampling_needs_an_input() -> None:
    with pytest.raises(SignatureCollectionError):
        sample_time_series(LoopProgram(), [], 1000, 10)


def test_abort_carries_the_partial_signature() -> None:
    with pytest.raises(TargetAbortError) as info:
        sample_time_series(AbortingProgram(), [b"\x01", b"\x00"], 1_000_000, 100)
    partial = info.value.partial
    assert isinstance(partial, TimeSeriesSignature)
    assert partial.n_samples == 1_000_000 // 100 + 1


def test_two_seeds_three_single_hit_checkpoints() -> None:
    signature, summary = collect_checkpoints(StagedProgram(), [b"\x01", b"\x02"])
    assert signature.deltas.shape == (6, 8)
    assert summary.runs == 2 and summary.rows == 6
    assert list(signature.checkpoint_ids) == [1, 2, 3, 1, 2, 3]


def test_loop_checkpoint_hit_four_times() -> None:
    signature, _ = collect_checkpoints(LoopProgram(loops=4), [b"\x01", b"\x02"])
    assert signature.n_rows == 8
    assert signature.hits_per_checkpoint() == {1: 8}
    assert list(signature.seed_ids) == [0] * 4 + [1] * 4
    assert list(signature.hit_indices) == [0, 1, 2, 3] * 2


def test_program_without_checkpoints_warns() -> None:
    with pytest.warns(UserWarning):
        signature, summary = collect_checkpoints(SilentProgram(), [b"\x01"])
    assert signature.n_rows == 0
    assert summary.runs == 1


def test_aborted_seed_is_skipped() -> None:
    signature, summary = collect_checkpoints(
        AbortingProgram(), [b"\x01", b"\x00", b"\x02"], seed_ids=[10, 11, 12]
    )
    assert signature.distinct_seeds == [10, 12]
    assert [s.seed_id for s in summary.skipped] == [11]
    assert summary.skipped[0].reason == "zero byte"


def test_runs_are_reproducible() -> None:
    first = run_checkpoints(LoopProgram(), b"\x05", seed_id=3)
    second = run_checkpoints(LoopProgram(), b"\x05", seed_id=3)
    assert first.to_frame().equals(second.to_frame())


def test_collection_needs_seeds() -> None:
    with pytest.raises(SignatureCollectionError):
        collect_checkpoints(LoopProgram(), [])


def test_seed_ids_must_match() -> None:
    with pytest.raises(SignatureCollectionError):
        collect_checkpoints(LoopProgram(), [b"\x01"], seed_ids=[1, 2])


def test_empty_signature() -> None:
    assert CheckpointSignature.empty().n_rows == 0
