import json

import numpy as np
import pytest

from hpc_sentry.config import PipelineConfig
from hpc_sentry.detector import SUBVERTED, TRUSTED, ModelDocument, Thresholds
from hpc_sentry.exceptions import ConfigurationError
from hpc_sentry.features import CounterSelection, FeatureKind
from hpc_sentry.fuzzer import SeedCorpus
from hpc_sentry.pipeline.detect import (
    PathOutcome,
    aggregate_path,
    build_report,
    effective_threshold,
    hit_count_labels,
    judge,
    pc_outcome,
    ts_outcome,
)
from tests.conftest import LoopProgram


def outcome(kind: FeatureKind, labels) -> PathOutcome:
    labels = np.asarray(labels, dtype=np.int64)
    return PathOutcome(kind=kind, decision_values=labels.astype(float), row_labels=labels)


def document(t_ts: int = 3, t_pc: int = 3) -> ModelDocument:
    return ModelDocument(
        scheme="lattice",
        config_digest="cafe",
        selection=CounterSelection.all_counters(),
        thresholds=Thresholds(t_ts=t_ts, t_pc=t_pc),
    )


def test_effective_threshold() -> None:
    assert effective_threshold(40, 11) == 11
    assert effective_threshold(11, 11) == 11
    with pytest.warns(UserWarning):
        assert effective_threshold(7, 11) == 7
    with pytest.warns(UserWarning):
        assert effective_threshold(6, 11) == 5


def test_aggregate_path() -> None:
    report = aggregate_path(outcome(FeatureKind.TIME_SERIES, [1, 1, -1, 1, -1, -1]), 3, truth=TRUSTED)
    assert report.rows == 6
    assert report.verdict.subset_labels == [1, -1]
    assert report.label == SUBVERTED
    assert report.verdict.accuracy == 0.5


def test_short_paths_shrink_the_threshold() -> None:
    with pytest.warns(UserWarning):
        report = aggregate_path(outcome(FeatureKind.CHECKPOINT, [1, 1, -1, 1]), 11)
    assert report.verdict.threshold == 3
    assert report.label == TRUSTED


def test_empty_paths_are_subverted() -> None:
    with pytest.warns(UserWarning):
        report = aggregate_path(outcome(FeatureKind.CHECKPOINT, []), 11)
    assert report.label == SUBVERTED
    assert report.verdict is None


def test_aborted_paths_are_subverted() -> None:
    aborted = PathOutcome(kind=FeatureKind.CHECKPOINT, aborted=True, diagnostic="behavioral abort: seed 3")
    report = aggregate_path(aborted, 3)
    assert report.label == SUBVERTED
    assert report.aborted
    assert report.diagnostic == "behavioral abort: seed 3"


def test_report_is_subverted_when_either_path_is() -> None:
    trusted = (outcome(FeatureKind.TIME_SERIES, [1] * 9), outcome(FeatureKind.CHECKPOINT, [1] * 9))
    report = build_report(document(), "lattice", trusted, "digest")
    assert report.trusted and report.exit_code == 0
    assert (report.ts.label, report.pc.label) == (TRUSTED, TRUSTED)
    assert report.config_digest == "cafe"

    mixed = (trusted[0], outcome(FeatureKind.CHECKPOINT, [-1] * 9))
    report = build_report(document(), "lattice-hash", mixed, "digest")
    assert report.label == SUBVERTED and report.exit_code == 2
    assert report.ts.label == TRUSTED


def test_report_thresholds_override_the_document() -> None:
    labels = [1, -1, -1, 1, 1, 1, 1, 1, 1]
    outcomes = (outcome(FeatureKind.TIME_SERIES, labels), outcome(FeatureKind.CHECKPOINT, labels))
    report = build_report(document(), "lattice", outcomes, "digest", thresholds=(9, 1))
    assert report.ts.verdict.threshold == 9
    assert report.pc.verdict.subset_labels == labels


def test_report_json(tmp_path) -> None:
    outcomes = (outcome(FeatureKind.TIME_SERIES, [1] * 3), outcome(FeatureKind.CHECKPOINT, [1] * 3))
    report = build_report(document(), "lattice", outcomes, "digest")
    path = report.to_json(tmp_path / "detect.json")
    stored = json.loads(path.read_text())
    assert stored["label"] == TRUSTED
    assert stored["ts"]["kind"] == "time_series"


def test_documents_without_models_are_rejected() -> None:
    config = PipelineConfig()
    with pytest.raises(ConfigurationError):
        ts_outcome(document(), config, LoopProgram(), [b"\x01"])
    with pytest.raises(ConfigurationError):
        pc_outcome(document(), config, LoopProgram(), [b"\x01"])
    with pytest.raises(ConfigurationError):
        judge(document(), config, LoopProgram(), SeedCorpus())


def test_matching_hits_keep_the_model_labels() -> None:
    labels = np.array([1, -1, 1, 1, 1])
    seeds = np.array([0, 0, 0, 4, 4])
    checkpoints = np.array([1, 2, 2, 1, 2])
    expected = {0: {1: 1, 2: 2}, 4: {1: 1, 2: 1}}
    assert hit_count_labels(labels, seeds, checkpoints, expected).tolist() == [1, -1, 1, 1, 1]
    assert hit_count_labels(labels, seeds, checkpoints, {}).tolist() == [1, -1, 1, 1, 1]


def test_missing_hits_are_subverted() -> None:
    labels = np.array([1, 1, 1, 1])
    seeds = np.array([0, 0, 4, 4])
    checkpoints = np.array([1, 2, 1, 2])
    # seed 0 lost two hits of checkpoint 2, seed 4 matches
    expected = {0: {1: 1, 2: 3}, 4: {1: 1, 2: 1}}
    assert hit_count_labels(labels, seeds, checkpoints, expected).tolist() == [-1, -1, -1, -1, 1, 1]


def test_extra_hits_and_unseen_seeds_are_subverted() -> None:
    labels = np.array([1, 1, 1])
    seeds = np.array([0, 0, 0])
    checkpoints = np.array([1, 1, 2])
    expected = {0: {1: 1, 2: 1}, 7: {1: 2}}
    assert hit_count_labels(labels, seeds, checkpoints, expected).tolist() == [-1, -1, -1, -1, -1]


def test_hit_profile_survives_the_document_json(tmp_path) -> None:
    stored = document().model_copy(update={"hit_profile": {3: {1: 1, 5: 4}}})
    path = stored.to_json(tmp_path / "model.json")
    assert ModelDocument.from_json_file(path).hit_profile == {3: {1: 1, 5: 4}}
