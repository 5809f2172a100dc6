import json

import pytest

from hpc_sentry.config import PipelineConfig
from hpc_sentry.exceptions import ConfigurationError, DigestMismatchError, PipelineStageError
from hpc_sentry.fuzzer import CorpusEntry, SeedCorpus
from hpc_sentry.pipeline import ArtifactPaths, RunArtifacts, StageTiming, check_digest
from hpc_sentry.pipeline.offline import detection_inputs, pipeline_stage, write_timing


def test_paths_layout(tmp_path) -> None:
    config = PipelineConfig.model_validate({"scheme": "uov", "paths": {"work_dir": str(tmp_path)}})
    paths = ArtifactPaths.for_config(config)
    assert paths.root == tmp_path / "uov" / "fuzzed"
    assert paths.index == paths.root / "artifacts.json"
    assert paths.relative(paths.ts_signature) == "signatures/time_series.csv"
    assert paths.relative(paths.model_file) == "model.json"
    assert paths.report("timing.csv") == paths.timing
    assert ArtifactPaths.for_config(config, "random").root == tmp_path / "uov" / "random"


def test_open_starts_a_new_index(tmp_path) -> None:
    config = PipelineConfig()
    artifacts = RunArtifacts.open(ArtifactPaths(tmp_path), config)
    assert artifacts.scheme == "lattice"
    assert artifacts.config_digest == config.digest()
    assert artifacts.model_file is None


def test_index_round_trip_leaves_out_timing(tmp_path) -> None:
    config = PipelineConfig()
    paths = ArtifactPaths(tmp_path)
    artifacts = RunArtifacts.open(paths, config)
    artifacts.corpus_size = 12
    artifacts.timing.append(StageTiming(stage="fuzz", wall_seconds=1.5))
    artifacts.save(paths)

    stored = json.loads(paths.index.read_text())
    assert "timing" not in stored
    assert stored["corpus_size"] == 12
    reopened = RunArtifacts.open(paths, config)
    assert reopened.corpus_size == 12
    assert reopened.timing == []


def test_open_refuses_another_configuration(tmp_path) -> None:
    paths = ArtifactPaths(tmp_path)
    RunArtifacts.open(paths, PipelineConfig()).save(paths)
    # paths and variant stay out of the digest
    RunArtifacts.open(paths, PipelineConfig.model_validate({"variant": "prng"}))
    with pytest.raises(DigestMismatchError):
        RunArtifacts.open(paths, PipelineConfig.model_validate({"fuzz": {"budget_execs": 99}}))


def test_require_names_the_missing_stage() -> None:
    artifacts = RunArtifacts(scheme="uov", config_digest="x", pc_signature="signatures/checkpoints.csv")
    assert artifacts.require("pc_signature", "collect") == "signatures/checkpoints.csv"
    with pytest.raises(ConfigurationError, match="'train'"):
        artifacts.require("model_file", "train")


def test_check_digest() -> None:
    check_digest("abc", "abc", "model.json")
    with pytest.raises(DigestMismatchError, match="model.json"):
        check_digest("abc", "abd", "model.json")


def test_stage_failures_carry_the_stage_name() -> None:
    timings = []
    with pytest.raises(PipelineStageError) as info:
        with pipeline_stage("collect", timings):
            raise ValueError("no rows")
    assert info.value.stage == "collect"
    assert isinstance(info.value.cause, ValueError)
    assert [t.stage for t in timings] == ["collect"]


def test_nested_stage_errors_are_not_wrapped_twice() -> None:
    timings = []
    with pytest.raises(PipelineStageError) as info:
        with pipeline_stage("outer", timings):
            with pipeline_stage("inner", timings):
                raise RuntimeError("boom")
    assert info.value.stage == "inner"
    assert [t.stage for t in timings] == ["inner", "outer"]


def test_stage_timing(tmp_path) -> None:
    timings = []
    with pipeline_stage("select", timings) as timing:
        timing.virtual_cycles = 10
    assert timings[0].virtual_cycles == 10
    assert timings[0].wall_seconds >= 0.0

    paths = ArtifactPaths(tmp_path)
    write_timing(paths, timings)
    assert paths.timing.read_text().splitlines()[0] == "stage,virtual_cycles,wall_seconds"


def test_detection_inputs_come_from_the_front_of_the_corpus() -> None:
    corpus = SeedCorpus(entries=[CorpusEntry(data=bytes([i])) for i in range(50)])
    config = PipelineConfig.model_validate({"features": {"max_seeds": 30}, "sampling": {"ts_inputs": 4}})
    ts_inputs, seeds = detection_inputs(config, corpus)
    assert ts_inputs == [bytes([i]) for i in range(4)]
    assert seeds == corpus.inputs[:30]

    small = SeedCorpus(entries=corpus.entries[:3])
    ts_inputs, seeds = detection_inputs(config, small)
    assert len(ts_inputs) == len(seeds) == 3
