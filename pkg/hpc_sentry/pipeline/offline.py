"""
This file contains the offline phase: fuzz the trusted build, collect both
signature kinds over the corpus, select counters and train the detectors.
"""

import logging
import time
from contextlib import contextmanager
from typing import Iterator, List, Optional, Tuple

import pandas as pd

from ..config.pipeline_config import PipelineConfig
from ..detector.cross_validation import grid_search_pc, grid_search_ts
from ..detector.model_document import ModelDocument, Thresholds, model_digest
from ..exceptions import PipelineStageError
from ..features.feature_matrix import FeatureKind, FeatureMatrix, pc_features, ts_features
from ..features.selection import CounterSelection, select_counters
from ..fuzzer.corpus import SeedCorpus
from ..fuzzer.fuzzer import fuzz
from ..targets.base import BaseTarget
from ..targets.subversion import SubversionVariant, apply_subversion
from ..utils.io import atomic_write_csv, atomic_write_text
from ..vpmu.collection import collect_checkpoints, sample_time_series
from ..vpmu.events import EventKind
from ..vpmu.signatures import CheckpointSignature, TimeSeriesSignature
from .artifacts import ArtifactPaths, RunArtifacts, StageTiming

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ["stage", "virtual_cycles", "wall_seconds"]


@contextmanager
def pipeline_stage(name: str, timings: List[StageTiming]) -> Iterator[StageTiming]:
    """
    Time a stage and wrap its failure in a PipelineStageError carrying the stage name.
    """

    timing = StageTiming(stage=name)
    start = time.perf_counter()
    logger.info("Stage '%s' started", name)
    try:
        yield timing
    except PipelineStageError:
        raise
    except Exception as e:
        logger.error("Stage '%s' failed: %s", name, e)
        raise PipelineStageError(name, e) from e
    finally:
        timing.wall_seconds = time.perf_counter() - start
        timings.append(timing)
    logger.info("Stage '%s' finished in %.2f s", name, timing.wall_seconds)


def write_timing(paths: ArtifactPaths, timings: List[StageTiming]) -> None:
    frame = pd.DataFrame([t.model_dump() for t in timings], columns=TIMING_COLUMNS)
    atomic_write_csv(paths.timing, frame)


def fuzz_stage(
    config: PipelineConfig,
    target: BaseTarget,
    paths: ArtifactPaths,
    artifacts: RunArtifacts,
    corpus: Optional[SeedCorpus] = None,
) -> SeedCorpus:
    """
    Fuzz the target, or persist the given corpus, and record the manifest.
    """

    if corpus is None:
        corpus = fuzz(target, config.fuzz.inputs, config.fuzz.budget_execs, config.fuzz.rng_seed)
    else:
        logger.info("%s: using a supplied corpus of %d inputs", target.name, len(corpus))
    manifest = corpus.save(paths.corpus_dir)
    artifacts.corpus_manifest = paths.relative(manifest)
    artifacts.corpus_size = len(corpus)
    return corpus


def detection_inputs(config: PipelineConfig, corpus: SeedCorpus) -> Tuple[List[bytes], List[bytes]]:
    """
    Inputs of the time-series loop and the checkpoint seeds, both drawn from the front of the corpus.
    """

    seeds = corpus.inputs[: config.features.max_seeds]
    return seeds[: config.sampling.ts_inputs], seeds


def collect_stage(
    config: PipelineConfig,
    target: BaseTarget,
    corpus: SeedCorpus,
    paths: ArtifactPaths,
    artifacts: RunArtifacts,
    timing: Optional[StageTiming] = None,
) -> Tuple[TimeSeriesSignature, CheckpointSignature]:
    ts_inputs, seeds = detection_inputs(config, corpus)
    ts = sample_time_series(target, ts_inputs, config.sampling.t_m, config.sampling.t_s, config.vpmu)
    pc, _ = collect_checkpoints(target, seeds, config.vpmu)
    logger.info("Checkpoint hits over %d seeds: %s", len(pc.distinct_seeds), pc.hits_per_checkpoint())

    ts.to_csv(paths.ts_signature)
    pc.to_csv(paths.pc_signature)
    artifacts.ts_signature = paths.relative(paths.ts_signature)
    artifacts.pc_signature = paths.relative(paths.pc_signature)
    if timing is not None:
        timing.virtual_cycles = config.sampling.t_m + int(pc.deltas[:, int(EventKind.CYCLES)].sum())
    return ts, pc


def select_stage(
    config: PipelineConfig,
    ts: TimeSeriesSignature,
    paths: ArtifactPaths,
    artifacts: RunArtifacts,
) -> CounterSelection:
    selection = select_counters(
        ts,
        method=config.features.selection_method,
        z=config.features.z,
        threshold=config.features.threshold,
    )
    atomic_write_text(paths.selection, selection.model_dump_json(indent=2))
    artifacts.selection = selection
    logger.info("Selected counters: %s", ", ".join(c.name for c in selection.chosen))
    return selection


def train_stage(
    config: PipelineConfig,
    ts: TimeSeriesSignature,
    pc: CheckpointSignature,
    selection: CounterSelection,
    paths: ArtifactPaths,
    artifacts: RunArtifacts,
) -> ModelDocument:
    """
    Build both feature matrices, run the grid searches and write the model document.

    The time-series model uses the selected counters. The checkpoint ensemble
    uses every counter, split into its two ordinal subsets.
    """

    ts_matrix = ts_features(ts, config.features.t_len, config.features.t_shift, selection)
    pc_matrix = pc_features(pc, CounterSelection.all_counters(selection.method))
    ts_matrix.to_csv(paths.ts_features)
    pc_matrix.to_csv(paths.pc_features)
    artifacts.ts_features = paths.relative(paths.ts_features)
    artifacts.pc_features = paths.relative(paths.pc_features)
    return train_models(config, ts_matrix, pc_matrix, selection, paths, artifacts)


def train_models(
    config: PipelineConfig,
    ts_matrix: FeatureMatrix,
    pc_matrix: FeatureMatrix,
    selection: CounterSelection,
    paths: ArtifactPaths,
    artifacts: RunArtifacts,
) -> ModelDocument:
    detector = config.detector
    ts_model, grid_ts = grid_search_ts(ts_matrix, detector.gammas, detector.nus, selection)
    cv, grid_pc = grid_search_pc(
        pc_matrix,
        detector.gammas,
        detector.nus,
        detector.folds,
        selection=CounterSelection.all_counters(selection.method),
    )
    document = ModelDocument(
        scheme=artifacts.scheme,
        config_digest=artifacts.config_digest,
        signature_kinds=[FeatureKind.TIME_SERIES.value, FeatureKind.CHECKPOINT.value],
        selection=selection,
        thresholds=Thresholds(t_ts=detector.t_ts, t_pc=detector.t_pc),
        ts_model=ts_model,
        pc_model=cv.model,
        cv=cv.model_copy(update={"model": None}),
        grid_ts=grid_ts,
        grid_pc=grid_pc,
        hit_profile=pc_matrix.select_seeds(cv.chosen_seeds).hit_profile(),
    )
    document.to_json(paths.model_file)
    artifacts.model_file = paths.relative(paths.model_file)
    artifacts.model_digest = model_digest(paths.model_file)
    logger.info(
        "Model written to %s, %d detection seeds, CV score %.4f",
        paths.model_file,
        len(document.detection_seeds),
        cv.mean_score,
    )
    return document


def run_offline(
    config: PipelineConfig, corpus: Optional[SeedCorpus] = None, label: str = "fuzzed"
) -> RunArtifacts:
    """
    Run the complete offline phase on the trusted build of `config.scheme`.

    Parameters
    ----------
    config : PipelineConfig
        The run configuration. Its variant is ignored, training always uses the trusted build.
    corpus : Optional[SeedCorpus], optional
        Seeds to use instead of fuzzing, by default None
    label : str, optional
        Name of the seed source, selects the output folder, by default "fuzzed"

    Returns
    -------
    RunArtifacts
        The artifact index, with the stage timings.

    Raises
    ------
    PipelineStageError
        If a stage fails. Artifacts of the earlier stages stay on disk.
    """

    config = config.for_cell(config.scheme, SubversionVariant.TRUSTED)
    paths = ArtifactPaths.for_config(config, label)
    artifacts = RunArtifacts(scheme=config.scheme.value, config_digest=config.digest(), label=label)
    target = apply_subversion(config.scheme, SubversionVariant.TRUSTED)
    timings = artifacts.timing
    logger.info("Offline phase for %s (%s seeds), config %s", target.name, label, artifacts.config_digest[:12])

    try:
        with pipeline_stage("fuzz", timings):
            corpus = fuzz_stage(config, target, paths, artifacts, corpus)
        with pipeline_stage("collect", timings) as timing:
            ts, pc = collect_stage(config, target, corpus, paths, artifacts, timing)
        with pipeline_stage("select", timings):
            selection = select_stage(config, ts, paths, artifacts)
        with pipeline_stage("train", timings):
            train_stage(config, ts, pc, selection, paths, artifacts)
    finally:
        write_timing(paths, timings)
        artifacts.reports["timing"] = paths.relative(paths.timing)
        artifacts.save(paths)

    return artifacts
