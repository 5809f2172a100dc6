"""
This file contains the online phase: run a suspect build, featurize its
behavior and judge it with the trained models.

The suspect is opaque here. Anything that runs a test input while emitting
probe events can be judged.
"""

import logging
import warnings
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config.pipeline_config import PipelineConfig
from ..detector.aggregation import SUBVERTED, TRUSTED, Verdict, build_verdict
from ..detector.model_document import ModelDocument, model_digest
from ..exceptions import ConfigurationError, TargetAbortError
from ..features.feature_matrix import FeatureKind, FeatureMatrix, pc_features, ts_features
from ..features.selection import CounterSelection
from ..fuzzer.corpus import SeedCorpus
from ..utils.io import PathLike, atomic_write_text
from ..vpmu.collection import InstrumentedTarget, collect_checkpoints, sample_time_series
from ..vpmu.signatures import HitProfile, hit_profile
from .artifacts import ArtifactPaths, RunArtifacts, check_digest
from .offline import detection_inputs

logger = logging.getLogger(__name__)


class PathOutcome(BaseModel):
    """
    Row-level result of one detection path, before aggregation.

    Attributes
    ----------
    kind : FeatureKind
        The path.
    features : Optional[FeatureMatrix]
        Suspect features, None when the suspect aborted.
    decision_values : np.ndarray
        Model decision value of every row.
    row_labels : np.ndarray
        +1 / -1 label of every row. The checkpoint path appends one label
        per missing trusted hit, so it can hold more labels than rows.
    aborted : bool
        The suspect stopped behaving like a signer.
    diagnostic : Optional[str]
        Reason of the abort.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: FeatureKind
    features: Optional[FeatureMatrix] = None
    decision_values: Any = np.zeros(0)
    row_labels: Any = np.zeros(0, dtype=np.int64)
    aborted: bool = False
    diagnostic: Optional[str] = None

    @property
    def rows(self) -> int:
        return int(np.asarray(self.row_labels).size)


class PathReport(BaseModel):
    kind: FeatureKind
    label: int
    rows: int = 0
    verdict: Optional[Verdict] = None
    aborted: bool = False
    diagnostic: Optional[str] = None


class DetectionReport(BaseModel):
    """
    Verdict on one suspect build.

    Attributes
    ----------
    scheme : str
        Scheme of the models.
    suspect : str
        Name of the judged build.
    config_digest : str
        Configuration the models were trained under.
    model_digest : str
        SHA-256 of the model document used.
    ts : PathReport
        Time-series path.
    pc : PathReport
        Checkpoint path.
    label : int
        -1 (subverted) when either path says subverted, else +1.
    """

    model_config = ConfigDict(protected_namespaces=())

    scheme: str
    suspect: str
    config_digest: str
    model_digest: str
    ts: PathReport
    pc: PathReport
    label: int

    @property
    def trusted(self) -> bool:
        return self.label == TRUSTED

    @property
    def exit_code(self) -> int:
        return 0 if self.trusted else 2

    def to_json(self, path: PathLike) -> Path:
        atomic_write_text(path, self.model_dump_json(indent=2))
        return Path(path)


def _aborted(kind: FeatureKind, reason: str) -> PathOutcome:
    logger.warning("%s path: behavioral abort, %s", kind.value, reason)
    return PathOutcome(kind=kind, aborted=True, diagnostic=f"behavioral abort: {reason}")


def ts_outcome(
    document: ModelDocument,
    config: PipelineConfig,
    suspect: InstrumentedTarget,
    inputs: Sequence[bytes],
) -> PathOutcome:
    """
    Sample the suspect over the time-series inputs and label every window.
    """

    if document.ts_model is None:
        raise ConfigurationError("The model document holds no time-series model.")
    try:
        signature = sample_time_series(
            suspect, inputs, config.sampling.t_m, config.sampling.t_s, config.vpmu
        )
    except TargetAbortError as e:
        return _aborted(FeatureKind.TIME_SERIES, e.reason)

    features = ts_features(signature, config.features.t_len, config.features.t_shift, document.selection)
    if features.n_rows == 0:
        return _aborted(FeatureKind.TIME_SERIES, "no complete window was sampled")
    values = document.ts_model.decision_function(features)
    return PathOutcome(
        kind=FeatureKind.TIME_SERIES,
        features=features,
        decision_values=values,
        row_labels=np.where(values >= 0.0, TRUSTED, SUBVERTED),
    )


def hit_count_labels(
    labels: np.ndarray,
    seed_ids: np.ndarray,
    checkpoint_ids: np.ndarray,
    expected: HitProfile,
) -> np.ndarray:
    """
    Row labels corrected by the checkpoint hits the trusted build made on every seed.

    Parameters
    ----------
    labels : np.ndarray
        Model label of every row.
    seed_ids : np.ndarray
        Seed id of every row. Rows of one seed are contiguous.
    checkpoint_ids : np.ndarray
        Checkpoint id of every row.
    expected : HitProfile
        Trusted hits per seed and checkpoint id. Empty keeps `labels` as they are.

    Returns
    -------
    np.ndarray
        Every row of a seed whose hits differ from the trusted hits is
        subverted, and one subverted label per missing trusted hit follows
        the rows of that seed. Seeds without any row contribute all their
        trusted hits as subverted labels at the end.
    """

    labels = np.asarray(labels, dtype=np.int64)
    if not expected:
        return labels
    observed = hit_profile(seed_ids, checkpoint_ids)
    seed_ids = np.asarray(seed_ids)
    parts: List[np.ndarray] = []
    deviating = 0
    for seed_id, hits in observed.items():
        rows = labels[seed_ids == seed_id]
        trusted = expected.get(seed_id, {})
        if hits != trusted:
            deviating += 1
            missing = sum(max(0, n - hits.get(c, 0)) for c, n in trusted.items())
            rows = np.full(rows.size + missing, SUBVERTED, dtype=np.int64)
        parts.append(rows)
    unseen = sum(sum(hits.values()) for seed_id, hits in expected.items() if seed_id not in observed)
    if deviating or unseen:
        logger.info("%d of %d seeds deviate from the trusted checkpoint hits", deviating, len(observed))
    parts.append(np.full(unseen, SUBVERTED, dtype=np.int64))
    return np.concatenate(parts)


def pc_outcome(
    document: ModelDocument,
    config: PipelineConfig,
    suspect: InstrumentedTarget,
    seeds: Sequence[bytes],
) -> PathOutcome:
    """
    Run the suspect once on every detection seed and label every checkpoint row.

    The detection seeds all completed on the trusted build, so a seed the
    suspect aborts on is a behavioral deviation. A seed whose checkpoint hits
    differ from the trusted hits has every row labeled subverted, see
    `hit_count_labels`.
    """

    if document.pc_model is None:
        raise ConfigurationError("The model document holds no checkpoint ensemble.")
    seed_ids = document.detection_seeds
    if not seed_ids or max(seed_ids) >= len(seeds):
        raise ConfigurationError("The detection seeds do not fit the corpus, was it regenerated?")

    signature, summary = collect_checkpoints(
        suspect, [seeds[i] for i in seed_ids], config.vpmu, seed_ids=seed_ids
    )
    if summary.skipped:
        reasons = "; ".join(f"seed {s.seed_id}: {s.reason}" for s in summary.skipped)
        return _aborted(FeatureKind.CHECKPOINT, reasons)
    if signature.n_rows == 0:
        return _aborted(FeatureKind.CHECKPOINT, "no checkpoint was reached")

    selection = document.pc_model.selection or CounterSelection.all_counters()
    features = pc_features(signature, selection)
    values = document.pc_model.decision_function(features)
    labels = hit_count_labels(
        np.where(values >= 0.0, TRUSTED, SUBVERTED),
        signature.seed_ids,
        signature.checkpoint_ids,
        document.hit_profile,
    )
    return PathOutcome(
        kind=FeatureKind.CHECKPOINT,
        features=features,
        decision_values=values,
        row_labels=labels,
    )


def effective_threshold(rows: int, t: int) -> int:
    """
    `t`, or the largest odd number not above `rows` when there are fewer rows than `t`.
    """

    if rows >= t:
        return t
    reduced = rows if rows % 2 == 1 else rows - 1
    warnings.warn(f"Only {rows} rows for a majority threshold of {t}, using {reduced}.")
    return reduced


def aggregate_path(outcome: PathOutcome, t: int, truth: Optional[int] = None) -> PathReport:
    """
    Aggregate the row labels of a path at threshold `t`. An aborted path is subverted.
    """

    if outcome.aborted:
        return PathReport(
            kind=outcome.kind, label=SUBVERTED, aborted=True, diagnostic=outcome.diagnostic
        )
    threshold = effective_threshold(outcome.rows, t)
    if threshold < 1:
        return PathReport(kind=outcome.kind, label=SUBVERTED, diagnostic="no rows to aggregate")
    verdict: Verdict = build_verdict(outcome.row_labels, threshold, truth)
    return PathReport(kind=outcome.kind, label=verdict.label, rows=outcome.rows, verdict=verdict)


def judge(
    document: ModelDocument,
    config: PipelineConfig,
    suspect: InstrumentedTarget,
    corpus: SeedCorpus,
) -> Tuple[PathOutcome, PathOutcome]:
    """
    Row-level outcomes of both paths on `suspect`.
    """

    ts_inputs, seeds = detection_inputs(config, corpus)
    return (
        ts_outcome(document, config, suspect, ts_inputs),
        pc_outcome(document, config, suspect, seeds),
    )


def build_report(
    document: ModelDocument,
    suspect_name: str,
    outcomes: Tuple[PathOutcome, PathOutcome],
    digest: str,
    thresholds: Optional[Tuple[int, int]] = None,
    truth: Optional[int] = None,
) -> DetectionReport:
    """
    Aggregate both paths and combine them: subverted if either path says so.
    """

    t_ts, t_pc = thresholds or (document.thresholds.t_ts, document.thresholds.t_pc)
    ts = aggregate_path(outcomes[0], t_ts, truth)
    pc = aggregate_path(outcomes[1], t_pc, truth)
    label = TRUSTED if ts.label == TRUSTED and pc.label == TRUSTED else SUBVERTED
    return DetectionReport(
        scheme=document.scheme,
        suspect=suspect_name,
        config_digest=document.config_digest,
        model_digest=digest,
        ts=ts,
        pc=pc,
        label=label,
    )


def run_detect(
    config: PipelineConfig,
    suspect: InstrumentedTarget,
    paths: Optional[ArtifactPaths] = None,
    truth: Optional[int] = None,
    write: bool = True,
) -> DetectionReport:
    """
    Judge a suspect build with the models trained for `config`.

    Parameters
    ----------
    config : PipelineConfig
        The configuration the models were trained under.
    suspect : InstrumentedTarget
        The build to judge.
    paths : Optional[ArtifactPaths], optional
        Artifacts of the offline phase, by default the fuzzed-seed folder of `config`.
    truth : Optional[int], optional
        Ground truth label, fills the accuracy of the verdicts, by default None
    write : bool, optional
        Write the report next to the models, by default True

    Returns
    -------
    DetectionReport
        Both path verdicts and the combined label.

    Raises
    ------
    DigestMismatchError
        If the models were trained under another configuration.
    """

    paths = paths or ArtifactPaths.for_config(config)
    artifacts = RunArtifacts.open(paths, config)
    artifacts.require("model_file", "train")
    document = ModelDocument.from_json_file(paths.model_file)
    check_digest(config.digest(), document.config_digest, str(paths.model_file))
    digest = model_digest(paths.model_file)
    corpus = SeedCorpus.load(paths.corpus_dir)

    report = build_report(document, suspect.name, judge(document, config, suspect, corpus), digest, truth=truth)
    logger.info(
        "%s judged %s (time series: %s, checkpoints: %s)",
        suspect.name,
        "trusted" if report.trusted else "subverted",
        _describe(report.ts),
        _describe(report.pc),
    )
    if write:
        report.to_json(paths.report(f"detect-{suspect.name}.json"))
    return report


def _describe(path: PathReport) -> str:
    if path.aborted:
        return str(path.diagnostic)
    if path.verdict is None:
        return "no verdict"
    return f"pos {path.verdict.pos:.3f}"

