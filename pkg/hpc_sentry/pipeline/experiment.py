"""
This file contains the experiment matrix: every scheme is trained on its
trusted build and every configured variant is judged at every configured
threshold. The matrix also compares fuzzed seeds with random seeds, both in
coverage and in how well they separate trusted from subverted behavior.
"""

import logging
from concurrent.futures import Future, ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel

from ..config.pipeline_config import PipelineConfig
from ..detector.aggregation import SUBVERTED, TRUSTED
from ..detector.metrics import decision_auc, overlap_fraction
from ..detector.model_document import ModelDocument
from ..exceptions import PipelineStageError
from ..fuzzer.corpus import SeedCorpus, random_corpus
from ..fuzzer.report import CoverageReport, coverage_report
from ..targets.subversion import Scheme, SubversionVariant, apply_subversion
from ..utils.io import PathLike, atomic_write_csv, atomic_write_text
from .artifacts import ArtifactPaths
from .detect import PathOutcome, aggregate_path, build_report, judge
from .offline import run_offline

logger = logging.getLogger(__name__)

MATRIX_COLUMNS = [
    "scheme",
    "variant",
    "path",
    "threshold",
    "pos",
    "neg",
    "accuracy",
    "label",
    "diagnostic",
    "config_digest",
    "model_digest",
]
BASELINE_COLUMNS = ["scheme", "variant", "seeds", "path", "auc", "overlap"]
FAILURE_COLUMNS = ["scheme", "variant", "stage", "error"]
COVERAGE_COLUMNS = ["target", "label", "inputs", "blocks", "edges", "improvement_percent"]

Outcomes = Tuple[PathOutcome, PathOutcome]


class MatrixRow(BaseModel):
    """
    Pos/Neg fractions of one (scheme, variant, path, threshold) cell. The
    combined path carries only the label.
    """

    scheme: str
    variant: str
    path: str
    threshold: Optional[int] = None
    pos: Optional[float] = None
    neg: Optional[float] = None
    accuracy: Optional[float] = None
    label: int
    diagnostic: Optional[str] = None
    config_digest: str
    model_digest: str


class BaselineRow(BaseModel):
    scheme: str
    variant: str
    seeds: str
    path: str
    auc: Optional[float] = None
    overlap: Optional[float] = None


class CellFailure(BaseModel):
    scheme: str
    variant: Optional[str] = None
    stage: str
    error: str


class SchemeCell(BaseModel):
    scheme: str
    rows: List[MatrixRow] = []
    coverage: Optional[CoverageReport] = None
    baseline: List[BaselineRow] = []
    failures: List[CellFailure] = []


class MatrixReport(BaseModel):
    """
    Every table of an experiment matrix run.

    Attributes
    ----------
    rows : List[MatrixRow]
        Detection results.
    coverage : List[CoverageReport]
        Fuzzed versus random coverage per scheme.
    baseline : List[BaselineRow]
        Decision-value separation with fuzzed and with random seeds.
    failures : List[CellFailure]
        Cells that could not be computed.
    """

    rows: List[MatrixRow] = []
    coverage: List[CoverageReport] = []
    baseline: List[BaselineRow] = []
    failures: List[CellFailure] = []

    def matrix_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rows], columns=MATRIX_COLUMNS)

    def coverage_frame(self) -> pd.DataFrame:
        frames = []
        for report in self.coverage:
            frame = report.to_frame()
            frame.insert(0, "target", report.target)
            frames.append(frame)
        if not frames:
            return pd.DataFrame(columns=COVERAGE_COLUMNS)
        return pd.concat(frames, ignore_index=True)[COVERAGE_COLUMNS]

    def baseline_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.baseline], columns=BASELINE_COLUMNS)

    def failure_frame(self) -> pd.DataFrame:
        return pd.DataFrame([f.model_dump() for f in self.failures], columns=FAILURE_COLUMNS)

    def write(self, directory: PathLike) -> Dict[str, Path]:
        """
        Write matrix.csv, coverage.csv, baseline.csv, failures.csv and matrix.json into `directory`.
        """

        directory = Path(directory)
        written = {
            "matrix": directory / "matrix.csv",
            "coverage": directory / "coverage.csv",
            "baseline": directory / "baseline.csv",
            "failures": directory / "failures.csv",
            "json": directory / "matrix.json",
        }
        atomic_write_csv(written["matrix"], self.matrix_frame())
        atomic_write_csv(written["coverage"], self.coverage_frame())
        atomic_write_csv(written["baseline"], self.baseline_frame())
        atomic_write_csv(written["failures"], self.failure_frame())
        atomic_write_text(written["json"], self.model_dump_json(indent=2))
        return written


def _truth(variant: SubversionVariant) -> int:
    return TRUSTED if variant == SubversionVariant.TRUSTED else SUBVERTED


def detection_rows(
    config: PipelineConfig,
    variant: SubversionVariant,
    outcomes: Outcomes,
    config_digest: str,
    model_digest: str,
) -> List[MatrixRow]:
    """
    One row per configured threshold of each path, then the combined verdict at the trained thresholds.
    """

    truth = _truth(variant)
    common = dict(
        scheme=config.scheme.value,
        variant=variant.value,
        config_digest=config_digest,
        model_digest=model_digest,
    )
    rows = []
    for outcome, thresholds in zip(outcomes, (config.matrix.thresholds_ts, config.matrix.thresholds_pc)):
        for t in thresholds:
            path = aggregate_path(outcome, t, truth)
            verdict = path.verdict
            rows.append(
                MatrixRow(
                    path=outcome.kind.value,
                    threshold=t,
                    pos=None if verdict is None else verdict.pos,
                    neg=None if verdict is None else verdict.neg,
                    accuracy=None if verdict is None else verdict.accuracy,
                    label=path.label,
                    diagnostic=path.diagnostic,
                    **common,
                )
            )
    return rows


def separation_rows(
    scheme: str,
    variant: SubversionVariant,
    seeds: str,
    document: ModelDocument,
    trusted: Outcomes,
    suspect: Outcomes,
) -> List[BaselineRow]:
    """
    AUC of trusted against suspect decision values, and the fraction of suspect rows inside the trusted region.
    """

    rows = []
    for reference, outcome, model in zip(trusted, suspect, (document.ts_model, document.pc_model)):
        auc = overlap = None
        if not reference.aborted and not outcome.aborted and outcome.features is not None and model is not None:
            auc = decision_auc(reference.decision_values, outcome.decision_values)
            overlap = overlap_fraction(model, outcome.features)
        rows.append(
            BaselineRow(
                scheme=scheme,
                variant=variant.value,
                seeds=seeds,
                path=outcome.kind.value,
                auc=auc,
                overlap=overlap,
            )
        )
    return rows


def _load(config: PipelineConfig, label: str) -> Tuple[ModelDocument, SeedCorpus, ArtifactPaths]:
    paths = ArtifactPaths.for_config(config, label)
    return ModelDocument.from_json_file(paths.model_file), SeedCorpus.load(paths.corpus_dir), paths


def run_scheme_cell(config: PipelineConfig, scheme: Scheme) -> SchemeCell:
    """
    Train one scheme and judge every configured variant. Failures are recorded, not raised.
    """

    config = config.for_cell(scheme)
    cell = SchemeCell(scheme=scheme.value)
    try:
        artifacts = run_offline(config)
    except PipelineStageError as e:
        cell.failures.append(CellFailure(scheme=scheme.value, stage=e.stage, error=str(e.cause)))
        return cell

    document, corpus, paths = _load(config, "fuzzed")
    model_digest = artifacts.model_digest or ""
    random_seeds = random_corpus(corpus, config.fuzz.rng_seed + 1)
    trusted_target = apply_subversion(scheme)
    cell.coverage = coverage_report(
        {"fuzzed": corpus.inputs, "random": random_seeds.inputs}, trusted_target, baseline="random"
    )

    sources: Dict[str, Tuple[ModelDocument, SeedCorpus]] = {"fuzzed": (document, corpus)}
    if config.matrix.random_baseline:
        try:
            run_offline(config, corpus=random_seeds, label="random")
            random_document, random_loaded, _ = _load(config, "random")
            sources["random"] = (random_document, random_loaded)
        except PipelineStageError as e:
            cell.failures.append(
                CellFailure(scheme=scheme.value, stage=f"random baseline {e.stage}", error=str(e.cause))
            )

    reference: Dict[str, Outcomes] = {}
    for label, (doc, seeds) in sources.items():
        try:
            reference[label] = judge(doc, config, trusted_target, seeds)
        except Exception as e:
            cell.failures.append(CellFailure(scheme=scheme.value, stage=f"{label} reference", error=str(e)))

    for variant in config.matrix.variants:
        variant = SubversionVariant(variant)
        try:
            suspect = apply_subversion(scheme, variant)
            if variant == SubversionVariant.TRUSTED and "fuzzed" in reference:
                outcomes = reference["fuzzed"]
            else:
                outcomes = judge(document, config, suspect, corpus)
            cell.rows.extend(detection_rows(config, variant, outcomes, artifacts.config_digest, model_digest))
            report = build_report(document, suspect.name, outcomes, model_digest, truth=_truth(variant))
            report.to_json(paths.report(f"detect-{suspect.name}.json"))
            cell.rows.append(
                MatrixRow(
                    scheme=scheme.value,
                    variant=variant.value,
                    path="combined",
                    label=report.label,
                    config_digest=artifacts.config_digest,
                    model_digest=model_digest,
                )
            )
            if variant == SubversionVariant.TRUSTED:
                continue
            for label, (doc, seeds) in sources.items():
                if label not in reference:
                    continue
                suspect_outcomes = outcomes if label == "fuzzed" else judge(doc, config, suspect, seeds)
                cell.baseline.extend(
                    separation_rows(scheme.value, variant, label, doc, reference[label], suspect_outcomes)
                )
        except Exception as e:
            logger.error("%s/%s failed: %s", scheme.value, variant.value, e)
            cell.failures.append(
                CellFailure(scheme=scheme.value, variant=variant.value, stage="detect", error=str(e))
            )
    return cell


def run_experiment_matrix(config: PipelineConfig, write: bool = True) -> MatrixReport:
    """
    Run every scheme cell of the configured grid.

    Parameters
    ----------
    config : PipelineConfig
        Base configuration. `matrix` selects the schemes, variants and thresholds.
    write : bool, optional
        Write the tables under `paths.matrix_dir`, by default True

    Returns
    -------
    MatrixReport
        Detection, coverage and seed-baseline tables, plus recorded failures.
        An empty grid gives an empty report.
    """

    matrix = config.matrix
    schemes = [Scheme(s) for s in matrix.schemes] if matrix.variants else []
    logger.info(
        "Experiment matrix: %d schemes x %d variants, %d worker(s)",
        len(schemes),
        len(matrix.variants),
        matrix.workers,
    )

    cells: List[SchemeCell] = []
    if matrix.workers > 1 and len(schemes) > 1:
        with ProcessPoolExecutor(max_workers=matrix.workers) as pool:
            futures: List[Tuple[Scheme, Future]] = [
                (scheme, pool.submit(run_scheme_cell, config, scheme)) for scheme in schemes
            ]
            for scheme, future in futures:
                try:
                    cells.append(future.result())
                except Exception as e:
                    logger.error("%s cell failed: %s", scheme.value, e)
                    cells.append(
                        SchemeCell(
                            scheme=scheme.value,
                            failures=[CellFailure(scheme=scheme.value, stage="cell", error=str(e))],
                        )
                    )
    else:
        cells = [run_scheme_cell(config, scheme) for scheme in schemes]

    report = MatrixReport()
    for cell in cells:
        report.rows.extend(cell.rows)
        if cell.coverage is not None:
            report.coverage.append(cell.coverage)
        report.baseline.extend(cell.baseline)
        report.failures.extend(cell.failures)

    if write:
        written = report.write(config.paths.matrix_dir)
        logger.info("Matrix tables written to %s", written["matrix"].parent)
    return report
