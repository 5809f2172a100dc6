"""
This file contains the coverage comparison of labeled corpora.
"""

import logging
from typing import List, Mapping, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from ..utils.io import PathLike, atomic_write_csv
from ..vpmu.collection import InstrumentedTarget
from ..vpmu.probe import CoverageTracer
from .coverage import CoverageMap
from .fuzzer import execute

logger = logging.getLogger(__name__)


class CoverageRow(BaseModel):
    label: str
    inputs: int
    blocks: int
    edges: int
    improvement_percent: Optional[float] = None


class CoverageReport(BaseModel):
    """
    Blocks and edges covered by every corpus, with the edge improvement over a baseline.

    Attributes
    ----------
    target : str
        Name of the executed target.
    baseline : str
        Label of the corpus improvements are measured against.
    basic_blocks : int
        Blocks covered by the union of all corpora.
    edges : int
        Edges covered by the union of all corpora.
    rows : List[CoverageRow]
        One row per corpus.
    """

    target: str
    baseline: str
    basic_blocks: int
    edges: int
    rows: List[CoverageRow]

    def row(self, label: str) -> CoverageRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rows])

    def to_csv(self, path: PathLike) -> None:
        frame = self.to_frame()
        frame.insert(0, "target", self.target)
        atomic_write_csv(path, frame)


def measure_coverage(target: InstrumentedTarget, inputs: Sequence[bytes]) -> CoverageMap:
    """
    Union of the coverage of every input. Aborted runs contribute what they reached.
    """

    tracer = CoverageTracer()
    coverage = CoverageMap()
    for data in inputs:
        trace, blocks, _ = execute(target, data, tracer)
        coverage.increase(trace, blocks)
    return coverage


def coverage_report(
    corpora: Mapping[str, Sequence[bytes]],
    target: InstrumentedTarget,
    baseline: Optional[str] = None,
) -> CoverageReport:
    """
    Execute every corpus and compare their coverage.

    Parameters
    ----------
    corpora : Mapping[str, Sequence[bytes]]
        Non-empty corpora by label.
    target : InstrumentedTarget
        The instrumented program.
    baseline : Optional[str], optional
        Label of the reference corpus, by default "random" when present, else the first label.

    Returns
    -------
    CoverageReport
        improvement_percent = 100 * (edges - baseline edges) / baseline edges,
        None when the baseline covers no edge.
    """

    if not corpora:
        raise ValueError("At least one corpus is required.")
    for label, inputs in corpora.items():
        if len(inputs) == 0:
            raise ValueError(f"Corpus {label} is empty.")
    labels = list(corpora)
    if baseline is None:
        baseline = "random" if "random" in corpora else labels[0]
    if baseline not in corpora:
        raise KeyError(baseline)

    maps = {label: measure_coverage(target, corpora[label]) for label in labels}
    union = CoverageMap()
    for coverage in maps.values():
        union.merge(coverage)

    reference = maps[baseline].edges
    rows = []
    for label in labels:
        coverage = maps[label]
        improvement = 100.0 * (coverage.edges - reference) / reference if reference else None
        rows.append(
            CoverageRow(
                label=label,
                inputs=len(corpora[label]),
                blocks=coverage.blocks,
                edges=coverage.edges,
                improvement_percent=improvement,
            )
        )
        logger.info("%s/%s: %d blocks, %d edges", target.name, label, coverage.blocks, coverage.edges)
    return CoverageReport(
        target=target.name,
        baseline=baseline,
        basic_blocks=union.blocks,
        edges=union.edges,
        rows=rows,
    )
