"""
This file contains the feature matrices built from the two signature kinds.
"""

import logging
import warnings
from enum import Enum
from typing import Any, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..exceptions import FeatureExtractionError
from ..utils.io import PathLike, atomic_write_csv
from ..utils.naming_conventions import feature_label, parse_feature_label
from ..vpmu.events import EventKind, parse_counters
from ..vpmu.signatures import CheckpointSignature, HitProfile, TimeSeriesSignature, hit_profile
from .selection import CounterSelection
from .statistics import window_statistics

logger = logging.getLogger(__name__)

WINDOW_STATISTICS = ("mean", "kurt", "tau", "max")


class FeatureKind(str, Enum):
    TIME_SERIES = "time_series"
    CHECKPOINT = "checkpoint"


class FeatureMatrix(BaseModel):
    """
    Feature rows of one signature.

    Attributes
    ----------
    kind : FeatureKind
        Signature kind the rows come from.
    values : np.ndarray
        (rows, cols) finite features.
    columns : List[str]
        Column labels. Time-series labels are `<stat>_<COUNTER>`, checkpoint
        labels are counter names.
    counters : List[EventKind]
        Counters the columns are built from, in ordinal order.
    seed_ids : Optional[np.ndarray]
        Checkpoint rows: seed id of every row.
    checkpoint_ids : Optional[np.ndarray]
        Checkpoint rows: checkpoint id of every row.
    t_len : Optional[int]
        Time-series rows: window length in cycles.
    t_shift : Optional[int]
        Time-series rows: window shift in cycles.
    dropped_windows : int
        Time-series rows: windows dropped for having fewer than 2 samples.
    novel : Optional[np.ndarray]
        Set by standardization: rows whose checkpoint id was never seen in training.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: FeatureKind
    values: np.ndarray
    columns: List[str]
    counters: List[EventKind]
    seed_ids: Optional[np.ndarray] = None
    checkpoint_ids: Optional[np.ndarray] = None
    t_len: Optional[int] = None
    t_shift: Optional[int] = None
    dropped_windows: int = 0
    novel: Optional[np.ndarray] = None

    @field_validator("values", mode="before")
    def validate_values(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=np.float64)

    @model_validator(mode="after")
    def validate_shape(self) -> "FeatureMatrix":
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("values must have one column per label.")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Feature matrices must not hold non-finite entries.")
        for keys in (self.seed_ids, self.checkpoint_ids, self.novel):
            if keys is not None and len(keys) != self.values.shape[0]:
                raise ValueError("Row keys must have one entry per row.")
        return self

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    def _rebuild(self, values: np.ndarray, rows: Any = slice(None), **update: Any) -> "FeatureMatrix":
        fields = dict(
            kind=self.kind,
            values=values,
            columns=self.columns,
            counters=self.counters,
            seed_ids=None if self.seed_ids is None else self.seed_ids[rows],
            checkpoint_ids=None if self.checkpoint_ids is None else self.checkpoint_ids[rows],
            t_len=self.t_len,
            t_shift=self.t_shift,
            dropped_windows=self.dropped_windows,
            novel=None if self.novel is None else self.novel[rows],
        )
        fields.update(update)
        return FeatureMatrix(**fields)

    def with_values(self, values: np.ndarray, novel: Optional[np.ndarray] = None) -> "FeatureMatrix":
        return self._rebuild(values, novel=novel if novel is not None else self.novel)

    def select_rows(self, mask: Any) -> "FeatureMatrix":
        return self._rebuild(self.values[mask], mask)

    def select_seeds(self, seeds: Sequence[int]) -> "FeatureMatrix":
        if self.seed_ids is None:
            raise FeatureExtractionError("Only checkpoint features carry seed ids.")
        return self.select_rows(np.isin(self.seed_ids, np.asarray(list(seeds), dtype=np.int64)))

    def hit_profile(self) -> HitProfile:
        """
        Checkpoint hits per seed and checkpoint id.
        """

        if self.seed_ids is None or self.checkpoint_ids is None:
            raise FeatureExtractionError("Only checkpoint features carry hit counts.")
        return hit_profile(self.seed_ids, self.checkpoint_ids)

    def subset_counters(self, counters: Sequence[EventKind]) -> "FeatureMatrix":
        """
        Keep the columns derived from `counters`.
        """

        keep = sorted(set(EventKind(c) for c in counters) & set(self.counters))
        names = {c.name for c in keep}
        indices = [i for i, label in enumerate(self.columns) if _column_counter(label, self.kind) in names]
        return self._rebuild(
            self.values[:, indices], columns=[self.columns[i] for i in indices], counters=keep
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, columns=self.columns)
        if self.checkpoint_ids is not None:
            frame.insert(0, "checkpoint_id", self.checkpoint_ids)
        if self.seed_ids is not None:
            frame.insert(0, "seed_id", self.seed_ids)
        return frame

    def to_csv(self, path: PathLike) -> None:
        atomic_write_csv(path, self.to_frame())

    @classmethod
    def from_csv(cls, path: PathLike, kind: FeatureKind) -> "FeatureMatrix":
        frame = pd.read_csv(path)
        seed_ids = frame.pop("seed_id").to_numpy() if "seed_id" in frame else None
        checkpoint_ids = frame.pop("checkpoint_id").to_numpy() if "checkpoint_id" in frame else None
        columns = list(frame.columns)
        counters = sorted({EventKind.parse(_column_counter(c, kind)) for c in columns})
        return cls(
            kind=kind,
            values=frame.to_numpy(dtype=np.float64),
            columns=columns,
            counters=counters,
            seed_ids=seed_ids,
            checkpoint_ids=checkpoint_ids,
        )


def _column_counter(label: str, kind: FeatureKind) -> str:
    return parse_feature_label(label)[1] if kind == FeatureKind.TIME_SERIES else label


def ts_features(
    signature: TimeSeriesSignature, t_len: int, t_shift: int, selection: CounterSelection
) -> FeatureMatrix:
    """
    Sliding-window statistics of a time-series signature.

    Parameters
    ----------
    signature : TimeSeriesSignature
        Sampled counter deltas.
    t_len : int
        Window length in cycles, converted to t_len // t_s samples.
    t_shift : int
        Window shift in cycles, converted to t_shift // t_s samples.
    selection : CounterSelection
        Counters to featurize.

    Returns
    -------
    FeatureMatrix
        Up to D = t_m // t_shift + 1 rows of 4 * Z columns: mean, kurtosis,
        kendall tau against the sample index, and max of every counter. Windows
        are clamped to the signature end, those left with fewer than 2 samples
        are dropped.

    Raises
    ------
    FeatureExtractionError
        If the window parameters are invalid.
    """

    window = t_len // signature.t_s
    shift = t_shift // signature.t_s
    if t_shift < 1 or shift < 1:
        raise FeatureExtractionError("t_shift must cover at least one sample.")
    if window < 2:
        raise FeatureExtractionError("t_len must cover at least 2 samples.")
    if t_shift > t_len:
        raise FeatureExtractionError("t_shift must not exceed t_len.")

    counters = selection.ordered
    columns = [feature_label(stat, c.name) for c in counters for stat in WINDOW_STATISTICS]
    samples = signature.samples[:, [int(c) for c in counters]].astype(np.float64)
    n_samples = samples.shape[0]
    n_windows = signature.t_m // t_shift + 1

    rows = []
    for i in range(n_windows):
        start = i * shift
        end = min(start + window, n_samples)
        if end - start < 2:
            continue
        rows.append(np.concatenate([window_statistics(samples[start:end, j]) for j in range(len(counters))]))
    dropped = n_windows - len(rows)
    if dropped:
        logger.info("Dropped %d of %d windows with fewer than 2 samples", dropped, n_windows)
    if not rows:
        warnings.warn("No window holds 2 samples, the feature matrix is empty.")

    return FeatureMatrix(
        kind=FeatureKind.TIME_SERIES,
        values=np.array(rows).reshape(len(rows), len(columns)),
        columns=columns,
        counters=counters,
        t_len=t_len,
        t_shift=t_shift,
        dropped_windows=dropped,
    )


def pc_features(signature: CheckpointSignature, selection: CounterSelection) -> FeatureMatrix:
    """
    One row per checkpoint hit, restricted to the selected counters in ordinal order.
    """

    if signature.n_rows == 0:
        raise FeatureExtractionError("Cannot build checkpoint features from an empty signature.")
    counters = selection.ordered
    return FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=signature.deltas[:, [int(c) for c in counters]],
        columns=[c.name for c in counters],
        counters=counters,
        seed_ids=signature.seed_ids.copy(),
        checkpoint_ids=signature.checkpoint_ids.copy(),
    )


def kde_scatter(
    signature: CheckpointSignature,
    checkpoint_id: int,
    pair: Sequence[Any],
    seeds: Optional[Sequence[int]] = None,
) -> pd.DataFrame:
    """
    Counter-pair values at one checkpoint, for external kernel density plots.
    """

    frame = signature.counter_pair(checkpoint_id, parse_counters(pair), seeds)
    frame.insert(0, "checkpoint_id", checkpoint_id)
    return frame
