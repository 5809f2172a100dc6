"""
This file contains the two counter fingerprints of a program run.
"""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..utils.io import PathLike, atomic_write_csv
from .events import COUNTER_NAMES, N_COUNTERS, EventKind

TS_INDEX_COLUMN = "sample_idx"
PC_KEY_COLUMNS = ["seed_id", "checkpoint_id", "hit_idx"]

HitProfile = Dict[int, Dict[int, int]]


def _as_counter_matrix(v: Any) -> np.ndarray:
    arr = np.asarray(v, dtype=np.int64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, N_COUNTERS)
    if arr.ndim != 2 or arr.shape[1] != N_COUNTERS:
        raise ValueError(f"Expected a rows x {N_COUNTERS} counter matrix.")
    if (arr < 0).any():
        raise ValueError("Counter deltas must be non-negative.")
    return arr


def hit_profile(seed_ids: np.ndarray, checkpoint_ids: np.ndarray) -> HitProfile:
    """
    Hits of every checkpoint id within the run of every seed, seeds in row order.
    """

    profile: HitProfile = {}
    for seed_id, checkpoint_id in zip(np.asarray(seed_ids).tolist(), np.asarray(checkpoint_ids).tolist()):
        hits = profile.setdefault(int(seed_id), {})
        hits[int(checkpoint_id)] = hits.get(int(checkpoint_id), 0) + 1
    return profile


class TimeSeriesSignature(BaseModel):
    """
    Counter deltas sampled every `t_s` virtual cycles over a monitored period of `t_m` cycles.

    Attributes
    ----------
    samples : np.ndarray
        N x 8 matrix of per-interval deltas, N = floor(t_m / t_s) + 1.
    t_s : int
        Sampling interval in virtual cycles.
    t_m : int
        Monitored period in virtual cycles.
    partial_final : bool
        The last row covers the remainder interval after the last full
        `t_s` boundary and is zero when nothing ran in it.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    samples: np.ndarray
    t_s: int
    t_m: int
    partial_final: bool = True

    @field_validator("samples", mode="before")
    def validate_samples(cls, v: Any) -> np.ndarray:
        return _as_counter_matrix(v)

    @model_validator(mode="after")
    def validate_shape(self) -> "TimeSeriesSignature":
        if self.t_s < 1 or self.t_m < self.t_s:
            raise ValueError("Sampling requires t_s >= 1 and t_m >= t_s.")
        expected = self.t_m // self.t_s + 1
        if self.samples.shape[0] != expected:
            raise ValueError(
                f"Expected {expected} samples for t_m={self.t_m}, t_s={self.t_s}, received {self.samples.shape[0]}"
            )
        return self

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def final_interval_cycles(self) -> int:
        """
        Length of the final partial interval.
        """

        return self.t_m - (self.n_samples - 1) * self.t_s

    def column(self, event: EventKind) -> np.ndarray:
        return self.samples[:, int(event)]

    def totals(self) -> np.ndarray:
        return self.samples.sum(axis=0)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.samples, columns=COUNTER_NAMES)
        frame.insert(0, TS_INDEX_COLUMN, np.arange(self.n_samples, dtype=np.int64))
        return frame

    def to_csv(self, path: PathLike) -> None:
        atomic_write_csv(path, self.to_frame())

    @classmethod
    def from_csv(cls, path: PathLike, t_s: int, t_m: int) -> "TimeSeriesSignature":
        frame = pd.read_csv(path)
        return cls(samples=frame[COUNTER_NAMES].to_numpy(), t_s=t_s, t_m=t_m)


class CheckpointSignature(BaseModel):
    """
    Per-hit counter deltas at program checkpoints, tagged with the seed that produced them.

    Attributes
    ----------
    seed_ids : np.ndarray
        Seed id per row.
    checkpoint_ids : np.ndarray
        Checkpoint id per row.
    hit_indices : np.ndarray
        Number of earlier hits of the same checkpoint within the run.
    deltas : np.ndarray
        rows x 8 counter deltas since the previous checkpoint event.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    seed_ids: np.ndarray
    checkpoint_ids: np.ndarray
    hit_indices: np.ndarray
    deltas: np.ndarray

    @field_validator("seed_ids", "checkpoint_ids", "hit_indices", mode="before")
    def validate_keys(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=np.int64).reshape(-1)

    @field_validator("deltas", mode="before")
    def validate_deltas(cls, v: Any) -> np.ndarray:
        return _as_counter_matrix(v)

    @model_validator(mode="after")
    def validate_lengths(self) -> "CheckpointSignature":
        n = self.deltas.shape[0]
        if not (len(self.seed_ids) == len(self.checkpoint_ids) == len(self.hit_indices) == n):
            raise ValueError("Key columns and deltas must have the same number of rows.")
        return self

    @classmethod
    def empty(cls) -> "CheckpointSignature":
        return cls(seed_ids=[], checkpoint_ids=[], hit_indices=[], deltas=[])

    @classmethod
    def concat(cls, parts: Sequence["CheckpointSignature"]) -> "CheckpointSignature":
        if len(parts) == 0:
            return cls.empty()
        return cls(
            seed_ids=np.concatenate([p.seed_ids for p in parts]),
            checkpoint_ids=np.concatenate([p.checkpoint_ids for p in parts]),
            hit_indices=np.concatenate([p.hit_indices for p in parts]),
            deltas=np.concatenate([p.deltas for p in parts], axis=0),
        )

    @property
    def n_rows(self) -> int:
        return int(self.deltas.shape[0])

    @property
    def distinct_seeds(self) -> List[int]:
        return sorted(set(int(s) for s in self.seed_ids))

    def hits_per_checkpoint(self) -> Dict[int, int]:
        """
        Total number of rows per checkpoint id.
        """

        ids, counts = np.unique(self.checkpoint_ids, return_counts=True)
        return {int(i): int(c) for i, c in zip(ids, counts)}

    def select_seeds(self, seeds: Sequence[int]) -> "CheckpointSignature":
        mask = np.isin(self.seed_ids, np.asarray(list(seeds), dtype=np.int64))
        return self.select_rows(mask)

    def select_rows(self, mask: np.ndarray) -> "CheckpointSignature":
        return CheckpointSignature(
            seed_ids=self.seed_ids[mask],
            checkpoint_ids=self.checkpoint_ids[mask],
            hit_indices=self.hit_indices[mask],
            deltas=self.deltas[mask],
        )

    def counter_pair(
        self, checkpoint_id: int, pair: Sequence[EventKind], seeds: Optional[Sequence[int]] = None
    ) -> pd.DataFrame:
        """
        Values of two counters at one checkpoint, one row per hit. Written out
        for kernel density plots of counter pairs.
        """

        source = self if seeds is None else self.select_seeds(seeds)
        mask = source.checkpoint_ids == checkpoint_id
        first, second = (EventKind.parse(p) for p in pair)
        return pd.DataFrame(
            {
                "seed_id": source.seed_ids[mask],
                "hit_idx": source.hit_indices[mask],
                first.name: source.deltas[mask, int(first)],
                second.name: source.deltas[mask, int(second)],
            }
        )

    def to_frame(self) -> pd.DataFrame:
        keys = pd.DataFrame(
            dict(zip(PC_KEY_COLUMNS, (self.seed_ids, self.checkpoint_ids, self.hit_indices)))
        )
        return pd.concat([keys, pd.DataFrame(self.deltas, columns=COUNTER_NAMES)], axis=1)

    def to_csv(self, path: PathLike) -> None:
        atomic_write_csv(path, self.to_frame())

    @classmethod
    def from_csv(cls, path: PathLike) -> "CheckpointSignature":
        frame = pd.read_csv(path)
        return cls(
            seed_ids=frame["seed_id"].to_numpy(),
            checkpoint_ids=frame["checkpoint_id"].to_numpy(),
            hit_indices=frame["hit_idx"].to_numpy(),
            deltas=frame[COUNTER_NAMES].to_numpy(),
        )
