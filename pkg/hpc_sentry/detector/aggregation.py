"""
This file contains the majority aggregation of row labels into a verdict.
"""

from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, field_validator

TRUSTED = 1
SUBVERTED = -1


def aggregate_majority(labels: Sequence[int], t: int) -> np.ndarray:
    """
    Majority label of every run of `t` consecutive labels.

    Parameters
    ----------
    labels : Sequence[int]
        Row labels, +1 or -1.
    t : int
        Odd subset size.

    Returns
    -------
    np.ndarray
        floor(len(labels) / t) labels, +1 where the subset sum is positive.
        The trailing remainder is discarded.
    """

    if t < 1 or t % 2 == 0:
        raise ValueError(f"The majority threshold must be a positive odd number, got {t}.")
    values = np.asarray(labels, dtype=np.int64)
    if values.size < t:
        raise ValueError(f"At least {t} labels are needed, got {values.size}.")
    n = values.size // t
    sums = values[: n * t].reshape(n, t).sum(axis=1)
    return np.where(sums > 0, TRUSTED, SUBVERTED)


def accuracy(subset_labels: Sequence[int], truth: int) -> float:
    """
    Fraction of subset labels equal to the ground truth of the run.
    """

    values = np.asarray(subset_labels)
    if values.size == 0:
        raise ValueError("accuracy needs at least one subset label.")
    return float(np.mean(values == truth))


class Verdict(BaseModel):
    """
    Aggregated result of one detection path.

    Attributes
    ----------
    row_labels : List[int]
        Per-row labels.
    subset_labels : List[int]
        Majority labels of consecutive subsets.
    threshold : int
        Subset size.
    pos : float
        Fraction of subsets labeled trusted.
    neg : float
        Fraction of subsets labeled subverted.
    accuracy : Optional[float]
        Agreement with the ground truth, when known.
    label : int
        +1 when most subsets are trusted, else -1.
    """

    row_labels: List[int]
    subset_labels: List[int]
    threshold: int
    pos: float
    neg: float
    accuracy: Optional[float] = None
    label: int

    @field_validator("threshold")
    def validate_threshold(cls, v: int) -> int:
        if v < 1 or v % 2 == 0:
            raise ValueError("threshold must be a positive odd number.")
        return v

    @property
    def trusted(self) -> bool:
        return self.label == TRUSTED


def build_verdict(labels: Sequence[int], t: int, truth: Optional[int] = None) -> Verdict:
    subsets = aggregate_majority(labels, t)
    pos = float(np.mean(subsets == TRUSTED))
    return Verdict(
        row_labels=[int(v) for v in labels],
        subset_labels=[int(v) for v in subsets],
        threshold=t,
        pos=pos,
        neg=1.0 - pos,
        accuracy=None if truth is None else accuracy(subsets, truth),
        label=TRUSTED if pos > 0.5 else SUBVERTED,
    )
