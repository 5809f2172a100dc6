"""
This file contains the window statistics of the time-series features.
"""

import math
from typing import Sequence, Union

import numpy as np

from ..exceptions import FeatureExtractionError

DEGENERATE_VARIANCE = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


def _pair_signs(values: np.ndarray) -> np.ndarray:
    """
    sign(v_j - v_i) for i < j, flattened.
    """

    upper = np.triu_indices(values.shape[0], k=1)
    return np.sign(values[None, :] - values[:, None])[upper]


def kendall_tau(x: ArrayLike, y: ArrayLike) -> float:
    """
    Tie-corrected Kendall rank correlation (tau-b).

    Parameters
    ----------
    x : ArrayLike
        First sequence.
    y : ArrayLike
        Second sequence, of the same length.

    Returns
    -------
    float
        (C - D) / sqrt((n0 - T_x) * (n0 - T_y)), 0 when either factor is 0.

    Raises
    ------
    FeatureExtractionError
        If the lengths differ or fewer than 2 values are given.
    """

    a = np.asarray(x, dtype=np.float64).ravel()
    b = np.asarray(y, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise FeatureExtractionError(f"kendall_tau needs equal lengths, got {a.size} and {b.size}.")
    n = a.size
    if n < 2:
        raise FeatureExtractionError("kendall_tau needs at least 2 values.")

    sa = _pair_signs(a).astype(np.int64)
    sb = _pair_signs(b).astype(np.int64)
    n0 = n * (n - 1) // 2
    tx = int(np.count_nonzero(sa == 0))
    ty = int(np.count_nonzero(sb == 0))
    if n0 - tx == 0 or n0 - ty == 0:
        return 0.0
    c_minus_d = int(np.dot(sa, sb))
    return c_minus_d / math.sqrt((n0 - tx) * (n0 - ty))


def kurtosis(x: ArrayLike) -> float:
    """
    Pearson kurtosis m4 / m2^2 (not excess). 0 for a constant sequence.
    """

    a = np.asarray(x, dtype=np.float64).ravel()
    if a.size < 2:
        raise FeatureExtractionError("kurtosis needs at least 2 values.")
    centered = a - a.mean()
    m2 = float(np.mean(centered**2))
    if m2 < DEGENERATE_VARIANCE:
        return 0.0
    return float(np.mean(centered**4)) / (m2 * m2)


def window_statistics(window: np.ndarray) -> np.ndarray:
    """
    [mean, kurtosis, kendall tau against the sample index, max] of one window.
    """

    return np.array(
        [
            float(window.mean()),
            kurtosis(window),
            kendall_tau(window, np.arange(window.size)),
            float(window.max()),
        ]
    )
