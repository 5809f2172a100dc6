from .feature_matrix import (
    WINDOW_STATISTICS,
    FeatureKind,
    FeatureMatrix,
    kde_scatter,
    pc_features,
    ts_features,
)
from .pca import PcaResult, covariance, jacobi_eigh, pca
from .selection import CounterSelection, SelectionMethod, fisher_scores, select_counters
from .standardization import (
    SIGMA_FLOOR,
    ColumnStats,
    StandardizationStats,
    apply_standardize,
    fit_standardize,
)
from .statistics import kendall_tau, kurtosis, window_statistics

__all__ = [
    "ColumnStats",
    "CounterSelection",
    "FeatureKind",
    "FeatureMatrix",
    "PcaResult",
    "SIGMA_FLOOR",
    "SelectionMethod",
    "StandardizationStats",
    "WINDOW_STATISTICS",
    "apply_standardize",
    "covariance",
    "fisher_scores",
    "fit_standardize",
    "jacobi_eigh",
    "kde_scatter",
    "kendall_tau",
    "kurtosis",
    "pc_features",
    "pca",
    "select_counters",
    "ts_features",
    "window_statistics",
]
