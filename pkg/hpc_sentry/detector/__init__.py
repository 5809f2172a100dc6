from .aggregation import SUBVERTED, TRUSTED, Verdict, accuracy, aggregate_majority, build_verdict
from .cross_validation import (
    DEFAULT_FOLDS,
    DEFAULT_GAMMAS,
    DEFAULT_NUS,
    CrossValidationResult,
    GridPoint,
    cross_validate_pc,
    grid_search_pc,
    grid_search_ts,
    make_folds,
    temporal_split,
)
from .ensemble import DEFAULT_SUBSETS, EnsembleModel, combine_unanimous, train_ensemble
from .metrics import decision_auc, overlap_fraction
from .model_document import SCHEMA_VERSION, ModelDocument, Thresholds, model_digest
from .ocsvm import OneClassSvmModel, rbf_kernel, solve_dual, train_ocsvm

__all__ = [
    "CrossValidationResult",
    "DEFAULT_FOLDS",
    "DEFAULT_GAMMAS",
    "DEFAULT_NUS",
    "DEFAULT_SUBSETS",
    "EnsembleModel",
    "GridPoint",
    "ModelDocument",
    "OneClassSvmModel",
    "SCHEMA_VERSION",
    "SUBVERTED",
    "TRUSTED",
    "Thresholds",
    "Verdict",
    "accuracy",
    "aggregate_majority",
    "build_verdict",
    "combine_unanimous",
    "cross_validate_pc",
    "decision_auc",
    "grid_search_pc",
    "grid_search_ts",
    "make_folds",
    "model_digest",
    "overlap_fraction",
    "rbf_kernel",
    "solve_dual",
    "temporal_split",
    "train_ensemble",
    "train_ocsvm",
]
