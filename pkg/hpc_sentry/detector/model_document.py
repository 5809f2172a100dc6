"""
This file contains the versioned JSON document holding the trained detectors.
"""

from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, field_validator

from ..features.selection import CounterSelection
from ..utils.digest import digest_file
from ..utils.io import PathLike, atomic_write_text
from ..vpmu.signatures import HitProfile
from .cross_validation import CrossValidationResult, GridPoint
from .ensemble import EnsembleModel
from .ocsvm import OneClassSvmModel

SCHEMA_VERSION = 1


class Thresholds(BaseModel):
    t_ts: int = 41
    t_pc: int = 31

    @field_validator("t_ts", "t_pc")
    def validate_odd(cls, v: int) -> int:
        if v < 1 or v % 2 == 0:
            raise ValueError("Majority thresholds must be positive odd numbers.")
        return v


class ModelDocument(BaseModel):
    """
    Everything the online phase needs to judge a suspect build.

    Attributes
    ----------
    schema_version : int
        Version of this layout.
    scheme : str
        Scheme the models were trained on.
    config_digest : str
        Digest of the configuration that produced the models.
    signature_kinds : List[str]
        Kinds of the models held, "time_series" and/or "checkpoint".
    selection : CounterSelection
        Counters of the time-series features.
    thresholds : Thresholds
        Majority thresholds of both paths.
    ts_model : Optional[OneClassSvmModel]
        Time-series model.
    pc_model : Optional[EnsembleModel]
        Checkpoint ensemble.
    cv : Optional[CrossValidationResult]
        Cross validation of the ensemble, without the model.
    grid_ts : List[GridPoint]
        Scores of the time-series grid search.
    grid_pc : List[GridPoint]
        Scores of the checkpoint grid search.
    hit_profile : HitProfile
        Checkpoint hits of the trusted build on every detection seed.
    """

    schema_version: int = SCHEMA_VERSION
    scheme: str
    config_digest: str
    signature_kinds: List[str] = []
    selection: CounterSelection
    thresholds: Thresholds = Thresholds()
    ts_model: Optional[OneClassSvmModel] = None
    pc_model: Optional[EnsembleModel] = None
    cv: Optional[CrossValidationResult] = None
    grid_ts: List[GridPoint] = []
    grid_pc: List[GridPoint] = []
    hit_profile: HitProfile = {}

    @field_validator("schema_version")
    def validate_schema_version(cls, v: int) -> int:
        if v != SCHEMA_VERSION:
            raise ValueError(f"Unsupported model document version {v}, expected {SCHEMA_VERSION}.")
        return v

    @property
    def detection_seeds(self) -> List[int]:
        return [] if self.cv is None else list(self.cv.chosen_seeds)

    def to_json(self, path: PathLike) -> Path:
        atomic_write_text(path, self.model_dump_json(indent=2))
        return Path(path)

    @classmethod
    def from_json_file(cls, path: PathLike) -> "ModelDocument":
        with open(path, "r", encoding="utf-8") as f:
            return cls.model_validate_json(f.read())


def model_digest(path: PathLike) -> str:
    return digest_file(path)
