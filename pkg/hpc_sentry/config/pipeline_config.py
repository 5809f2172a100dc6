"""
This file contains the PipelineConfig class which holds every knob of the offline and online phases.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..exceptions import ConfigurationError
from ..features.selection import SelectionMethod
from ..targets.subversion import Scheme, SubversionVariant
from ..utils.digest import digest_payload
from ..utils.io import PathLike, atomic_write_text
from ..vpmu.vpmu import VpmuConfig

DIGEST_EXCLUDE = {"paths", "variant", "matrix"}


def default_initial_inputs() -> List[str]:
    """
    Four 64-byte inputs, hex encoded. Each holds a distinct key seed followed by a message.
    """

    return [bytes((17 * i + j) % 256 for j in range(64)).hex() for i in range(4)]


def _odd(v: int, name: str) -> int:
    if v < 1 or v % 2 == 0:
        raise ValueError(f"{name} must be a positive odd number, got {v}.")
    return v


class FuzzConfig(BaseModel):
    """
    Greybox fuzzing settings.

    Attributes
    ----------
    budget_execs : int
        Target executions, dry runs included.
    rng_seed : int
        Seed of every mutation choice.
    initial_inputs : List[str]
        Hex-encoded starting inputs.
    """

    budget_execs: int = Field(default=20000, ge=1)
    rng_seed: int = 0
    initial_inputs: List[str] = Field(default_factory=default_initial_inputs)

    @field_validator("initial_inputs")
    def validate_initial_inputs(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("At least one initial input is required.")
        for item in v:
            try:
                data = bytes.fromhex(item)
            except ValueError:
                raise ValueError(f"Initial input is not valid hex: {item[:16]}...") from None
            if len(data) == 0:
                raise ValueError("Initial inputs must not be empty.")
        return v

    @model_validator(mode="after")
    def validate_budget(self) -> "FuzzConfig":
        if self.budget_execs < len(self.initial_inputs):
            raise ValueError("budget_execs must cover every initial input.")
        return self

    @property
    def inputs(self) -> List[bytes]:
        return [bytes.fromhex(item) for item in self.initial_inputs]


class SamplingConfig(BaseModel):
    """
    Time-series sampling. `ts_inputs` corpus entries are signed round robin
    during the monitored period.
    """

    t_m: int = Field(default=800_000, ge=1)
    t_s: int = Field(default=20, ge=1)
    ts_inputs: int = Field(default=8, ge=1)

    @model_validator(mode="after")
    def validate_period(self) -> "SamplingConfig":
        if self.t_m < self.t_s:
            raise ValueError("t_m must be at least t_s.")
        return self


class FeatureConfig(BaseModel):
    """
    Feature extraction. Window length and shift are in cycles, the defaults
    give windows of 1000 samples shifted by 100 samples at the default t_s.
    `max_seeds` caps the checkpoint seeds.
    """

    t_len: int = Field(default=20_000, ge=1)
    t_shift: int = Field(default=2_000, ge=1)
    z: int = Field(default=4, ge=1, le=8)
    selection_method: SelectionMethod = SelectionMethod.PCA
    threshold: Optional[float] = None
    max_seeds: int = Field(default=90, ge=3)

    @field_validator("selection_method")
    def validate_selection_method(cls, v: SelectionMethod) -> SelectionMethod:
        if v == SelectionMethod.FISHER:
            raise ValueError("The fisher method needs labeled subverted data and cannot drive the offline phase.")
        return v

    @model_validator(mode="after")
    def validate_windows(self) -> "FeatureConfig":
        if self.t_shift > self.t_len:
            raise ValueError("t_shift must not exceed t_len.")
        if self.threshold is not None and self.selection_method == SelectionMethod.PCA:
            raise ValueError("threshold applies to max_std and max_var only.")
        return self


class DetectorConfig(BaseModel):
    """
    One-class SVM grids and majority thresholds.

    Attributes
    ----------
    gammas : List[float]
        RBF widths searched, in grid order.
    nus : List[float]
        Outlier fraction bounds searched, in grid order.
    folds : int
        Seed folds of the checkpoint cross validation.
    t_ts : int
        Majority subset size of the time-series path.
    t_pc : int
        Majority subset size of the checkpoint path.
    """

    gammas: List[float] = [0.01, 0.001, 0.0001]
    nus: List[float] = [0.1, 0.2, 0.3, 0.4]
    folds: int = Field(default=3, ge=2)
    t_ts: int = 41
    t_pc: int = 31

    @field_validator("gammas")
    def validate_gammas(cls, v: List[float]) -> List[float]:
        if not v or any(g <= 0 for g in v):
            raise ValueError("gammas must be a non-empty list of positive values.")
        return v

    @field_validator("nus")
    def validate_nus(cls, v: List[float]) -> List[float]:
        if not v or any(not 0 < n <= 1 for n in v):
            raise ValueError("nus must be a non-empty list of values within (0, 1].")
        return v

    @field_validator("t_ts", "t_pc")
    def validate_thresholds(cls, v: int) -> int:
        return _odd(v, "Majority threshold")


class PathsConfig(BaseModel):
    """
    Output locations. Every scheme gets its own folder under `work_dir`.
    """

    work_dir: str = "hpc-sentry-work"

    def scheme_dir(self, scheme: str, label: str = "fuzzed") -> Path:
        return Path(self.work_dir) / scheme / label

    @property
    def matrix_dir(self) -> Path:
        return Path(self.work_dir) / "matrix"


class MatrixConfig(BaseModel):
    """
    Experiment grid.

    Attributes
    ----------
    schemes : List[Scheme]
        Schemes trained and attacked.
    variants : List[SubversionVariant]
        Suspect builds judged against each trusted model.
    thresholds_ts : List[int]
        Time-series majority thresholds reported.
    thresholds_pc : List[int]
        Checkpoint majority thresholds reported.
    workers : int
        Processes running scheme cells, 1 runs them inline.
    random_baseline : bool
        Also train on a size-matched random corpus and compare.
    """

    schemes: List[Scheme] = list(Scheme)
    variants: List[SubversionVariant] = list(SubversionVariant)
    thresholds_ts: List[int] = [41]
    thresholds_pc: List[int] = [31]
    workers: int = Field(default=1, ge=1)
    random_baseline: bool = True

    @field_validator("thresholds_ts", "thresholds_pc")
    def validate_thresholds(cls, v: List[int]) -> List[int]:
        return [_odd(t, "Majority threshold") for t in v]


class PipelineConfig(BaseModel):
    """
    The complete configuration of a run.

    Attributes
    ----------
    scheme : Scheme
        Scheme under test.
    variant : SubversionVariant
        Build judged by the online phase. Training always uses the trusted build.
    vpmu : VpmuConfig
        Cache geometry and cycle costs.
    fuzz : FuzzConfig
        Seed generation.
    sampling : SamplingConfig
        Time-series sampling.
    features : FeatureConfig
        Windows and counter selection.
    detector : DetectorConfig
        Grids and thresholds.
    paths : PathsConfig
        Output locations.
    matrix : MatrixConfig
        Experiment grid.
    """

    scheme: Scheme = Scheme.LATTICE
    variant: SubversionVariant = SubversionVariant.TRUSTED
    vpmu: VpmuConfig = VpmuConfig()
    fuzz: FuzzConfig = FuzzConfig()
    sampling: SamplingConfig = SamplingConfig()
    features: FeatureConfig = FeatureConfig()
    detector: DetectorConfig = DetectorConfig()
    paths: PathsConfig = PathsConfig()
    matrix: MatrixConfig = MatrixConfig()

    @model_validator(mode="after")
    def validate_windows_fit(self) -> "PipelineConfig":
        if self.features.t_len > self.sampling.t_m:
            raise ValueError("features.t_len must not exceed sampling.t_m.")
        if self.features.t_shift < self.sampling.t_s:
            raise ValueError("features.t_shift must cover at least one sampling interval.")
        return self

    def digest(self) -> str:
        """
        SHA-256 over the canonical JSON of every field that shapes the artifacts.

        Returns
        -------
        str
            The hex digest. Output paths, the suspect variant and the experiment grid are left out.
        """

        return digest_payload(self.model_dump(mode="json", exclude=DIGEST_EXCLUDE))

    def for_cell(self, scheme: Any, variant: Any = SubversionVariant.TRUSTED) -> "PipelineConfig":
        """
        A copy aimed at one scheme and suspect variant.
        """

        return self.model_copy(update={"scheme": Scheme(scheme), "variant": SubversionVariant(variant)})

    def to_json(self, file_path: PathLike = "hpc-sentry.json") -> Dict[str, Any]:
        """
        Write the configuration to a json file.

        Returns
        -------
        Dict[str, Any]
            A Python dictionary version of the json.
        """

        atomic_write_text(file_path, self.model_dump_json(indent=2))
        return self.model_dump(mode="json")

    def to_yaml(self, file_path: PathLike = "hpc-sentry.yaml", write_file: bool = True) -> str:
        """
        Output the configuration to a yaml file and String.

        Parameters
        ----------
        file_path : PathLike, optional
            The file path to write if write_file = True, by default "hpc-sentry.yaml"
        write_file : bool, optional
            Whether to write the file, by default True

        Returns
        -------
        str
            A String representation of the yaml file.
        """

        yaml_string = yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)
        if write_file:
            atomic_write_text(file_path, yaml_string)
        return yaml_string


def load_config(path: PathLike) -> PipelineConfig:
    """
    Read and validate a JSON or YAML configuration file.

    Parameters
    ----------
    path : PathLike
        A .json, .yaml or .yml file.

    Returns
    -------
    PipelineConfig
        The validated configuration.

    Raises
    ------
    ConfigurationError
        If the file cannot be read, parsed or validated.
    """

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read configuration file {path}: {e}") from e

    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            payload = yaml.safe_load(text) or {}
        else:
            payload = json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Cannot parse configuration file {path}: {e}") from e

    if not isinstance(payload, dict):
        raise ConfigurationError(f"Configuration file {path} must hold a mapping.")
    try:
        return PipelineConfig.model_validate(payload)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration in {path}:\n{e}") from e
