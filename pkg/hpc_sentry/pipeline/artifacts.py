"""
This file contains the artifact index of a run and the digest checks that
keep artifacts of different configurations apart.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..config.pipeline_config import PipelineConfig
from ..exceptions import ConfigurationError, DigestMismatchError
from ..features.selection import CounterSelection
from ..utils.io import PathLike, atomic_write_text

ARTIFACTS_FILE = "artifacts.json"


class StageTiming(BaseModel):
    stage: str
    virtual_cycles: int = 0
    wall_seconds: float = 0.0


class ArtifactPaths:
    """
    File layout of one trained scheme.

    Parameters
    ----------
    root : PathLike
        Folder of the scheme, see PathsConfig.scheme_dir.
    """

    def __init__(self, root: PathLike) -> None:
        self.root = Path(root)
        self.corpus_dir = self.root / "corpus"
        self.signatures_dir = self.root / "signatures"
        self.ts_signature = self.signatures_dir / "time_series.csv"
        self.pc_signature = self.signatures_dir / "checkpoints.csv"
        self.selection = self.root / "selection.json"
        self.features_dir = self.root / "features"
        self.ts_features = self.features_dir / "time_series.csv"
        self.pc_features = self.features_dir / "checkpoints.csv"
        self.model_file = self.root / "model.json"
        self.reports_dir = self.root / "reports"
        self.timing = self.reports_dir / "timing.csv"
        self.index = self.root / ARTIFACTS_FILE

    @classmethod
    def for_config(cls, config: PipelineConfig, label: str = "fuzzed") -> "ArtifactPaths":
        return cls(config.paths.scheme_dir(config.scheme.value, label))

    def relative(self, path: Path) -> str:
        return path.relative_to(self.root).as_posix()

    def report(self, name: str) -> Path:
        return self.reports_dir / name


class RunArtifacts(BaseModel):
    """
    Index of everything a run produced, written next to the artifacts.

    Attributes
    ----------
    scheme : str
        Scheme of the trusted build.
    config_digest : str
        Digest of the configuration that produced every listed artifact.
    label : str
        Seed source, "fuzzed" or "random".
    corpus_manifest : Optional[str]
        Manifest of the seed corpus.
    corpus_size : int
        Entries in the corpus.
    ts_signature : Optional[str]
        Time-series signature CSV.
    pc_signature : Optional[str]
        Checkpoint signature CSV.
    selection : Optional[CounterSelection]
        Counters of the time-series features.
    ts_features : Optional[str]
        Time-series feature CSV.
    pc_features : Optional[str]
        Checkpoint feature CSV.
    model_file : Optional[str]
        Model document.
    model_digest : Optional[str]
        SHA-256 of the model document.
    reports : Dict[str, str]
        Reports by name.
    timing : List[StageTiming]
        Stage timings of the last run. Kept out of the index file.

    Paths are relative to the scheme folder.
    """

    model_config = ConfigDict(protected_namespaces=())

    scheme: str
    config_digest: str
    label: str = "fuzzed"
    corpus_manifest: Optional[str] = None
    corpus_size: int = 0
    ts_signature: Optional[str] = None
    pc_signature: Optional[str] = None
    selection: Optional[CounterSelection] = None
    ts_features: Optional[str] = None
    pc_features: Optional[str] = None
    model_file: Optional[str] = None
    model_digest: Optional[str] = None
    reports: Dict[str, str] = {}
    timing: List[StageTiming] = Field(default=[], exclude=True)

    def require(self, field: str, stage: str) -> Any:
        """
        The value of an artifact field, or a ConfigurationError naming the stage that produces it.
        """

        value = getattr(self, field)
        if value is None:
            raise ConfigurationError(f"No {field.replace('_', ' ')} recorded, run the '{stage}' stage first.")
        return value

    def save(self, paths: ArtifactPaths) -> Path:
        atomic_write_text(paths.index, self.model_dump_json(indent=2))
        return paths.index

    @classmethod
    def load(cls, paths: ArtifactPaths) -> "RunArtifacts":
        return cls.model_validate_json(paths.index.read_text(encoding="utf-8"))

    @classmethod
    def open(cls, paths: ArtifactPaths, config: PipelineConfig, label: str = "fuzzed") -> "RunArtifacts":
        """
        Load the index of `paths`, or start a new one.

        Raises
        ------
        DigestMismatchError
            If the existing index was produced by another configuration.
        """

        if not paths.index.exists():
            return cls(scheme=config.scheme.value, config_digest=config.digest(), label=label)
        artifacts = cls.load(paths)
        check_digest(config.digest(), artifacts.config_digest, str(paths.index))
        return artifacts


def check_digest(expected: str, found: str, artifact: str) -> None:
    """
    Refuse to combine an artifact produced under another configuration.

    Raises
    ------
    DigestMismatchError
        If the digests differ.
    """

    if expected != found:
        raise DigestMismatchError(
            f"{artifact} was produced by configuration {found[:12]}, "
            f"the current configuration is {expected[:12]}."
        )
