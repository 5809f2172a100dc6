from .artifacts import ArtifactPaths, RunArtifacts, StageTiming, check_digest
from .detect import DetectionReport, PathReport, run_detect
from .experiment import MatrixReport, run_experiment_matrix
from .offline import run_offline

__all__ = [
    "ArtifactPaths",
    "DetectionReport",
    "MatrixReport",
    "PathReport",
    "RunArtifacts",
    "StageTiming",
    "check_digest",
    "run_detect",
    "run_experiment_matrix",
    "run_offline",
]
