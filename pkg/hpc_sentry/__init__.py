from .config import PipelineConfig, load_config
from .detector import ModelDocument, OneClassSvmModel, train_ocsvm
from .fuzzer import SeedCorpus, fuzz
from .pipeline import run_detect, run_experiment_matrix, run_offline
from .targets import apply_subversion
from .vpmu import Vpmu, VpmuConfig

__version__ = "0.1.0"

__all__ = [
    "ModelDocument",
    "OneClassSvmModel",
    "PipelineConfig",
    "SeedCorpus",
    "Vpmu",
    "VpmuConfig",
    "apply_subversion",
    "fuzz",
    "load_config",
    "run_detect",
    "run_experiment_matrix",
    "run_offline",
    "train_ocsvm",
]
