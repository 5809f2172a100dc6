from ..vpmu.vpmu import VpmuConfig
from .pipeline_config import (
    DetectorConfig,
    FeatureConfig,
    FuzzConfig,
    MatrixConfig,
    PathsConfig,
    PipelineConfig,
    SamplingConfig,
    default_initial_inputs,
    load_config,
)

__all__ = [
    "DetectorConfig",
    "FeatureConfig",
    "FuzzConfig",
    "MatrixConfig",
    "PathsConfig",
    "PipelineConfig",
    "SamplingConfig",
    "VpmuConfig",
    "default_initial_inputs",
    "load_config",
]
