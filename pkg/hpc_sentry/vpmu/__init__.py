from .cache import CacheConfig, CacheModel
from .collection import (
    CollectionSummary,
    InstrumentedTarget,
    collect_checkpoints,
    run_checkpoints,
    sample_time_series,
)
from .events import COUNTER_NAMES, N_COUNTERS, CounterVector, EventKind
from .predictor import BranchPredictor
from .probe import BaseProbe, CoverageTracer, NullProbe, edge_slot
from .signatures import CheckpointSignature, HitProfile, TimeSeriesSignature, hit_profile
from .vpmu import (
    CheckpointEvent,
    CycleSampler,
    Vpmu,
    VpmuConfig,
    checkpoint,
    record_access,
    record_branch,
)

__all__ = [
    "BaseProbe",
    "BranchPredictor",
    "CacheConfig",
    "CacheModel",
    "CheckpointEvent",
    "CheckpointSignature",
    "CollectionSummary",
    "COUNTER_NAMES",
    "CounterVector",
    "CoverageTracer",
    "CycleSampler",
    "EventKind",
    "HitProfile",
    "InstrumentedTarget",
    "N_COUNTERS",
    "NullProbe",
    "TimeSeriesSignature",
    "Vpmu",
    "VpmuConfig",
    "checkpoint",
    "collect_checkpoints",
    "edge_slot",
    "hit_profile",
    "record_access",
    "record_branch",
    "run_checkpoints",
    "sample_time_series",
]
