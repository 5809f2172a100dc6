"""
This file contains the deterministic virtual performance monitoring unit.
"""

import math
from typing import Dict, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .cache import CacheConfig, CacheModel
from .events import N_COUNTERS, CounterVector, EventKind
from .predictor import PREDICTOR_INITIAL_STATE, BranchPredictor
from .probe import CODE_BASE, LINE_BYTES, BaseProbe, CoverageTracer

_CYCLES = int(EventKind.CYCLES)
_L2_TCM = int(EventKind.L2_TCM)
_BR_MSP = int(EventKind.BR_MSP)
_L1_ICM = int(EventKind.L1_ICM)
_L1_DCA = int(EventKind.L1_DCA)
_L2_DCA = int(EventKind.L2_DCA)
_L1_DCM = int(EventKind.L1_DCM)
_L2_DCM = int(EventKind.L2_DCM)


class VpmuConfig(BaseModel):
    """
    Cache geometry and cycle costs of the virtual PMU.

    Attributes
    ----------
    l1i : CacheConfig
        Level-1 instruction cache, 32 KiB 4-way by default.
    l1d : CacheConfig
        Level-1 data cache, 32 KiB 4-way by default.
    l2 : CacheConfig
        Unified level-2 cache, 256 KiB 8-way by default.
    probe_cycles : int
        Cycles charged for every branch or access probe.
    l1_miss_cycles : int
        Additional cycles for a level-1 miss.
    l2_miss_cycles : int
        Additional cycles for a level-2 miss.
    mispredict_cycles : int
        Additional cycles for a branch misprediction.
    predictor_initial_state : int
        Initial 2-bit counter value of an unseen branch site.
    """

    model_config = ConfigDict(frozen=True)

    l1i: CacheConfig = CacheConfig(size_bytes=32 * 1024, ways=4)
    l1d: CacheConfig = CacheConfig(size_bytes=32 * 1024, ways=4)
    l2: CacheConfig = CacheConfig(size_bytes=256 * 1024, ways=8)
    probe_cycles: int = Field(default=1, ge=1)
    l1_miss_cycles: int = Field(default=10, ge=0)
    l2_miss_cycles: int = Field(default=50, ge=0)
    mispredict_cycles: int = Field(default=12, ge=0)
    predictor_initial_state: int = Field(default=PREDICTOR_INITIAL_STATE, ge=0, le=3)


class CheckpointEvent(NamedTuple):
    checkpoint_id: int
    hit_index: int
    delta: Tuple[int, ...]


class MonitorElapsed(Exception):
    """
    Raised from inside a probe call once the monitored period is over.
    """


class CycleSampler:
    """
    Closes one row of counter deltas every `t_s` virtual cycles and stops the
    run once `t_m` cycles have elapsed.

    Events are atomic: an event that crosses several boundaries is charged to
    the first interval it closes and the following intervals stay at zero.
    """

    def __init__(self, t_s: int, t_m: int) -> None:
        self.t_s = t_s
        self.t_m = t_m
        self.n_full = t_m // t_s
        self.rows: List[List[int]] = []
        self.next_boundary = t_s
        self._last = [0] * N_COUNTERS

    def on_cycle(self, counts: List[int]) -> None:
        while len(self.rows) < self.n_full and counts[_CYCLES] >= self.next_boundary:
            self.rows.append([a - b for a, b in zip(counts, self._last)])
            self._last = list(counts)
            self.next_boundary += self.t_s
        if len(self.rows) == self.n_full:
            self.next_boundary = self.t_m
            if counts[_CYCLES] >= self.t_m:
                raise MonitorElapsed()

    def finish(self, counts: List[int]) -> List[List[int]]:
        """
        All N rows: the closed intervals, zero rows for intervals never reached,
        and the final partial interval.
        """

        rows = list(self.rows)
        while len(rows) < self.n_full:
            rows.append([0] * N_COUNTERS)
        rows.append([a - b for a, b in zip(counts, self._last)])
        return rows


class Vpmu(BaseProbe):
    """
    Virtual performance monitoring unit.

    Targets emit branch, access, block and checkpoint probes. The VPMU runs
    them through a 2-bit branch predictor and an L1I/L1D/L2 LRU cache
    hierarchy and keeps the 8 counters of `EventKind`. The state depends on
    the probe sequence only.

    Attributes
    ----------
    config : VpmuConfig
        Geometry and costs.
    checkpoint_log : List[CheckpointEvent]
        (checkpoint id, hit index, delta since the previous checkpoint event)
        for the current run.
    tracer : Optional[CoverageTracer]
        Receives block transitions when attached.
    """

    def __init__(
        self,
        config: Optional[VpmuConfig] = None,
        tracer: Optional[CoverageTracer] = None,
    ) -> None:
        self.config = config or VpmuConfig()
        self.l1i = CacheModel(self.config.l1i)
        self.l1d = CacheModel(self.config.l1d)
        self.l2 = CacheModel(self.config.l2)
        self.predictor = BranchPredictor(self.config.predictor_initial_state)
        self.tracer = tracer
        self.checkpoint_log: List[CheckpointEvent] = []

        self._counts = [0] * N_COUNTERS
        self._probe = self.config.probe_cycles
        self._l1_miss = self.config.l1_miss_cycles
        self._l2_miss = self.config.l2_miss_cycles
        self._mispredict = self.config.mispredict_cycles
        self._hits: Dict[int, int] = {}
        self._last_checkpoint = [0] * N_COUNTERS
        self._sampler: Optional[CycleSampler] = None
        self._next_boundary: float = math.inf

    @property
    def counters(self) -> CounterVector:
        return CounterVector(
            counts=list(self._counts), virtual_cycle=self._counts[_CYCLES]
        )

    @property
    def cycles(self) -> int:
        return self._counts[_CYCLES]

    def attach_sampler(self, sampler: CycleSampler) -> None:
        self._sampler = sampler
        self._next_boundary = sampler.next_boundary

    def raw_counts(self) -> List[int]:
        return list(self._counts)

    def start_run(self) -> None:
        """
        Begin a new run on a warm VPMU: the checkpoint log and hit indices
        restart, caches, predictor and counters keep their state.
        """

        self.checkpoint_log = []
        self._hits = {}
        self._last_checkpoint = list(self._counts)

    def _advance(self, cycles: int) -> None:
        counts = self._counts
        counts[_CYCLES] += cycles
        if counts[_CYCLES] >= self._next_boundary:
            sampler = self._sampler
            assert sampler is not None
            sampler.on_cycle(counts)
            self._next_boundary = sampler.next_boundary

    def record_branch(self, site: int, taken: bool) -> None:
        cycles = self._probe
        if self.predictor.update(site, taken):
            self._counts[_BR_MSP] += 1
            cycles += self._mispredict
        self._advance(cycles)

    def record_access(self, address: int, is_instruction: bool = False) -> None:
        counts = self._counts
        cycles = self._probe
        if is_instruction:
            if not self.l1i.access(address):
                counts[_L1_ICM] += 1
                cycles += self._l1_miss
                if not self.l2.access(address):
                    counts[_L2_TCM] += 1
                    cycles += self._l2_miss
        else:
            counts[_L1_DCA] += 1
            if not self.l1d.access(address):
                counts[_L1_DCM] += 1
                counts[_L2_DCA] += 1
                cycles += self._l1_miss
                if not self.l2.access(address):
                    counts[_L2_DCM] += 1
                    counts[_L2_TCM] += 1
                    cycles += self._l2_miss
        self._advance(cycles)

    def branch(self, site: int, taken: bool) -> None:
        self.record_branch(site, taken)

    def access(self, address: int, is_instruction: bool = False) -> None:
        self.record_access(address, is_instruction)

    def block(self, block_id: int) -> None:
        if self.tracer is not None:
            self.tracer.block(block_id)
        self.record_access(CODE_BASE + (block_id & 0xFFFF) * LINE_BYTES, True)

    def checkpoint(self, checkpoint_id: int) -> None:
        hit = self._hits.get(checkpoint_id, 0)
        self._hits[checkpoint_id] = hit + 1
        counts = self._counts
        self.checkpoint_log.append(
            CheckpointEvent(
                checkpoint_id,
                hit,
                tuple(a - b for a, b in zip(counts, self._last_checkpoint)),
            )
        )
        self._last_checkpoint = list(counts)


def record_branch(state: Vpmu, site: int, taken: bool) -> None:
    state.record_branch(site, taken)


def record_access(state: Vpmu, address: int, is_instruction: bool = False) -> None:
    state.record_access(address, is_instruction)


def checkpoint(state: Vpmu, checkpoint_id: int) -> None:
    state.checkpoint(checkpoint_id)
