"""
This file contains the two signature collection procedures: time-series
sampling over a monitored loop of sign() calls and per-seed checkpoint runs.
"""

import logging
import warnings
from typing import Any, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from ..exceptions import SignatureCollectionError, TargetAbortError
from .events import N_COUNTERS
from .probe import BaseProbe
from .signatures import CheckpointSignature, TimeSeriesSignature
from .vpmu import CycleSampler, MonitorElapsed, Vpmu, VpmuConfig

logger = logging.getLogger(__name__)


class InstrumentedTarget(Protocol):
    """
    Anything that runs one sign() call on a test input while emitting probe events.
    """

    name: str

    def run(self, data: bytes, probe: BaseProbe) -> Any: ...


class SkippedSeed(BaseModel):
    seed_id: int
    reason: str


class CollectionSummary(BaseModel):
    """
    Outcome of a checkpoint collection.

    Attributes
    ----------
    runs : int
        Seeds that completed.
    rows : int
        Checkpoint rows collected.
    skipped : List[SkippedSeed]
        Seeds whose run aborted.
    """

    runs: int = 0
    rows: int = 0
    skipped: List[SkippedSeed] = []


def sample_time_series(
    program: InstrumentedTarget,
    inputs: Sequence[bytes],
    t_m: int,
    t_s: int,
    vpmu_config: Optional[VpmuConfig] = None,
) -> TimeSeriesSignature:
    """
    Run `program` in a loop on a fresh VPMU until `t_m` virtual cycles elapse,
    cycling through `inputs`, and sample the counters every `t_s` cycles.

    Parameters
    ----------
    program : InstrumentedTarget
        The target to monitor.
    inputs : Sequence[bytes]
        Test inputs, used round robin. A single input reproduces the plain
        infinite loop over one message.
    t_m : int
        Monitored period in virtual cycles.
    t_s : int
        Sampling interval in virtual cycles.
    vpmu_config : Optional[VpmuConfig], optional
        VPMU geometry and costs, by default VpmuConfig()

    Returns
    -------
    TimeSeriesSignature
        floor(t_m / t_s) + 1 rows of counter deltas.

    Raises
    ------
    SignatureCollectionError
        If the sampling parameters are invalid or no input is given.
    TargetAbortError
        If the target aborts. The partial signature is attached as `partial`.
    """

    if t_s < 1 or t_m < t_s:
        raise SignatureCollectionError("Sampling requires t_s >= 1 and t_m >= t_s.")
    if len(inputs) == 0:
        raise SignatureCollectionError("At least one input is required for sampling.")

    vpmu = Vpmu(vpmu_config)
    sampler = CycleSampler(t_s=t_s, t_m=t_m)
    vpmu.attach_sampler(sampler)

    calls = 0
    try:
        while True:
            vpmu.start_run()
            program.run(inputs[calls % len(inputs)], vpmu)
            calls += 1
            if calls % 100 == 0:
                logger.debug(
                    "%s: %d sign() calls, %d/%d cycles",
                    program.name,
                    calls,
                    vpmu.cycles,
                    t_m,
                )
    except MonitorElapsed:
        pass
    except TargetAbortError as e:
        partial = TimeSeriesSignature(
            samples=sampler.finish(vpmu.raw_counts()), t_s=t_s, t_m=t_m
        )
        raise TargetAbortError(e.scheme, e.reason, partial=partial) from e

    logger.info(
        "%s: sampled %d intervals over %d sign() calls",
        program.name,
        t_m // t_s + 1,
        calls,
    )
    return TimeSeriesSignature(
        samples=sampler.finish(vpmu.raw_counts()), t_s=t_s, t_m=t_m
    )


def run_checkpoints(
    program: InstrumentedTarget,
    data: bytes,
    seed_id: int,
    vpmu_config: Optional[VpmuConfig] = None,
) -> CheckpointSignature:
    """
    Run `program` once on a fresh VPMU and return its checkpoint log tagged with `seed_id`.
    """

    vpmu = Vpmu(vpmu_config)
    program.run(data, vpmu)
    log = vpmu.checkpoint_log
    if len(log) == 0:
        return CheckpointSignature.empty()
    return CheckpointSignature(
        seed_ids=np.full(len(log), seed_id, dtype=np.int64),
        checkpoint_ids=[e.checkpoint_id for e in log],
        hit_indices=[e.hit_index for e in log],
        deltas=np.asarray([e.delta for e in log], dtype=np.int64).reshape(
            len(log), N_COUNTERS
        ),
    )


def collect_checkpoints(
    program: InstrumentedTarget,
    seeds: Sequence[bytes],
    vpmu_config: Optional[VpmuConfig] = None,
    seed_ids: Optional[Sequence[int]] = None,
) -> Tuple[CheckpointSignature, CollectionSummary]:
    """
    One run per seed, concatenating the checkpoint logs.

    Parameters
    ----------
    program : InstrumentedTarget
        The target to monitor.
    seeds : Sequence[bytes]
        Seed inputs.
    vpmu_config : Optional[VpmuConfig], optional
        VPMU geometry and costs, by default VpmuConfig()
    seed_ids : Optional[Sequence[int]], optional
        Id of each seed, by default its position in `seeds`.

    Returns
    -------
    Tuple[CheckpointSignature, CollectionSummary]
        The signature and a summary listing skipped seeds.

    Raises
    ------
    SignatureCollectionError
        If `seeds` is empty.
    """

    if len(seeds) == 0:
        raise SignatureCollectionError("At least one seed is required.")
    ids = list(seed_ids) if seed_ids is not None else list(range(len(seeds)))
    if len(ids) != len(seeds):
        raise SignatureCollectionError("seed_ids must match seeds in length.")

    parts: List[CheckpointSignature] = []
    summary = CollectionSummary()
    for seed_id, data in zip(ids, seeds):
        try:
            part = run_checkpoints(program, data, seed_id, vpmu_config)
        except TargetAbortError as e:
            summary.skipped.append(SkippedSeed(seed_id=seed_id, reason=e.reason))
            logger.warning("%s: seed %d skipped, %s", program.name, seed_id, e.reason)
            continue
        summary.runs += 1
        parts.append(part)

    signature = CheckpointSignature.concat(parts)
    summary.rows = signature.n_rows
    if signature.n_rows == 0:
        warnings.warn(f"{program.name} produced no checkpoint rows.")
    logger.info(
        "%s: %d checkpoint rows from %d seeds (%d skipped)",
        program.name,
        summary.rows,
        summary.runs,
        len(summary.skipped),
    )
    return signature, summary
