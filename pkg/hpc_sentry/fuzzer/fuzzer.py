"""
This file contains the coverage-guided greybox fuzz loop.
"""

import hashlib
import logging
import random
from typing import Dict, List, Sequence, Set, Tuple

from ..exceptions import ConfigurationError, TargetAbortError
from ..vpmu.collection import InstrumentedTarget
from ..vpmu.probe import CoverageTracer
from .corpus import CorpusEntry, FuzzStats, SeedCorpus
from .coverage import CoverageMap, bucket_index
from .mutation import havoc

logger = logging.getLogger(__name__)

LOG_EVERY = 1000


def execute(
    target: InstrumentedTarget, data: bytes, tracer: CoverageTracer
) -> Tuple[Dict[int, int], Set[int], bool]:
    """
    Run `target` on `data` under `tracer`.

    Returns
    -------
    Tuple[Dict[int, int], Set[int], bool]
        Edge hit counts, blocks entered and whether the target aborted.
    """

    tracer.reset()
    aborted = False
    try:
        target.run(data, tracer)
    except TargetAbortError as e:
        logger.debug("Abort on a %d-byte input: %s", len(data), e.reason)
        aborted = True
    return tracer.edges, tracer.blocks, aborted


def trace_digest(trace: Dict[int, int]) -> str:
    """
    Digest of the bucketed edge trace of one execution.
    """

    items = ",".join(f"{slot}:{bucket_index(count)}" for slot, count in sorted(trace.items()))
    return hashlib.sha256(items.encode()).hexdigest()[:16]


def fuzz(
    target: InstrumentedTarget,
    initial_inputs: Sequence[bytes],
    budget_execs: int,
    rng_seed: int,
) -> SeedCorpus:
    """
    Grow a seed corpus by coverage-guided mutation.

    Every initial input is executed once and kept. Entries are then visited
    round robin and each receives `new_edges + 1` mutated children per visit.
    A child that raises some edge bucket is admitted.

    Parameters
    ----------
    target : InstrumentedTarget
        The instrumented program.
    initial_inputs : Sequence[bytes]
        Non-empty starting inputs.
    budget_execs : int
        Exact number of target executions, dry runs included.
    rng_seed : int
        Seed of every mutation choice.

    Returns
    -------
    SeedCorpus
        Initial inputs followed by the admitted children.

    Raises
    ------
    ConfigurationError
        If there are no initial inputs or the budget is smaller than their count.
    """

    if not initial_inputs or any(len(d) == 0 for d in initial_inputs):
        raise ConfigurationError("Fuzzing needs at least one non-empty initial input.")
    if budget_execs < len(initial_inputs):
        raise ConfigurationError(
            f"Budget {budget_execs} is smaller than the {len(initial_inputs)} initial inputs."
        )

    rng = random.Random(rng_seed)
    tracer = CoverageTracer()
    coverage = CoverageMap()
    stats = FuzzStats()
    entries: List[CorpusEntry] = []
    pool: List[bytes] = []

    for data in initial_inputs:
        trace, blocks, aborted = execute(target, data, tracer)
        stats.aborts += int(aborted)
        new_edges = 0 if aborted else coverage.increase(trace, blocks)
        entries.append(
            CorpusEntry(
                data=data,
                trace_digest=trace_digest(trace),
                new_edges=new_edges,
                admitted_at_exec=stats.executions,
            )
        )
        pool.append(data)
        stats.executions += 1

    cursor = 0
    while stats.executions < budget_execs:
        parent = entries[cursor % len(entries)]
        cursor += 1
        for _ in range(parent.energy):
            if stats.executions >= budget_execs:
                break
            child = havoc(parent.data, rng, pool)
            trace, blocks, aborted = execute(target, child, tracer)
            stats.executions += 1
            if aborted:
                stats.aborts += 1
                continue
            new_edges = coverage.increase(trace, blocks)
            if new_edges:
                entries.append(
                    CorpusEntry(
                        data=child,
                        trace_digest=trace_digest(trace),
                        new_edges=new_edges,
                        admitted_at_exec=stats.executions - 1,
                    )
                )
                pool.append(child)
                stats.admitted += 1
            if stats.executions % LOG_EVERY == 0:
                logger.info(
                    "%s: %d/%d execs, %d entries, %d edges",
                    target.name,
                    stats.executions,
                    budget_execs,
                    len(entries),
                    coverage.edges,
                )

    stats.edges = coverage.edges
    stats.blocks = coverage.blocks
    logger.info(
        "%s: fuzzing done, %d entries, %d edges, %d blocks, %d aborts",
        target.name,
        len(entries),
        stats.edges,
        stats.blocks,
        stats.aborts,
    )
    return SeedCorpus(entries=entries, rng_seed=rng_seed, stats=stats)
