"""
This file contains the AFL-style edge coverage map.
"""

from typing import Iterable, Mapping, Set

import numpy as np

from ..vpmu.probe import EDGE_MAP_SIZE

BUCKET_LOWER_BOUNDS = (1, 2, 3, 4, 8, 16, 32, 128)
"""Smallest hit count of bucket 1..8. Bucket 0 means never hit."""

_BUCKETS = np.searchsorted(np.array(BUCKET_LOWER_BOUNDS), np.arange(129), side="right").astype(
    np.uint8
)


def bucket_index(count: int) -> int:
    """
    Bucket of a hit count: 0 for 0, then 1, 2, 3, 4-7, 8-15, 16-31, 32-127, 128+.
    """

    return int(_BUCKETS[min(count, 128)])


class CoverageMap:
    """
    Bucketed hit counts of every edge-map slot and the set of basic blocks seen.
    """

    def __init__(self) -> None:
        self.edge_buckets = np.zeros(EDGE_MAP_SIZE, dtype=np.uint8)
        self.seen_blocks: Set[int] = set()

    @property
    def edges(self) -> int:
        return int(np.count_nonzero(self.edge_buckets))

    @property
    def blocks(self) -> int:
        return len(self.seen_blocks)

    def copy(self) -> "CoverageMap":
        other = CoverageMap()
        other.edge_buckets = self.edge_buckets.copy()
        other.seen_blocks = set(self.seen_blocks)
        return other

    def merge(self, other: "CoverageMap") -> None:
        np.maximum(self.edge_buckets, other.edge_buckets, out=self.edge_buckets)
        self.seen_blocks |= other.seen_blocks

    def increase(self, trace: Mapping[int, int], blocks: Iterable[int] = ()) -> int:
        """
        Merge a trace into the map.

        Returns
        -------
        int
            Number of slots whose bucket increased.
        """

        self.seen_blocks.update(blocks)
        if not trace:
            return 0
        slots = np.fromiter(trace.keys(), dtype=np.int64, count=len(trace))
        counts = np.fromiter(trace.values(), dtype=np.int64, count=len(trace))
        buckets = _BUCKETS[np.minimum(counts, 128)]
        grown = buckets > self.edge_buckets[slots]
        self.edge_buckets[slots[grown]] = buckets[grown]
        return int(np.count_nonzero(grown))


def update_coverage(
    coverage_map: CoverageMap, trace: Mapping[int, int], blocks: Iterable[int] = ()
) -> bool:
    """
    Merge `trace` (edge slot -> hit count) into `coverage_map`.

    Returns
    -------
    bool
        True if some slot moved to a higher bucket.
    """

    return coverage_map.increase(trace, blocks) > 0
