"""
This file contains the counter vocabulary of the virtual performance monitoring unit.
"""

from enum import IntEnum
from typing import List, Sequence, Union

from pydantic import BaseModel, field_validator

from ..utils.naming_conventions import normalize_counter_name


class EventKind(IntEnum):
    """
    The 8 monitored events. The ordinal order is stable and is used to split
    counters into the ensemble subsets (ordinals 0-3 and 4-7).
    """

    CYCLES = 0
    L2_TCM = 1
    BR_MSP = 2
    L1_ICM = 3
    L1_DCA = 4
    L2_DCA = 5
    L1_DCM = 6
    L2_DCM = 7

    @classmethod
    def parse(cls, name: Union[str, "EventKind"]) -> "EventKind":
        """
        Resolve a counter from its name. Separators and case are normalized,
        so "l1-icm" resolves to EventKind.L1_ICM.
        """

        if isinstance(name, EventKind):
            return name
        try:
            return cls[normalize_counter_name(name)]
        except KeyError:
            raise ValueError(f"Unknown counter name: {name}") from None


N_COUNTERS = len(EventKind)
COUNTER_NAMES: List[str] = [e.name for e in EventKind]


class CounterVector(BaseModel):
    """
    Counter values at an instant, or a delta between two instants.

    Attributes
    ----------
    counts : List[int]
        One count per EventKind, in ordinal order.
    virtual_cycle : int
        Simulated cycle at which the vector was taken.
    """

    counts: List[int]
    virtual_cycle: int = 0

    @field_validator("counts")
    def validate_counts(cls, v: List[int]) -> List[int]:
        if len(v) != N_COUNTERS:
            raise ValueError(f"Expected {N_COUNTERS} counts, received {len(v)}")
        if any(c < 0 for c in v):
            raise ValueError("Counter values must be non-negative.")
        return v

    @classmethod
    def zeros(cls) -> "CounterVector":
        return cls(counts=[0] * N_COUNTERS, virtual_cycle=0)

    def __getitem__(self, event: EventKind) -> int:
        return self.counts[int(event)]

    def delta(self, earlier: "CounterVector") -> "CounterVector":
        """
        The counts accumulated since `earlier`.
        """

        return CounterVector(
            counts=[a - b for a, b in zip(self.counts, earlier.counts)],
            virtual_cycle=self.virtual_cycle - earlier.virtual_cycle,
        )


def parse_counters(names: Sequence[Union[str, EventKind]]) -> List[EventKind]:
    return [EventKind.parse(n) for n in names]
