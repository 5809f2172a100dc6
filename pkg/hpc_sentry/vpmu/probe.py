"""
This file contains the probe interface that instrumented targets call into,
along with the lightweight probe sinks that do not model the microarchitecture.
"""

from abc import ABC, abstractmethod
from typing import Dict, Set

LINE_BYTES = 64
CODE_BASE = 0x0040_0000
EDGE_MAP_SIZE = 1 << 16


def rotate_block_id(block_id: int) -> int:
    """
    Rotate a 16-bit block id left by one bit.
    """

    block_id &= 0xFFFF
    return ((block_id << 1) | (block_id >> 15)) & 0xFFFF


def edge_slot(prev_block_id: int, cur_block_id: int) -> int:
    """
    Edge-map slot of the transition prev -> cur.
    """

    return (prev_block_id ^ rotate_block_id(cur_block_id)) % EDGE_MAP_SIZE


class BaseProbe(ABC):
    """
    Sink for the probe events emitted by instrumented targets.
    """

    @abstractmethod
    def branch(self, site: int, taken: bool) -> None:
        """
        A conditional branch at `site` resolved to `taken`.
        """

    @abstractmethod
    def access(self, address: int, is_instruction: bool = False) -> None:
        """
        A memory access at byte `address`.
        """

    @abstractmethod
    def block(self, block_id: int) -> None:
        """
        Control entered basic block `block_id`.
        """

    @abstractmethod
    def checkpoint(self, checkpoint_id: int) -> None:
        """
        Control reached program checkpoint `checkpoint_id`.
        """

    def touch(self, base: int, n_bytes: int) -> None:
        """
        Access every cache line of the buffer [base, base + n_bytes).
        """

        first = base - (base % LINE_BYTES)
        for address in range(first, base + n_bytes, LINE_BYTES):
            self.access(address)


class NullProbe(BaseProbe):
    """
    Discards every event. Used for unmonitored work such as key generation and verification.
    """

    def branch(self, site: int, taken: bool) -> None:
        pass

    def access(self, address: int, is_instruction: bool = False) -> None:
        pass

    def block(self, block_id: int) -> None:
        pass

    def checkpoint(self, checkpoint_id: int) -> None:
        pass

    def touch(self, base: int, n_bytes: int) -> None:
        pass


class CoverageTracer(NullProbe):
    """
    Records block transitions only.

    Attributes
    ----------
    edges : Dict[int, int]
        Hit count per edge-map slot.
    blocks : Set[int]
        Basic block ids entered.
    """

    def __init__(self) -> None:
        self.edges: Dict[int, int] = {}
        self.blocks: Set[int] = set()
        self._prev = 0

    def block(self, block_id: int) -> None:
        slot = (self._prev ^ rotate_block_id(block_id)) % EDGE_MAP_SIZE
        self.edges[slot] = self.edges.get(slot, 0) + 1
        self.blocks.add(block_id)
        self._prev = block_id

    def reset(self) -> None:
        self.edges = {}
        self.blocks = set()
        self._prev = 0
