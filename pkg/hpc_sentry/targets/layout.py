"""
This file contains the naming and addressing helpers of the instrumentation:
stable block and branch-site ids derived from names, and a bump allocator for
the simulated data buffers of a target.
"""

import hashlib
from typing import Dict

from ..vpmu.probe import LINE_BYTES

DATA_BASE = 0x1000_0000


def block_id(name: str) -> int:
    """
    Stable non-zero 16-bit basic-block id for `name`.
    """

    value = int.from_bytes(hashlib.sha256(b"block:" + name.encode()).digest()[:2], "big")
    return value or 1


def site_id(name: str) -> int:
    """
    Stable 32-bit branch-site id for `name`.
    """

    return int.from_bytes(hashlib.sha256(b"site:" + name.encode()).digest()[:4], "big")


class MemoryLayout:
    """
    Assigns line-aligned addresses to named buffers, in allocation order.
    """

    def __init__(self, base: int = DATA_BASE) -> None:
        self._next = base
        self._buffers: Dict[str, int] = {}
        self._sizes: Dict[str, int] = {}

    def alloc(self, name: str, n_bytes: int) -> int:
        if name in self._buffers:
            raise ValueError(f"Buffer {name} is already allocated.")
        address = self._next
        self._buffers[name] = address
        self._sizes[name] = n_bytes
        self._next += -(-n_bytes // LINE_BYTES) * LINE_BYTES
        return address

    def __getitem__(self, name: str) -> int:
        return self._buffers[name]

    def size(self, name: str) -> int:
        return self._sizes[name]
