"""
This file contains the pluggable PRNG and hash primitives used by the toy
schemes. Strong and weak versions are drop-in substitutes: for equal
requested lengths they return equal-length byte strings.
"""

import hashlib
from abc import ABC, abstractmethod
from enum import Enum

from pydantic import BaseModel, ConfigDict

from ..vpmu.probe import LINE_BYTES, BaseProbe
from .layout import site_id

SPONGE_RATE = 168
"""Rate in bytes of the sponge (SHAKE-128: 1600-bit state, 256-bit capacity)."""

SPONGE_STATE_ADDRESS = 0x2000_0000
SPONGE_STATE_LINES = 4
LCG_STATE_ADDRESS = 0x2000_0400
WEAK_HASH_STATE_ADDRESS = 0x2000_0800

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1
WEAK_HASH_OFFSET = 0x811C9DC5
WEAK_HASH_PRIME = 0x01000193

_SPONGE_SITE = site_id("primitive.sponge.permute")
_LCG_SITE = site_id("primitive.lcg.step")
_WEAK_HASH_SITE = site_id("primitive.weak_hash.word")


class PrimitiveKind(str, Enum):
    STRONG = "strong"
    WEAK = "weak"


def _permute(probe: BaseProbe, more: bool) -> None:
    for i in range(SPONGE_STATE_LINES):
        probe.access(SPONGE_STATE_ADDRESS + i * LINE_BYTES)
    probe.branch(_SPONGE_SITE, more)


class ByteStream(ABC):
    """
    Base class of the PRNG streams.
    """

    @abstractmethod
    def read(self, n: int) -> bytes:
        """
        The next `n` bytes of the stream.
        """


class SpongeStream(ByteStream):
    """
    Strong PRNG: a SHAKE-128 squeeze over the seed. Every squeezed block costs
    one permutation (4 state-line accesses and a loop branch).
    """

    def __init__(self, seed: bytes, probe: BaseProbe) -> None:
        self._seed = seed
        self._probe = probe
        self._buffer = b""
        self._position = 0
        absorb_blocks = len(seed) // SPONGE_RATE + 1
        for i in range(absorb_blocks):
            _permute(probe, i < absorb_blocks - 1)
        self._charged = 1

    def read(self, n: int) -> bytes:
        end = self._position + n
        if end > len(self._buffer):
            size = max(end, 2 * len(self._buffer), SPONGE_RATE)
            self._buffer = hashlib.shake_128(self._seed).digest(size)
        blocks = -(-end // SPONGE_RATE)
        while self._charged < blocks:
            self._charged += 1
            _permute(self._probe, self._charged < blocks)
        out = self._buffer[self._position : end]
        self._position = end
        return out


class LcgStream(ByteStream):
    """
    Weak PRNG: a 64-bit linear congruential generator emitting the upper 32
    bits of every state. Every output word costs one state access and a loop branch.
    """

    def __init__(self, seed: bytes, probe: BaseProbe) -> None:
        state = 0
        for i in range(0, len(seed), 8):
            chunk = int.from_bytes(seed[i : i + 8], "little")
            state = (state * LCG_MULTIPLIER + chunk + LCG_INCREMENT) & _MASK64
        self._state = state
        self._probe = probe
        self._pending = b""

    def read(self, n: int) -> bytes:
        out = bytearray(self._pending[:n])
        self._pending = self._pending[n:]
        words = -(-(n - len(out)) // 4)
        probe = self._probe
        state = self._state
        produced = bytearray()
        for i in range(words):
            state = (state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
            produced += (state >> 32).to_bytes(4, "little")
            probe.access(LCG_STATE_ADDRESS)
            probe.branch(_LCG_SITE, i < words - 1)
        self._state = state
        needed = n - len(out)
        out += produced[:needed]
        self._pending = bytes(produced[needed:])
        return bytes(out)


def strong_hash(data: bytes, length: int, probe: BaseProbe) -> bytes:
    """
    SHAKE-128 digest of `data`. Costs one permutation per absorbed block plus
    one per additional squeezed block.
    """

    permutations = len(data) // SPONGE_RATE + max(1, -(-length // SPONGE_RATE))
    for i in range(permutations):
        _permute(probe, i < permutations - 1)
    return hashlib.shake_128(data).digest(length)


def weak_digest(data: bytes) -> int:
    """
    32-bit multiplicative rolling digest over little-endian words of `data`.
    """

    padded = data + b"\x00" * (-len(data) % 4)
    h = WEAK_HASH_OFFSET
    for i in range(0, len(padded), 4):
        h = ((h ^ int.from_bytes(padded[i : i + 4], "little")) * WEAK_HASH_PRIME) & _MASK32
    return ((h ^ len(data)) * WEAK_HASH_PRIME) & _MASK32


def weak_hash(data: bytes, length: int, probe: BaseProbe) -> bytes:
    """
    Weak hash: the 4-byte rolling digest repeated ceil(length / 4) times and
    truncated to `length`. Costs a branch per input word and a state access
    per line of input.
    """

    words = max(1, -(-len(data) // 4))
    for i in range(words):
        if i % (LINE_BYTES // 4) == 0:
            probe.access(WEAK_HASH_STATE_ADDRESS)
        probe.branch(_WEAK_HASH_SITE, i < words - 1)
    word = weak_digest(data).to_bytes(4, "little")
    return (word * (-(-length // 4)))[:length]


class Primitives(BaseModel):
    """
    The PRNG and hash a target is built with.

    Attributes
    ----------
    prng : PrimitiveKind
        STRONG is a sponge stream over a 256-bit capacity, WEAK a 64-bit LCG.
    hash : PrimitiveKind
        STRONG is a sponge digest, WEAK a 32-bit rolling digest repeated to length.
    """

    model_config = ConfigDict(frozen=True)

    prng: PrimitiveKind = PrimitiveKind.STRONG
    hash: PrimitiveKind = PrimitiveKind.STRONG

    def stream(self, seed: bytes, probe: BaseProbe) -> ByteStream:
        if self.prng == PrimitiveKind.STRONG:
            return SpongeStream(seed, probe)
        return LcgStream(seed, probe)

    def digest(self, data: bytes, length: int, probe: BaseProbe) -> bytes:
        if self.hash == PrimitiveKind.STRONG:
            return strong_hash(data, length, probe)
        return weak_hash(data, length, probe)
