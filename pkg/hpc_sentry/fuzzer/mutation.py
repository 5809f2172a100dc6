"""
This file contains the byte-level mutation operators of the fuzzer.
"""

import random
from enum import Enum
from typing import Sequence

from ..targets.base import MAX_INPUT_BYTES

ARITH_MAX = 35
HAVOC_STACK = (1, 2, 4)

INTERESTING = {
    1: (0x00, 0x01, 0x7F, 0x80, 0xFF),
    2: (0x0000, 0x0001, 0x7FFF, 0x8000, 0xFFFF),
    4: (0x00000000, 0x00000001, 0x7FFFFFFF, 0x80000000, 0xFFFFFFFF),
}


class MutationOp(str, Enum):
    BIT_FLIP = "bit_flip"
    BYTE_SET = "byte_set"
    ARITH = "arith"
    INTERESTING = "interesting"
    DUPLICATE = "duplicate"
    DELETE = "delete"
    SPLICE = "splice"


def flip_bit(data: bytes, bit: int) -> bytes:
    out = bytearray(data)
    out[bit // 8] ^= 1 << (bit % 8)
    return bytes(out)


def set_byte(data: bytes, position: int, value: int) -> bytes:
    out = bytearray(data)
    out[position] = value & 0xFF
    return bytes(out)


def add_word(data: bytes, position: int, width: int, delta: int) -> bytes:
    """
    Add `delta` to the little-endian word of `width` bytes at `position`, wrapping.
    """

    out = bytearray(data)
    word = int.from_bytes(out[position : position + width], "little")
    out[position : position + width] = ((word + delta) % (1 << (8 * width))).to_bytes(
        width, "little"
    )
    return bytes(out)


def put_word(data: bytes, position: int, width: int, value: int) -> bytes:
    out = bytearray(data)
    out[position : position + width] = value.to_bytes(width, "little")
    return bytes(out)


def duplicate_block(data: bytes, start: int, length: int, insert_at: int) -> bytes:
    block = data[start : start + length]
    return data[:insert_at] + block + data[insert_at:]


def delete_block(data: bytes, start: int, length: int) -> bytes:
    return data[:start] + data[start + length :]


def splice(data: bytes, other: bytes, cut: int, other_cut: int) -> bytes:
    return data[:cut] + other[other_cut:]


def _clamp(data: bytes) -> bytes:
    return data[:MAX_INPUT_BYTES] if data else b"\x00"


def mutate(data: bytes, rng: random.Random, pool: Sequence[bytes] = ()) -> bytes:
    """
    Apply one randomly chosen operator.

    Parameters
    ----------
    data : bytes
        Non-empty input.
    rng : random.Random
        Source of every choice made.
    pool : Sequence[bytes], optional
        Splice partners, by default none. Splicing falls back to a bit flip
        without partners.

    Returns
    -------
    bytes
        The mutated input, between 1 and MAX_INPUT_BYTES bytes long.
    """

    if not data:
        raise ValueError("Cannot mutate an empty input.")
    op = rng.choice(list(MutationOp))
    size = len(data)

    if op == MutationOp.BYTE_SET:
        return set_byte(data, rng.randrange(size), rng.randrange(256))
    if op in (MutationOp.ARITH, MutationOp.INTERESTING):
        width = rng.choice([w for w in (1, 2, 4) if w <= size])
        position = rng.randrange(size - width + 1)
        if op == MutationOp.ARITH:
            delta = rng.randint(1, ARITH_MAX) * rng.choice((-1, 1))
            return add_word(data, position, width, delta)
        return put_word(data, position, width, rng.choice(INTERESTING[width]))
    if op == MutationOp.DUPLICATE and size < MAX_INPUT_BYTES:
        start = rng.randrange(size)
        length = rng.randint(1, min(size - start, MAX_INPUT_BYTES - size))
        return _clamp(duplicate_block(data, start, length, rng.randrange(size + 1)))
    if op == MutationOp.DELETE and size > 1:
        start = rng.randrange(size)
        length = rng.randint(1, min(size - start, size - 1))
        return delete_block(data, start, length)
    if op == MutationOp.SPLICE and pool:
        other = pool[rng.randrange(len(pool))]
        if other:
            return _clamp(splice(data, other, rng.randint(1, size), rng.randrange(len(other))))
    return flip_bit(data, rng.randrange(8 * size))


def havoc(data: bytes, rng: random.Random, pool: Sequence[bytes] = ()) -> bytes:
    """
    Stack 1, 2 or 4 mutations.
    """

    for _ in range(rng.choice(HAVOC_STACK)):
        data = mutate(data, rng, pool)
    return data
