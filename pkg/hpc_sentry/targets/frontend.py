"""
This file contains the message front end shared by every scheme. The message
is read as a sequence of (tag, length, value) records, each tag with its own
handler, until the first byte that is not a record tag. The records decide
which bytes are finally signed.
"""

from typing import Callable, Dict

from ..vpmu.probe import BaseProbe
from .layout import block_id, site_id
from .primitives import Primitives

MAX_RECORDS = 32
RECORD_TAGS = 16

_ENTRY = block_id("frontend.entry")
_EMPTY = block_id("frontend.empty")
_OPAQUE = block_id("frontend.opaque")
_TRUNCATED = block_id("frontend.truncated")
_EXIT = block_id("frontend.exit")
_RECORD = [block_id(f"frontend.record.{tag:x}") for tag in range(RECORD_TAGS)]
_CONTEXT_ODD = block_id("frontend.context.odd")
_CONTEXT_EVEN = block_id("frontend.context.even")
_REPEAT = block_id("frontend.repeat")
_REPEAT_EMPTY = block_id("frontend.repeat.empty")
_CHUNK = block_id("frontend.chunk")
_MASK_SET = block_id("frontend.mask.set")
_MASK_CLEAR = block_id("frontend.mask.clear")
_VERSION_CURRENT = block_id("frontend.version.current")
_VERSION_LEGACY = block_id("frontend.version.legacy")

_TAG_SITE = site_id("frontend.tag_valid")
_RECORD_SITE = site_id("frontend.more_records")

CURRENT_VERSION = 3

Handler = Callable[[bytearray, bytes, Primitives, BaseProbe], None]


def _pad(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    pass


def _data(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    out += value


def _prehash(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    out += primitives.digest(value, 32, probe)


def _context(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    for b in value:
        probe.block(_CONTEXT_ODD if b & 1 else _CONTEXT_EVEN)
    out += bytes([len(value)]) + value


def _domain(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    out[:0] = primitives.digest(value, 8, probe)


def _repeat(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    if len(out) == 0:
        probe.block(_REPEAT_EMPTY)
        return
    count = value[0] & 0x07 if value else 0
    for _ in range(count):
        probe.block(_REPEAT)
        out += out[-8:]


def _reverse(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    out += value[::-1]


def _chunked(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    for i in range(0, len(value), 4):
        probe.block(_CHUNK)
        out += value[i : i + 4]


def _mask(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    if value and value[0]:
        probe.block(_MASK_SET)
        out[:] = bytes(b ^ value[0] for b in out)
    else:
        probe.block(_MASK_CLEAR)


def _version(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    if value and value[0] == CURRENT_VERSION:
        probe.block(_VERSION_CURRENT)
        out.append(CURRENT_VERSION)
    else:
        probe.block(_VERSION_LEGACY)


def _reserved(out: bytearray, value: bytes, primitives: Primitives, probe: BaseProbe) -> None:
    out += value[:1]


_HANDLERS: Dict[int, Handler] = {
    0x0: _pad,
    0x1: _data,
    0x2: _prehash,
    0x3: _context,
    0x4: _domain,
    0x5: _repeat,
    0x6: _reverse,
    0x7: _chunked,
    0x8: _mask,
    0x9: _version,
}


def encode_message(
    message: bytes, primitives: Primitives, probe: BaseProbe, buffer_address: int
) -> bytes:
    """
    Run the message through the record parser and return the bytes to sign.

    Parameters
    ----------
    message : bytes
        The raw message part of a test input.
    primitives : Primitives
        Used by the pre-hash and domain records.
    probe : BaseProbe
        Receives the parser's probe events.
    buffer_address : int
        Simulated address of the message buffer.

    Returns
    -------
    bytes
        The encoded message.
    """

    probe.block(_ENTRY)
    probe.touch(buffer_address, len(message))
    if len(message) == 0:
        probe.block(_EMPTY)
        probe.block(_EXIT)
        return b""

    out = bytearray()
    position = 0
    records = 0
    while position < len(message):
        tag = message[position]
        is_record = tag < RECORD_TAGS
        probe.branch(_TAG_SITE, is_record)
        if not is_record:
            probe.block(_OPAQUE)
            out += message[position:]
            break
        if records == MAX_RECORDS:
            probe.block(_TRUNCATED)
            out += message[position:]
            break
        length = message[position + 1] & 0x0F if position + 1 < len(message) else 0
        value = message[position + 2 : position + 2 + length]
        probe.block(_RECORD[tag])
        _HANDLERS.get(tag, _reserved)(out, value, primitives, probe)
        records += 1
        position += 2 + length
        probe.branch(_RECORD_SITE, position < len(message))

    probe.block(_EXIT)
    return bytes(out)
