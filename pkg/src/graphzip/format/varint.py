"""Unsigned LEB128 varints.

Values are limited to 64 bits and encodings must be minimal (no redundant
trailing zero groups), so every value has exactly one encoding and re-writing
a parsed frame reproduces it byte for byte.
"""

from __future__ import annotations

from graphzip.errors import MalformedFrameError, TruncatedFrameError

_MAX_BYTES = 10  # ceil(64 / 7)


def encode_uvarint(value: int) -> bytes:
    if value < 0 or value >= 1 << 64:
        raise ValueError(f"uvarint value out of range: {value}")
    out = bytearray()
    while True:
        group = value & 0x7F
        value >>= 7
        if value:
            out.append(group | 0x80)
        else:
            out.append(group)
            return bytes(out)


def read_uvarint(data, pos: int) -> tuple[int, int]:
    """Decode at ``pos``; returns (value, next position)."""
    value = 0
    shift = 0
    start = pos
    while True:
        if pos >= len(data):
            raise TruncatedFrameError(f"varint at offset {start} runs past end of buffer")
        byte = data[pos]
        pos += 1
        if pos - start > _MAX_BYTES:
            raise MalformedFrameError(f"varint at offset {start} exceeds 64 bits")
        if shift == 63 and byte > 1:
            raise MalformedFrameError(f"varint at offset {start} exceeds 64 bits")
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            if byte == 0 and pos - start > 1:
                raise MalformedFrameError(f"varint at offset {start} is not minimal")
            return value, pos
        shift += 7
