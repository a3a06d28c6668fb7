"""Codec descriptors and node-header helpers.

A codec is a reversible pair of stream transforms. ``encode`` turns input
streams into output streams plus a node header; ``decode`` must regenerate
the exact inputs from the outputs and that header alone, because the header
and the streams are all a frame carries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

from graphzip.core.streams import PortPattern, StreamType, TypedStream
from graphzip.errors import CodecError, FrameError
from graphzip.format.varint import encode_uvarint, read_uvarint

EncodeFn = Callable[[Sequence[TypedStream], Mapping], tuple[list[TypedStream], bytes]]
DecodeFn = Callable[[Sequence[TypedStream], bytes], list[TypedStream]]
InferFn = Callable[[tuple[Optional[StreamType], ...], Mapping], tuple[Union[StreamType, PortPattern], ...]]


@dataclass(frozen=True)
class CodecSpec:
    wire_id: int
    name: str
    summary: str
    inputs: tuple[PortPattern, ...]
    encode: EncodeFn
    decode: DecodeFn
    infer: InferFn
    # Number of output streams, derived from the node header alone so a
    # decoder can lay out stream ids before touching any payload.
    out_count: Callable[[bytes], int] = field(default=lambda header: 1)
    variadic: bool = False


def require(condition: bool, message: str) -> None:
    if not condition:
        raise CodecError(message)


class HeaderReader:
    """Cursor over a node header; all failures become CodecError."""

    def __init__(self, header: bytes) -> None:
        self.data = header
        self.pos = 0

    def uvarint(self) -> int:
        try:
            value, self.pos = read_uvarint(self.data, self.pos)
        except FrameError as exc:
            raise CodecError(f"bad node header: {exc}") from exc
        return value

    def take(self, n: int) -> bytes:
        require(self.pos + n <= len(self.data), "node header truncated")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def byte(self) -> int:
        return self.take(1)[0]

    def done(self) -> None:
        require(self.pos == len(self.data), "trailing bytes in node header")


def header_of(*parts) -> bytes:
    """Assemble a header from ints (varint-encoded) and byte chunks."""
    out = bytearray()
    for p in parts:
        if isinstance(p, int):
            out += encode_uvarint(p)
        else:
            out += p
    return bytes(out)


def param(params: Mapping, key: str):
    if key not in params:
        raise CodecError(f"missing codec parameter {key!r}")
    return params[key]
