"""Frame serialization: varints, checksums, and the frame container."""

from graphzip.format.varint import encode_uvarint, read_uvarint
from graphzip.format.crc import crc32c
from graphzip.format.frame import (
    FRAME_MAGIC,
    FORMAT_VERSION,
    DecodeLimits,
    FrameInfo,
    write_frame,
    read_frame,
    read_frame_streams,
    inspect_frame,
)

__all__ = [
    "encode_uvarint",
    "read_uvarint",
    "crc32c",
    "FRAME_MAGIC",
    "FORMAT_VERSION",
    "DecodeLimits",
    "FrameInfo",
    "write_frame",
    "read_frame",
    "read_frame_streams",
    "inspect_frame",
]
