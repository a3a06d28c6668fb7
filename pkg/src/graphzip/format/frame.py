"""Self-describing frame container.

Layout (all integers are minimal LEB128 varints unless noted):

    frame      := magic "GMC1" | version | flags u8 | chunk_count(=1) | chunk | [crc u32le]
    chunk      := root_count | root_type* | node_count | node* | leaf*
    root_type  := tag u8 | [width]              tags: 0 serial, 1 record, 2 numeric, 3 strings
    node       := wire_id | header_len | header | input_count | input_id*
    leaf       := [type]                        omitted when the leaf is itself a root
                  element_count
                  fixed kinds:   byte_len | content
                  strings:       length * element_count | content

Nodes appear in execution order; each node's outputs implicitly take the next
consecutive stream ids, so the reader reconstructs the whole trace from wire
ids and headers alone. Leaves are the streams no node consumes, stored in
ascending stream-id order. Flag bit 0 marks a trailing CRC32C (little-endian)
of the concatenated root content; all other flag bits must be zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from graphzip.core.engine import DEFAULT_DECODE_LIMIT, Budget, decompress_resolved
from graphzip.core.graph import ResolvedGraph, ResolvedNode, validate_resolved
from graphzip.core.streams import (
    NUMERIC_WIDTHS,
    StreamKind,
    StreamType,
    TypedStream,
)
from graphzip.errors import (
    BadMagicError,
    BudgetExceededError,
    ChecksumMismatchError,
    CodecError,
    FrameError,
    GraphError,
    LimitExceededError,
    MalformedFrameError,
    StreamError,
    TruncatedFrameError,
    UnsupportedVersionError,
)
from graphzip.format.crc import crc32c
from graphzip.format.varint import encode_uvarint, read_uvarint

FRAME_MAGIC = b"GMC1"
FORMAT_VERSION = 1
FLAG_CHECKSUM = 0x01

_TAG_OF_KIND = {
    StreamKind.SERIAL: 0,
    StreamKind.RECORD: 1,
    StreamKind.NUMERIC: 2,
    StreamKind.STRINGS: 3,
}
_KIND_OF_TAG = {tag: kind for kind, tag in _TAG_OF_KIND.items()}


@dataclass(frozen=True)
class DecodeLimits:
    """Reader-side resource ceilings; defaults suit untrusted input."""

    max_nodes: int = 10_000
    max_streams: int = 1 << 22
    max_total_stream_bytes: int = DEFAULT_DECODE_LIMIT

    def budget(self) -> Budget:
        return Budget(
            max_nodes=self.max_nodes,
            max_total_stream_bytes=self.max_total_stream_bytes,
        )


@dataclass(frozen=True)
class FrameNodeInfo:
    wire_id: int
    name: str
    header_bytes: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


@dataclass(frozen=True)
class FrameInfo:
    """Structural summary of a frame, available without decoding payloads."""

    frame_bytes: int
    version: int
    checksum: Optional[int]
    root_types: tuple[StreamType, ...]
    nodes: tuple[FrameNodeInfo, ...]
    leaf_ids: tuple[int, ...]
    leaf_bytes: int

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def leaf_count(self) -> int:
        return len(self.leaf_ids)


def _encode_type(stype: StreamType) -> bytes:
    out = bytes([_TAG_OF_KIND[stype.kind]])
    if stype.width is not None:
        out += encode_uvarint(stype.width)
    return out


def _read_type(data: bytes, pos: int) -> tuple[StreamType, int]:
    if pos >= len(data):
        raise TruncatedFrameError("frame ends inside a stream type")
    tag = data[pos]
    pos += 1
    kind = _KIND_OF_TAG.get(tag)
    if kind is None:
        raise MalformedFrameError(f"unknown stream type tag {tag}")
    if kind in (StreamKind.RECORD, StreamKind.NUMERIC):
        width, pos = read_uvarint(data, pos)
        if kind is StreamKind.NUMERIC and width not in NUMERIC_WIDTHS:
            raise MalformedFrameError(f"numeric width {width} is not one of {NUMERIC_WIDTHS}")
        if kind is StreamKind.RECORD and width < 1:
            raise MalformedFrameError("record width must be positive")
        return StreamType(kind, int(width)), pos
    return StreamType(kind), pos


def write_frame(
    resolved: ResolvedGraph,
    leaves: Sequence[TypedStream],
    *,
    checksum_of: Optional[Sequence[TypedStream]] = None,
) -> bytes:
    """Serialize a resolved trace plus its leaf streams.

    ``checksum_of`` supplies the root streams whose concatenated content the
    trailing CRC32C covers; omit it to write no checksum.
    """
    report = validate_resolved(resolved)
    if not report.ok:
        raise GraphError("unserializable trace: " + "; ".join(report.violations))
    if len(leaves) != len(resolved.leaves):
        raise GraphError(f"trace has {len(resolved.leaves)} leaves, got {len(leaves)} streams")
    for sid, stream in zip(resolved.leaves, leaves):
        declared = resolved.stream_types[sid]
        if declared is not None and stream.stype != declared:
            raise GraphError(f"leaf {sid} declared {declared}, got {stream.stype}")
    if checksum_of is not None and len(checksum_of) != len(resolved.root_types):
        raise GraphError(
            f"checksum needs {len(resolved.root_types)} root streams, got {len(checksum_of)}"
        )

    flags = FLAG_CHECKSUM if checksum_of is not None else 0
    out = bytearray()
    out += FRAME_MAGIC
    out += encode_uvarint(FORMAT_VERSION)
    out.append(flags)
    out += encode_uvarint(1)  # chunk count

    root_count = len(resolved.root_types)
    out += encode_uvarint(root_count)
    for stype in resolved.root_types:
        out += _encode_type(stype)

    out += encode_uvarint(len(resolved.nodes))
    for node in resolved.nodes:
        out += encode_uvarint(node.wire_id)
        out += encode_uvarint(len(node.header))
        out += node.header
        out += encode_uvarint(len(node.inputs))
        for sid in node.inputs:
            out += encode_uvarint(sid)

    for sid, stream in zip(resolved.leaves, leaves):
        if sid >= root_count:
            out += _encode_type(stream.stype)
        out += encode_uvarint(stream.element_count)
        if stream.stype.kind is StreamKind.STRINGS:
            for length in stream.lengths:
                out += encode_uvarint(length)
            out += stream.content
        else:
            out += encode_uvarint(len(stream.content))
            out += stream.content

    if checksum_of is not None:
        crc = crc32c(b"".join(s.content for s in checksum_of))
        out += crc.to_bytes(4, "little")
    return bytes(out)


def _parse(data: bytes, limits: DecodeLimits):
    """Parse frame structure; returns (resolved, leaf streams, info)."""
    from graphzip.codecs import registry

    if len(data) < len(FRAME_MAGIC):
        raise TruncatedFrameError("frame shorter than the magic")
    if data[: len(FRAME_MAGIC)] != FRAME_MAGIC:
        raise BadMagicError("bad frame magic")
    pos = len(FRAME_MAGIC)

    version, pos = read_uvarint(data, pos)
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(int(version))
    if pos >= len(data):
        raise TruncatedFrameError("frame ends before the flags byte")
    flags = data[pos]
    pos += 1
    if flags & ~FLAG_CHECKSUM:
        raise MalformedFrameError(f"undefined flag bits 0x{flags:02x}")
    chunk_count, pos = read_uvarint(data, pos)
    if chunk_count != 1:
        raise MalformedFrameError(f"frame must carry exactly one chunk, declares {chunk_count}")

    root_count, pos = read_uvarint(data, pos)
    if root_count == 0:
        raise MalformedFrameError("frame carries no root streams")
    if root_count > limits.max_streams:
        raise LimitExceededError(f"root count {root_count} exceeds stream limit {limits.max_streams}")
    root_types = []
    for _ in range(root_count):
        stype, pos = _read_type(data, pos)
        root_types.append(stype)

    node_count, pos = read_uvarint(data, pos)
    if node_count > limits.max_nodes:
        raise LimitExceededError(f"node count {node_count} exceeds limit {limits.max_nodes}")

    next_id = int(root_count)
    consumed: set[int] = set()
    stream_types: list[Optional[StreamType]] = list(root_types)
    nodes: list[ResolvedNode] = []
    for _ in range(node_count):
        wire_id, pos = read_uvarint(data, pos)
        spec = registry.lookup(int(wire_id))
        if spec is None:
            # Inside a frame an unknown wire id means the bytes cannot be
            # trusted, so it reports as a frame problem rather than leaking
            # the registry-level error class to callers of read_frame.
            raise MalformedFrameError(f"frame references unknown codec wire id {wire_id}")
        header_len, pos = read_uvarint(data, pos)
        if pos + header_len > len(data):
            raise TruncatedFrameError("frame ends inside a node header")
        header = bytes(data[pos : pos + header_len])
        pos += header_len
        input_count, pos = read_uvarint(data, pos)
        if spec.variadic:
            if input_count < 1:
                raise MalformedFrameError(f"{spec.name} needs at least one input")
        elif input_count != len(spec.inputs):
            raise MalformedFrameError(
                f"{spec.name} takes {len(spec.inputs)} inputs, frame declares {input_count}"
            )
        input_ids = []
        for _ in range(input_count):
            sid, pos = read_uvarint(data, pos)
            if sid >= next_id:
                raise MalformedFrameError(f"input references stream {sid} before it is produced")
            if sid in consumed:
                raise MalformedFrameError(f"stream {sid} consumed by more than one node")
            consumed.add(int(sid))
            input_ids.append(int(sid))
        try:
            out_count = spec.out_count(header)
        except CodecError as exc:
            raise MalformedFrameError(f"{spec.name}: undecodable header: {exc}") from exc
        if out_count < 1:
            raise MalformedFrameError(f"{spec.name}: header implies no outputs")
        if next_id + out_count > limits.max_streams:
            raise LimitExceededError(
                f"stream count exceeds limit {limits.max_streams}"
            )
        outputs = tuple(range(next_id, next_id + out_count))
        next_id += out_count
        stream_types.extend([None] * out_count)
        nodes.append(ResolvedNode(int(wire_id), header, tuple(input_ids), outputs))

    leaf_ids = tuple(i for i in range(next_id) if i not in consumed)
    leaf_streams = []
    leaf_bytes = 0
    for sid in leaf_ids:
        if sid < root_count:
            stype = root_types[sid]
        else:
            stype, pos = _read_type(data, pos)
            stream_types[sid] = stype
        count, pos = read_uvarint(data, pos)
        if stype.kind is StreamKind.STRINGS:
            if count > limits.max_total_stream_bytes:
                raise LimitExceededError(f"leaf {sid} declares {count} string elements")
            lengths = []
            content_len = 0
            for _ in range(count):
                length, pos = read_uvarint(data, pos)
                content_len += length
                if content_len > limits.max_total_stream_bytes:
                    raise LimitExceededError(f"leaf {sid} exceeds the byte limit")
                lengths.append(int(length))
            if pos + content_len > len(data):
                raise TruncatedFrameError("frame ends inside leaf content")
            content = bytes(data[pos : pos + content_len])
            pos += content_len
            stream = TypedStream(stype, content, int(count), tuple(lengths))
        else:
            width = stype.element_width
            byte_len, pos = read_uvarint(data, pos)
            if byte_len != count * width:
                raise MalformedFrameError(
                    f"leaf {sid}: {count} elements of {stype} need {count * width} bytes, "
                    f"frame declares {byte_len}"
                )
            if pos + byte_len > len(data):
                raise TruncatedFrameError("frame ends inside leaf content")
            content = bytes(data[pos : pos + byte_len])
            pos += byte_len
            try:
                stream = TypedStream(stype, content, int(count))
            except StreamError as exc:
                raise MalformedFrameError(str(exc)) from exc
        leaf_bytes += len(stream.content)
        if leaf_bytes > limits.max_total_stream_bytes:
            raise LimitExceededError("leaf payload exceeds the byte limit")
        leaf_streams.append(stream)

    checksum = None
    if flags & FLAG_CHECKSUM:
        if pos + 4 > len(data):
            raise TruncatedFrameError("frame ends inside the checksum")
        checksum = int.from_bytes(data[pos : pos + 4], "little")
        pos += 4
    if pos != len(data):
        raise MalformedFrameError(f"{len(data) - pos} trailing bytes after the frame")

    resolved = ResolvedGraph(
        root_types=tuple(root_types),
        nodes=tuple(nodes),
        stream_types=tuple(stream_types),
        leaves=leaf_ids,
    )
    info = FrameInfo(
        frame_bytes=len(data),
        version=int(version),
        checksum=checksum,
        root_types=tuple(root_types),
        nodes=tuple(
            FrameNodeInfo(
                wire_id=n.wire_id,
                name=registry.get(n.wire_id).name,
                header_bytes=len(n.header),
                inputs=n.inputs,
                outputs=n.outputs,
            )
            for n in nodes
        ),
        leaf_ids=leaf_ids,
        leaf_bytes=leaf_bytes,
    )
    return resolved, tuple(leaf_streams), info


def read_frame_streams(
    data: bytes, *, limits: Optional[DecodeLimits] = None
) -> tuple[ResolvedGraph, tuple[TypedStream, ...]]:
    """Parse a frame into its trace and leaf streams without decoding."""
    resolved, leaves, _ = _parse(bytes(data), limits or DecodeLimits())
    return resolved, leaves


def inspect_frame(data: bytes, *, limits: Optional[DecodeLimits] = None) -> FrameInfo:
    """Structural summary of a frame; parses everything, decodes nothing."""
    _, _, info = _parse(bytes(data), limits or DecodeLimits())
    return info


def read_frame(data: bytes, *, limits: Optional[DecodeLimits] = None) -> tuple[TypedStream, ...]:
    """Decode a frame back into its root streams.

    Every failure surfaces as a FrameError subclass: container problems keep
    their specific classes, and decode-stage codec failures are wrapped as
    MalformedFrameError so untrusted input never leaks other error families.
    """
    limits = limits or DecodeLimits()
    resolved, leaves, info = _parse(bytes(data), limits)
    try:
        roots = decompress_resolved(resolved, leaves, limits.budget())
    except BudgetExceededError as exc:
        raise LimitExceededError(str(exc)) from exc
    except FrameError:
        raise
    except (CodecError, GraphError, StreamError) as exc:
        raise MalformedFrameError(f"frame does not decode: {exc}") from exc
    if info.checksum is not None:
        actual = crc32c(b"".join(s.content for s in roots))
        if actual != info.checksum:
            raise ChecksumMismatchError(
                f"stored checksum 0x{info.checksum:08X} != computed 0x{actual:08X}"
            )
    return tuple(roots)
