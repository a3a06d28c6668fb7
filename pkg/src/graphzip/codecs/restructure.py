"""Stream restructuring codecs: dispatch (7), split (8), concat (9).

Dispatch is the parsing workhorse: it routes byte runs of one input to n
target streams following an instruction list, and records those instructions
into two ordinary output streams, so decoding is a pure replay with no
knowledge of where the instructions came from.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from graphzip.core.streams import (
    NUMERIC,
    SERIAL,
    SERIAL_ONLY,
    ANY_STREAM,
    StreamKind,
    StreamType,
    TypedStream,
    empty_stream,
)
from graphzip.codecs.spec import CodecSpec, HeaderReader, header_of, param, require

MAX_DISPATCH_TARGETS = 256  # target ids ride in a numeric(1) stream


# -- 7: dispatch ---------------------------------------------------------------

def _enc_dispatch(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    n = param(params, "n")
    instructions = param(params, "instructions")
    require(isinstance(n, int) and 1 <= n <= MAX_DISPATCH_TARGETS, f"dispatch needs 1..{MAX_DISPATCH_TARGETS} targets, got {n!r}")

    sinks = [bytearray() for _ in range(n)]
    targets = bytearray()
    lengths = []
    pos = 0
    content = src.content
    for target, length in instructions:
        require(0 <= target < n, f"dispatch target {target} out of range")
        require(0 <= length < 1 << 32, f"dispatch run length {length} does not fit in 32 bits")
        require(pos + length <= len(content), "dispatch instructions overrun the input")
        sinks[target] += content[pos : pos + length]
        targets.append(target)
        lengths.append(length)
        pos += length
    require(pos == len(content), f"dispatch instructions cover {pos} of {len(content)} bytes")

    outputs = [TypedStream.serial(bytes(s)) for s in sinks]
    outputs.append(TypedStream(NUMERIC(1), bytes(targets), len(targets)))
    outputs.append(TypedStream.numeric(4, lengths))
    return outputs, header_of(n)


def _dec_dispatch(outputs: Sequence[TypedStream], header: bytes):
    r = HeaderReader(header)
    n = r.uvarint()
    r.done()
    require(1 <= n <= MAX_DISPATCH_TARGETS, f"bad dispatch target count {n}")
    require(len(outputs) == n + 2, f"dispatch expects {n + 2} outputs, got {len(outputs)}")
    *sinks, targets, lengths = outputs
    for s in sinks:
        require(s.stype.kind is StreamKind.SERIAL, f"dispatch sink must be serial, got {s.stype}")
    require(targets.stype == NUMERIC(1), f"dispatch targets must be numeric(1), got {targets.stype}")
    require(lengths.stype == NUMERIC(4), f"dispatch lengths must be numeric(4), got {lengths.stype}")
    require(targets.element_count == lengths.element_count, "dispatch instruction streams disagree on count")

    cursors = [0] * n
    out = bytearray()
    for target, length in zip(targets.content, lengths.values()):
        length = int(length)
        require(target < n, f"dispatch target {target} out of range")
        sink = sinks[target].content
        start = cursors[target]
        require(start + length <= len(sink), "dispatch replay overruns a sink stream")
        out += sink[start : start + length]
        cursors[target] = start + length
    for i, cur in enumerate(cursors):
        require(cur == len(sinks[i].content), f"dispatch sink {i} has unconsumed bytes")
    return [TypedStream.serial(bytes(out))]


def _infer_dispatch(in_types, params):
    n = param(params, "n")
    require(isinstance(n, int) and 1 <= n <= MAX_DISPATCH_TARGETS, f"bad dispatch target count {n!r}")
    return tuple([SERIAL] * n + [NUMERIC(1), NUMERIC(4)])


def _out_count_dispatch(header: bytes) -> int:
    r = HeaderReader(header)
    n = r.uvarint()
    r.done()
    require(1 <= n <= MAX_DISPATCH_TARGETS, f"bad dispatch target count {n}")
    return n + 2


# -- 8: split --------------------------------------------------------------------

def _enc_split(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    sizes = [int(s) for s in param(params, "segment_sizes")]
    require(len(sizes) >= 1, "split needs at least one segment")
    require(all(s >= 0 for s in sizes), "split segment sizes cannot be negative")
    require(sum(sizes) == len(src.content), f"segments cover {sum(sizes)} of {len(src.content)} bytes")
    outputs = []
    pos = 0
    for s in sizes:
        outputs.append(TypedStream.serial(src.content[pos : pos + s]))
        pos += s
    return outputs, header_of(len(sizes), *[header_of(s) for s in sizes])


def _dec_split(outputs: Sequence[TypedStream], header: bytes):
    r = HeaderReader(header)
    m = r.uvarint()
    sizes = [r.uvarint() for _ in range(m)]
    r.done()
    require(len(outputs) == m, f"split expects {m} outputs, got {len(outputs)}")
    parts = []
    for size, out in zip(sizes, outputs):
        require(out.stype.kind is StreamKind.SERIAL, f"split segment must be serial, got {out.stype}")
        require(len(out.content) == size, f"split segment is {len(out.content)} bytes, header says {size}")
        parts.append(out.content)
    return [TypedStream.serial(b"".join(parts))]


def _infer_split(in_types, params):
    sizes = param(params, "segment_sizes")
    return tuple([SERIAL] * len(sizes))


def _out_count_split(header: bytes) -> int:
    r = HeaderReader(header)
    m = r.uvarint()
    require(m >= 1, "split needs at least one segment")
    for _ in range(m):
        r.uvarint()
    r.done()
    return m


# -- 9: concat --------------------------------------------------------------------

def _enc_concat(inputs: Sequence[TypedStream], params: Mapping):
    require(len(inputs) >= 1, "concat needs at least one input")
    stype = inputs[0].stype
    for s in inputs:
        require(s.stype == stype, f"concat inputs disagree on type: {stype} vs {s.stype}")
        require(s.element_count < 1 << 32, "concat member count does not fit in 32 bits")
    content = b"".join(s.content for s in inputs)
    counts = [s.element_count for s in inputs]
    if stype.kind is StreamKind.STRINGS:
        lengths = tuple(l for s in inputs for l in s.lengths)
        merged = TypedStream(stype, content, sum(counts), lengths)
    else:
        merged = TypedStream(stype, content, sum(counts))
    return [merged, TypedStream.numeric(4, counts)], b""


def _dec_concat(outputs: Sequence[TypedStream], header: bytes):
    content, sizes = outputs
    HeaderReader(header).done()
    require(sizes.stype == NUMERIC(4), f"concat sizes must be numeric(4), got {sizes.stype}")
    counts = [int(v) for v in sizes.values()]
    require(len(counts) >= 1, "concat needs at least one member")
    require(sum(counts) == content.element_count, "concat sizes do not cover the content")
    parts = []
    if content.stype.kind is StreamKind.STRINGS:
        start = 0
        byte_pos = 0
        for c in counts:
            lens = content.lengths[start : start + c]
            nbytes = sum(lens)
            parts.append(TypedStream(content.stype, content.content[byte_pos : byte_pos + nbytes], c, lens))
            start += c
            byte_pos += nbytes
    else:
        width = content.stype.element_width
        pos = 0
        for c in counts:
            parts.append(TypedStream(content.stype, content.content[pos : pos + c * width], c))
            pos += c * width
    return parts


def _infer_concat(in_types, params):
    known = [t for t in in_types if t is not None]
    if known:
        return (known[0], NUMERIC(4))
    return (ANY_STREAM, NUMERIC(4))


RESTRUCTURE_CODECS = [
    CodecSpec(
        wire_id=7,
        name="dispatch",
        summary="route byte runs to n streams, recording the routing instructions",
        inputs=(SERIAL_ONLY,),
        encode=_enc_dispatch,
        decode=_dec_dispatch,
        infer=_infer_dispatch,
        out_count=_out_count_dispatch,
    ),
    CodecSpec(
        wire_id=8,
        name="split",
        summary="cut serial bytes into fixed segments recorded in the header",
        inputs=(SERIAL_ONLY,),
        encode=_enc_split,
        decode=_dec_split,
        infer=_infer_split,
        out_count=_out_count_split,
    ),
    CodecSpec(
        wire_id=9,
        name="concat",
        summary="join same-typed streams, recording member element counts",
        inputs=(ANY_STREAM,),
        encode=_enc_concat,
        decode=_dec_concat,
        infer=_infer_concat,
        out_count=lambda header: 2,
        variadic=True,
    ),
]
