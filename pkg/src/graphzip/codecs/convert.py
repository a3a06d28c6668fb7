"""Type reinterpretation codecs (wire ids 1-6 and 22).

These move bytes between shapes without changing information content. Most
are zero-copy relabelings; the big/little-endian pair byte-swaps, and the
strings pair moves element boundaries in and out of a lengths stream.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

import numpy as np

from graphzip.core.streams import (
    NUMERIC,
    NUMERIC_WIDTHS,
    RECORD,
    SERIAL,
    STRINGS,
    ANY_NUMERIC,
    ANY_RECORD,
    SERIAL_ONLY,
    STRINGS_ONLY,
    PortPattern,
    StreamKind,
    StreamType,
    TypedStream,
)
from graphzip.codecs.spec import CodecSpec, HeaderReader, header_of, param, require


def _record_width(params: Mapping) -> int:
    k = param(params, "width")
    require(isinstance(k, int) and k >= 1, f"record width must be a positive int, got {k!r}")
    return k


def _numeric_width(params: Mapping) -> int:
    w = param(params, "width")
    require(w in NUMERIC_WIDTHS, f"numeric width must be one of {NUMERIC_WIDTHS}, got {w!r}")
    return w


# -- 1: serial -> record(k) --------------------------------------------------

def _enc_serial_to_record(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    k = _record_width(params)
    require(len(src.content) % k == 0, f"{len(src.content)} bytes do not divide into {k}-byte records")
    return [TypedStream.record(k, src.content)], b""


def _dec_serial_to_record(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.RECORD, f"expected record output, got {out.stype}")
    HeaderReader(header).done()
    return [TypedStream.serial(out.content)]


# -- 2: record -> serial -----------------------------------------------------

def _enc_record_to_serial(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    return [TypedStream.serial(src.content)], header_of(src.stype.width)


def _dec_record_to_serial(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"expected serial output, got {out.stype}")
    r = HeaderReader(header)
    k = r.uvarint()
    r.done()
    require(k >= 1, "record width must be positive")
    require(len(out.content) % k == 0, "serial length does not divide into records")
    return [TypedStream.record(k, out.content)]


# -- 3/4: serial -> numeric (little/big endian source) -----------------------

def _enc_serial_to_numeric_le(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    w = _numeric_width(params)
    require(len(src.content) % w == 0, f"{len(src.content)} bytes do not divide into width-{w} values")
    return [TypedStream.numeric_raw(w, src.content)], b""


def _dec_serial_to_numeric_le(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.NUMERIC, f"expected numeric output, got {out.stype}")
    HeaderReader(header).done()
    return [TypedStream.serial(out.content)]


def _swap(content: bytes, w: int) -> bytes:
    if w == 1:
        return content
    arr = np.frombuffer(content, dtype=np.uint8)
    return arr.reshape(-1, w)[:, ::-1].tobytes()


def _enc_serial_to_numeric_be(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    w = _numeric_width(params)
    require(len(src.content) % w == 0, f"{len(src.content)} bytes do not divide into width-{w} values")
    return [TypedStream.numeric_raw(w, _swap(src.content, w))], b""


def _dec_serial_to_numeric_be(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.NUMERIC, f"expected numeric output, got {out.stype}")
    HeaderReader(header).done()
    return [TypedStream.serial(_swap(out.content, out.stype.width))]


# -- 5: numeric -> serial (little-endian payout) ------------------------------

def _enc_numeric_to_serial(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    return [TypedStream.serial(src.content)], header_of(src.stype.width)


def _dec_numeric_to_serial(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"expected serial output, got {out.stype}")
    r = HeaderReader(header)
    w = r.uvarint()
    r.done()
    require(w in NUMERIC_WIDTHS, f"bad numeric width {w}")
    require(len(out.content) % w == 0, "serial length does not divide into values")
    return [TypedStream.numeric_raw(w, out.content)]


# -- 6: strings -> content + lengths ------------------------------------------

def _enc_strings_separate(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    require(all(l < 1 << 32 for l in src.lengths), "string length does not fit in 32 bits")
    lengths = TypedStream.numeric(4, src.lengths)
    return [TypedStream.serial(src.content), lengths], b""


def _dec_strings_separate(outputs: Sequence[TypedStream], header: bytes):
    content, lengths = outputs
    require(content.stype.kind is StreamKind.SERIAL, f"expected serial content, got {content.stype}")
    require(lengths.stype == NUMERIC(4), f"expected numeric(4) lengths, got {lengths.stype}")
    HeaderReader(header).done()
    lens = tuple(int(v) for v in lengths.values())
    require(sum(lens) == len(content.content), "string lengths do not cover the content")
    return [TypedStream(STRINGS, content.content, len(lens), lens)]


# -- 22: serial + profile-supplied lengths -> strings -------------------------

def _enc_serial_to_strings(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    lengths = tuple(int(l) for l in param(params, "lengths"))
    require(all(l >= 0 for l in lengths), "string lengths cannot be negative")
    require(sum(lengths) == len(src.content), "string lengths do not cover the content")
    return [TypedStream(STRINGS, src.content, len(lengths), lengths)], b""


def _dec_serial_to_strings(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.STRINGS, f"expected strings output, got {out.stype}")
    HeaderReader(header).done()
    return [TypedStream.serial(out.content)]


# -- inference ----------------------------------------------------------------

def _infer_to_record(in_types, params):
    return (RECORD(_record_width(params)),)


def _infer_to_serial(in_types, params):
    return (SERIAL,)


def _infer_to_numeric(in_types, params):
    return (NUMERIC(_numeric_width(params)),)


def _infer_strings_separate(in_types, params):
    return (SERIAL, NUMERIC(4))


def _infer_to_strings(in_types, params):
    return (STRINGS,)


CONVERT_CODECS = [
    CodecSpec(
        wire_id=1,
        name="serial_to_record",
        summary="reinterpret serial bytes as fixed-width records",
        inputs=(SERIAL_ONLY,),
        encode=_enc_serial_to_record,
        decode=_dec_serial_to_record,
        infer=_infer_to_record,
    ),
    CodecSpec(
        wire_id=2,
        name="record_to_serial",
        summary="reinterpret fixed-width records as serial bytes",
        inputs=(ANY_RECORD,),
        encode=_enc_record_to_serial,
        decode=_dec_record_to_serial,
        infer=_infer_to_serial,
    ),
    CodecSpec(
        wire_id=3,
        name="serial_to_numeric_le",
        summary="reinterpret little-endian serial bytes as numeric values",
        inputs=(SERIAL_ONLY,),
        encode=_enc_serial_to_numeric_le,
        decode=_dec_serial_to_numeric_le,
        infer=_infer_to_numeric,
    ),
    CodecSpec(
        wire_id=4,
        name="serial_to_numeric_be",
        summary="reinterpret big-endian serial bytes as numeric values",
        inputs=(SERIAL_ONLY,),
        encode=_enc_serial_to_numeric_be,
        decode=_dec_serial_to_numeric_be,
        infer=_infer_to_numeric,
    ),
    CodecSpec(
        wire_id=5,
        name="numeric_to_serial",
        summary="lay numeric values out as little-endian serial bytes",
        inputs=(ANY_NUMERIC,),
        encode=_enc_numeric_to_serial,
        decode=_dec_numeric_to_serial,
        infer=_infer_to_serial,
    ),
    CodecSpec(
        wire_id=6,
        name="strings_separate",
        summary="split strings into content bytes plus a lengths stream",
        inputs=(STRINGS_ONLY,),
        encode=_enc_strings_separate,
        decode=_dec_strings_separate,
        infer=_infer_strings_separate,
        out_count=lambda header: 2,
    ),
    CodecSpec(
        wire_id=22,
        name="serial_to_strings",
        summary="delimit serial bytes into strings using supplied lengths",
        inputs=(SERIAL_ONLY,),
        encode=_enc_serial_to_strings,
        decode=_dec_serial_to_strings,
        infer=_infer_to_strings,
    ),
]
