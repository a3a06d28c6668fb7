"""Bit-level packers: bitpack (14), range_pack (15), constant (16),
float_deconstruct (18).

Bit order convention: value bit i of element j lands at stream bit position
j*b + i, filled least-significant-bit first within each output byte.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from graphzip.core.streams import (
    ANY_FIXED,
    ANY_NUMERIC,
    NUMERIC,
    NUMERIC_WIDTHS,
    SERIAL,
    PortPattern,
    StreamKind,
    StreamType,
    TypedStream,
)
from graphzip.codecs.spec import CodecSpec, HeaderReader, header_of, require

_KIND_TAGS = {StreamKind.SERIAL: 0, StreamKind.RECORD: 1, StreamKind.NUMERIC: 2}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}


def pack_bits_lsb(values: np.ndarray, bit_width: int) -> bytes:
    """Pack each value's low bit_width bits, LSB first, zero padded to a byte."""
    if len(values) == 0:
        return b""
    v = values.astype(np.uint64, copy=False)
    shifts = np.arange(bit_width, dtype=np.uint64)
    bits = ((v[:, None] >> shifts) & 1).astype(np.uint8)
    return np.packbits(bits.ravel(), bitorder="little").tobytes()


def unpack_bits_lsb(payload: bytes, bit_width: int, count: int) -> np.ndarray:
    """Inverse of pack_bits_lsb; returns uint64 values."""
    total = bit_width * count
    require(len(payload) == (total + 7) // 8, f"bit payload is {len(payload)} bytes, need {(total + 7) // 8}")
    if count == 0:
        return np.empty(0, dtype=np.uint64)
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little", count=total)
    weights = np.uint64(1) << np.arange(bit_width, dtype=np.uint64)
    return bits.reshape(count, bit_width).astype(np.uint64) @ weights


def _required_bits(values: np.ndarray) -> int:
    if len(values) == 0:
        return 1
    return max(1, int(values.max()).bit_length())


# -- 14: bitpack -----------------------------------------------------------------

def _enc_bitpack(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    v = src.values()
    b = _required_bits(v)
    payload = pack_bits_lsb(v, b)
    header = header_of(src.stype.width, b, src.element_count)
    return [TypedStream.serial(payload)], header


def _dec_bitpack(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"bitpack output must be serial, got {out.stype}")
    r = HeaderReader(header)
    w = r.uvarint()
    b = r.uvarint()
    count = r.uvarint()
    r.done()
    require(w in NUMERIC_WIDTHS, f"bad numeric width {w}")
    require(1 <= b <= 8 * w, f"bit width {b} invalid for {w}-byte values")
    values = unpack_bits_lsb(out.content, b, count)
    return [TypedStream(NUMERIC(w), values.astype(f"<u{w}").tobytes(), count)]


# -- 15: range_pack ----------------------------------------------------------------

def _enc_range_pack(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    require(src.element_count >= 1, "range_pack needs at least one element")
    v = src.values()
    w = src.stype.width
    lo = v.min()
    residuals = (v - lo).astype(np.uint64)
    b = _required_bits(residuals)
    payload = pack_bits_lsb(residuals, b)
    header = header_of(w, int(lo).to_bytes(w, "little"), b, src.element_count)
    return [TypedStream.serial(payload)], header


def _dec_range_pack(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"range_pack output must be serial, got {out.stype}")
    r = HeaderReader(header)
    w = r.uvarint()
    require(w in NUMERIC_WIDTHS, f"bad numeric width {w}")
    lo = int.from_bytes(r.take(w), "little")
    b = r.uvarint()
    count = r.uvarint()
    r.done()
    require(1 <= b <= 8 * w, f"bit width {b} invalid for {w}-byte values")
    require(count >= 1, "range_pack needs at least one element")
    residuals = unpack_bits_lsb(out.content, b, count)
    top = 1 << (8 * w)
    require(int(residuals.max()) + lo < top, "range_pack values overflow the element width")
    values = residuals + np.uint64(lo)
    return [TypedStream(NUMERIC(w), values.astype(f"<u{w}").tobytes(), count)]


# -- 16: constant -------------------------------------------------------------------

def _enc_constant(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    require(src.element_count >= 1, "constant needs at least one element")
    width = src.stype.element_width
    value = src.content[:width]
    require(src.content == value * src.element_count, "constant input has differing elements")
    header = header_of(
        bytes([_KIND_TAGS[src.stype.kind]]),
        width,
        src.element_count,
        value,
    )
    return [TypedStream.serial(b"")], header


def _dec_constant(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(len(out.content) == 0, "constant payload must be empty")
    r = HeaderReader(header)
    tag = r.byte()
    width = r.uvarint()
    count = r.uvarint()
    require(tag in _TAG_KINDS, f"bad constant kind tag {tag}")
    kind = _TAG_KINDS[tag]
    require(width >= 1, "constant width must be positive")
    if kind is StreamKind.SERIAL:
        require(width == 1, "serial constants are single bytes")
    if kind is StreamKind.NUMERIC:
        require(width in NUMERIC_WIDTHS, f"bad numeric width {width}")
    require(count >= 1, "constant needs at least one element")
    value = r.take(width)
    r.done()
    stype = StreamType(kind) if kind is StreamKind.SERIAL else StreamType(kind, width)
    return [TypedStream(stype, value * count, count)]


# -- 18: float_deconstruct -------------------------------------------------------------

def _enc_float_deconstruct(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    u = src.values().astype(np.uint32, copy=False)
    n = src.element_count
    signs = (u >> 31).astype(np.uint8)
    exponents = ((u >> 23) & 0xFF).astype(np.uint8)
    mantissas = (u & 0x7FFFFF).astype(np.uint64)
    sign_plane = np.packbits(signs, bitorder="little").tobytes() if n else b""
    mant_plane = pack_bits_lsb(mantissas, 23)
    outputs = [
        TypedStream.serial(sign_plane),
        TypedStream(NUMERIC(1), exponents.tobytes(), n),
        TypedStream.serial(mant_plane),
    ]
    return outputs, header_of(n)


def _dec_float_deconstruct(outputs: Sequence[TypedStream], header: bytes):
    signs, exponents, mantissas = outputs
    r = HeaderReader(header)
    n = r.uvarint()
    r.done()
    require(signs.stype.kind is StreamKind.SERIAL, "sign plane must be serial")
    require(exponents.stype == NUMERIC(1), f"exponents must be numeric(1), got {exponents.stype}")
    require(mantissas.stype.kind is StreamKind.SERIAL, "mantissa plane must be serial")
    require(exponents.element_count == n, "exponent count disagrees with header")
    require(len(signs.content) == (n + 7) // 8, "sign plane has wrong size")
    sign_bits = (
        np.unpackbits(np.frombuffer(signs.content, dtype=np.uint8), bitorder="little", count=n).astype(np.uint32)
        if n
        else np.empty(0, dtype=np.uint32)
    )
    mant = unpack_bits_lsb(mantissas.content, 23, n).astype(np.uint32)
    exp = np.frombuffer(exponents.content, dtype=np.uint8).astype(np.uint32)
    u = (sign_bits << 31) | (exp << 23) | mant
    return [TypedStream(NUMERIC(4), u.astype("<u4").tobytes(), n)]


def _infer_serial(in_types, params):
    return (SERIAL,)


def _infer_constant(in_types, params):
    return (SERIAL,)


def _infer_float(in_types, params):
    return (SERIAL, NUMERIC(1), SERIAL)


PACK_CODECS = [
    CodecSpec(
        wire_id=14,
        name="bitpack",
        summary="pack values into their maximum used bit width",
        inputs=(ANY_NUMERIC,),
        encode=_enc_bitpack,
        decode=_dec_bitpack,
        infer=_infer_serial,
    ),
    CodecSpec(
        wire_id=15,
        name="range_pack",
        summary="subtract the minimum, then bitpack the residuals",
        inputs=(ANY_NUMERIC,),
        encode=_enc_range_pack,
        decode=_dec_range_pack,
        infer=_infer_serial,
    ),
    CodecSpec(
        wire_id=16,
        name="constant",
        summary="collapse an all-equal stream into its header",
        inputs=(ANY_FIXED,),
        encode=_enc_constant,
        decode=_dec_constant,
        infer=_infer_constant,
    ),
    CodecSpec(
        wire_id=18,
        name="float_deconstruct",
        summary="split binary32 floats into sign, exponent, and mantissa planes",
        inputs=(PortPattern(frozenset({StreamKind.NUMERIC}), frozenset({4})),),
        encode=_enc_float_deconstruct,
        decode=_dec_float_deconstruct,
        infer=_infer_float,
        out_count=lambda header: 3,
    ),
]
