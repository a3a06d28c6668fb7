"""Value transforms: delta (10), zigzag (11), tokenize (12), transpose (13).

All four reshape values so a downstream entropy stage sees more skew; none
changes the information content.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from graphzip.core.streams import (
    ANY_NUMERIC,
    ANY_RECORD,
    NUMERIC,
    NUMERIC_WIDTHS,
    SERIAL,
    PortPattern,
    StreamKind,
    StreamType,
    TypedStream,
    empty_stream,
)
from graphzip.codecs.spec import CodecSpec, HeaderReader, header_of, require

TOKENIZABLE = PortPattern(frozenset({StreamKind.RECORD, StreamKind.STRINGS}))
INDEX_WIDTHS = PortPattern(frozenset({StreamKind.NUMERIC}))


# -- 10: delta -----------------------------------------------------------------

def _enc_delta(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    v = src.values()
    d = v.copy()
    if len(v) > 1:
        d[1:] = v[1:] - v[:-1]  # unsigned wraparound is the definition
    return [TypedStream(src.stype, d.tobytes(), len(d))], b""


def _dec_delta(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.NUMERIC, f"delta output must be numeric, got {out.stype}")
    HeaderReader(header).done()
    d = out.values()
    v = np.cumsum(d, dtype=d.dtype)
    return [TypedStream(out.stype, v.tobytes(), len(v))]


# -- 11: zigzag ----------------------------------------------------------------

def _enc_zigzag(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    u = src.values()
    bits = 8 * src.stype.width
    sign = u >> np.uint64(bits - 1) if u.dtype == np.uint64 else u >> (bits - 1)
    z = (u << 1) ^ (u.dtype.type(0) - sign.astype(u.dtype))
    return [TypedStream(src.stype, z.astype(u.dtype).tobytes(), len(z))], b""


def _dec_zigzag(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.NUMERIC, f"zigzag output must be numeric, got {out.stype}")
    HeaderReader(header).done()
    z = out.values()
    u = (z >> 1) ^ (z.dtype.type(0) - (z & 1).astype(z.dtype))
    return [TypedStream(out.stype, u.astype(z.dtype).tobytes(), len(u))]


# -- 12: tokenize ----------------------------------------------------------------

def index_width(alphabet_size: int) -> int:
    """Smallest numeric width whose range covers alphabet_size - 1."""
    if alphabet_size <= 1:
        return 1
    top = alphabet_size - 1
    for w in NUMERIC_WIDTHS:
        if top < 1 << (8 * w):
            return w
    raise AssertionError("alphabet cannot exceed 2**64 entries")


def _tokenize_record(src: TypedStream) -> tuple[TypedStream, np.ndarray]:
    k = src.stype.width
    arr = np.frombuffer(src.content, dtype=np.uint8).reshape(src.element_count, k)
    uniq, first, inverse = np.unique(arr, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")  # first-appearance order
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[order] = np.arange(len(uniq))
    alphabet = TypedStream(src.stype, uniq[order].tobytes(), len(uniq))
    return alphabet, rank[inverse.ravel()]


def _tokenize_strings(src: TypedStream) -> tuple[TypedStream, np.ndarray]:
    seen: dict[bytes, int] = {}
    tokens: list[bytes] = []
    indices = np.empty(src.element_count, dtype=np.int64)
    pos = 0
    for i, l in enumerate(src.lengths):
        cell = src.content[pos : pos + l]
        pos += l
        idx = seen.get(cell)
        if idx is None:
            idx = len(tokens)
            seen[cell] = idx
            tokens.append(cell)
        indices[i] = idx
    return TypedStream.strings(tokens), indices


def _enc_tokenize(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    if src.stype.kind is StreamKind.STRINGS:
        alphabet, indices = _tokenize_strings(src)
    else:
        alphabet, indices = _tokenize_record(src)
    w = index_width(alphabet.element_count)
    packed = indices.astype(f"<u{w}")
    return [alphabet, TypedStream(NUMERIC(w), packed.tobytes(), len(packed))], b""


def _dec_tokenize(outputs: Sequence[TypedStream], header: bytes):
    alphabet, indices = outputs
    HeaderReader(header).done()
    require(indices.stype.kind is StreamKind.NUMERIC, f"token indices must be numeric, got {indices.stype}")
    idx = indices.values()
    count = alphabet.element_count
    if len(idx) and (idx.max(initial=0) >= count):
        raise_bad = int(idx.max())
        require(False, f"token index {raise_bad} out of range for alphabet of {count}")
    if alphabet.stype.kind is StreamKind.STRINGS:
        cells = alphabet.elements()
        rebuilt = [cells[int(i)] for i in idx]
        return [TypedStream.strings(rebuilt)]
    require(alphabet.stype.kind is StreamKind.RECORD, f"alphabet must be record or strings, got {alphabet.stype}")
    k = alphabet.stype.width
    table = np.frombuffer(alphabet.content, dtype=np.uint8).reshape(count, k)
    out = table[idx.astype(np.int64)] if len(idx) else np.empty((0, k), dtype=np.uint8)
    return [TypedStream(alphabet.stype, out.tobytes(), len(idx))]


def _infer_tokenize(in_types, params):
    src = in_types[0] if in_types else None
    alphabet = src if src is not None else TOKENIZABLE
    return (alphabet, PortPattern(frozenset({StreamKind.NUMERIC})))


# -- 13: transpose ----------------------------------------------------------------

def _enc_transpose(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    k = src.stype.width
    n = src.element_count
    arr = np.frombuffer(src.content, dtype=np.uint8).reshape(n, k)
    return [TypedStream.serial(arr.T.tobytes())], header_of(k, n)


def _dec_transpose(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"transpose output must be serial, got {out.stype}")
    r = HeaderReader(header)
    k = r.uvarint()
    n = r.uvarint()
    r.done()
    require(k >= 1, "record width must be positive")
    require(k * n == len(out.content), f"transpose header says {k}x{n}, payload is {len(out.content)} bytes")
    arr = np.frombuffer(out.content, dtype=np.uint8).reshape(k, n)
    return [TypedStream.record(k, arr.T.tobytes())]


def _infer_transpose(in_types, params):
    return (SERIAL,)


def _infer_same_numeric(in_types, params):
    src = in_types[0] if in_types else None
    return (src if src is not None else ANY_NUMERIC,)


TRANSFORM_CODECS = [
    CodecSpec(
        wire_id=10,
        name="delta",
        summary="first value then successive differences, mod element range",
        inputs=(ANY_NUMERIC,),
        encode=_enc_delta,
        decode=_dec_delta,
        infer=_infer_same_numeric,
    ),
    CodecSpec(
        wire_id=11,
        name="zigzag",
        summary="fold signed values so small magnitudes become small codes",
        inputs=(ANY_NUMERIC,),
        encode=_enc_zigzag,
        decode=_dec_zigzag,
        infer=_infer_same_numeric,
    ),
    CodecSpec(
        wire_id=12,
        name="tokenize",
        summary="first-appearance alphabet plus narrow indices",
        inputs=(TOKENIZABLE,),
        encode=_enc_tokenize,
        decode=_dec_tokenize,
        infer=_infer_tokenize,
        out_count=lambda header: 2,
    ),
    CodecSpec(
        wire_id=13,
        name="transpose",
        summary="regroup records into per-lane byte planes",
        inputs=(ANY_RECORD,),
        encode=_enc_transpose,
        decode=_dec_transpose,
        infer=_infer_transpose,
    ),
]
