"""Canonical Huffman over byte symbols (wire id 19).

Code lengths are limited to MAX_CODE_LEN bits with the package-merge
algorithm, canonical codes are assigned in (length, symbol) order, and the
node header carries the full 256-entry length table packed two 4-bit lengths
per byte. Payload bits are emitted most-significant-bit first.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from graphzip.core.streams import NUMERIC, SERIAL, PortPattern, StreamKind, TypedStream
from graphzip.codecs.spec import CodecSpec, HeaderReader, header_of, require

MAX_CODE_LEN = 12
_TABLE_BYTES = 128  # 256 lengths at 4 bits each

HUFFMAN_INPUT = PortPattern(frozenset({StreamKind.SERIAL, StreamKind.NUMERIC}), frozenset({1}))


def limited_code_lengths(freqs: Sequence[int], limit: int = MAX_CODE_LEN) -> list[int]:
    """Optimal prefix code lengths with every length <= limit (package-merge)."""
    present = [s for s in range(256) if freqs[s] > 0]
    lengths = [0] * 256
    if not present:
        return lengths
    if len(present) == 1:
        lengths[present[0]] = 1
        return lengths
    require(len(present) <= 1 << limit, "alphabet too large for the length limit")

    singles = sorted((freqs[s], (s,)) for s in present)
    row = list(singles)
    for _ in range(limit - 1):
        packages = []
        for j in range(0, len(row) - 1, 2):
            packages.append((row[j][0] + row[j + 1][0], row[j][1] + row[j + 1][1]))
        merged = sorted(singles + packages)
        row = merged
    for weight, syms in row[: 2 * (len(present) - 1)]:
        for s in syms:
            lengths[s] += 1
    return lengths


def canonical_codes(lengths: Sequence[int]) -> np.ndarray:
    """Assign canonical codes in (length, symbol) order; returns uint16 codes."""
    codes = np.zeros(256, dtype=np.uint16)
    order = sorted((l, s) for s, l in enumerate(lengths) if l > 0)
    code = 0
    prev = order[0][0] if order else 0
    for l, s in order:
        code <<= l - prev
        prev = l
        require(code < 1 << l, "code lengths overflow the code space")
        codes[s] = code
        code += 1
    return codes


def _pack_lengths(lengths: Sequence[int]) -> bytes:
    out = bytearray(_TABLE_BYTES)
    for s in range(256):
        l = lengths[s]
        if s & 1:
            out[s >> 1] |= l << 4
        else:
            out[s >> 1] |= l
    return bytes(out)


def _unpack_lengths(table: bytes) -> list[int]:
    lengths = []
    for b in table:
        lengths.append(b & 0x0F)
        lengths.append(b >> 4)
    return lengths


def _encode_payload(data: np.ndarray, codes: np.ndarray, lengths: np.ndarray) -> bytes:
    lens = lengths[data]
    total = int(lens.sum())
    if total == 0:
        return b""
    offsets = np.zeros(len(data), dtype=np.int64)
    offsets[1:] = np.cumsum(lens[:-1].astype(np.int64))
    bits = np.zeros(total, dtype=np.uint8)
    syms = codes[data].astype(np.int64)
    lens64 = lens.astype(np.int64)
    for t in range(MAX_CODE_LEN):
        mask = lens64 > t
        if not mask.any():
            break
        bit = (syms[mask] >> (lens64[mask] - 1 - t)) & 1
        bits[offsets[mask] + t] = bit
    return np.packbits(bits).tobytes()  # MSB-first


def _enc_huffman(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    require(src.element_count >= 1, "huffman needs at least one element")
    data = np.frombuffer(src.content, dtype=np.uint8)
    freqs = np.bincount(data, minlength=256)
    lengths = limited_code_lengths(freqs.tolist())
    codes = canonical_codes(lengths)
    payload = _encode_payload(data, codes, np.asarray(lengths, dtype=np.uint8))
    kind = 0 if src.stype.kind is StreamKind.SERIAL else 1
    header = header_of(bytes([kind]), src.element_count, _pack_lengths(lengths))
    return [TypedStream.serial(payload)], header


def _dec_huffman(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype.kind is StreamKind.SERIAL, f"huffman output must be serial, got {out.stype}")
    r = HeaderReader(header)
    kind = r.byte()
    require(kind in (0, 1), f"bad huffman input kind {kind}")
    count = r.uvarint()
    require(count >= 1, "huffman needs at least one element")
    lengths = _unpack_lengths(r.take(_TABLE_BYTES))
    r.done()

    kraft = sum(1 << (MAX_CODE_LEN - l) for l in lengths if l)
    require(0 < kraft <= 1 << MAX_CODE_LEN, "huffman length table violates the Kraft bound")
    codes = canonical_codes(lengths)

    # Dense window lookup: every 12-bit window resolves to (symbol, length).
    table: list[tuple[int, int]] = [(0, 0)] * (1 << MAX_CODE_LEN)
    for l, s in sorted((l, s) for s, l in enumerate(lengths) if l > 0):
        base = int(codes[s]) << (MAX_CODE_LEN - l)
        span = 1 << (MAX_CODE_LEN - l)
        table[base : base + span] = [(s, l)] * span

    payload = out.content
    total_bits = len(payload) * 8
    decoded = bytearray(count)
    bitpos = 0
    for i in range(count):
        byteidx = bitpos >> 3
        chunk = payload[byteidx : byteidx + 3]
        window = int.from_bytes(chunk, "big") << (8 * (3 - len(chunk)))
        window = (window >> (12 - (bitpos & 7))) & 0xFFF
        sym, l = table[window]
        require(l > 0, "invalid huffman code in payload")
        bitpos += l
        require(bitpos <= total_bits, "huffman payload truncated")
        decoded[i] = sym
    require(len(payload) == (bitpos + 7) // 8, "huffman payload has trailing bytes")

    content = bytes(decoded)
    if kind == 0:
        return [TypedStream.serial(content)]
    return [TypedStream(NUMERIC(1), content, count)]


def _infer_huffman(in_types, params):
    return (SERIAL,)


HUFFMAN_CODEC = CodecSpec(
    wire_id=19,
    name="huffman",
    summary="canonical length-limited huffman over byte symbols",
    inputs=(HUFFMAN_INPUT,),
    encode=_enc_huffman,
    decode=_dec_huffman,
    infer=_infer_huffman,
)
