"""Element-granular LZ: field_lz (20) over records or numerics, byte_lz (21)
over plain bytes.

The matcher is greedy: at each position it takes the longest match among the
most recent candidates sharing a MIN_MATCH-element prefix (hash chain capped
at CHAIN_DEPTH probes, ties broken toward the smallest offset, window of
2**WINDOW_LOG elements). Output is a literals stream plus three equal-length
instruction streams; decode replays them, and copies may overlap their own
output for periodic runs.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from graphzip.core.streams import (
    NUMERIC,
    PortPattern,
    StreamKind,
    TypedStream,
)
from graphzip.codecs.spec import CodecSpec, HeaderReader, require

WINDOW_LOG = 20
MIN_MATCH = 2  # elements
CHAIN_DEPTH = 64
_CHAIN_TRIM = 4 * CHAIN_DEPTH  # amortize chain list trimming

FIELD_LZ_INPUT = PortPattern(frozenset({StreamKind.RECORD, StreamKind.NUMERIC}))
BYTE_LZ_INPUT = PortPattern(frozenset({StreamKind.SERIAL, StreamKind.RECORD}), frozenset({1}))


def lz_sequences(content: bytes, k: int, window_log: int = WINDOW_LOG, min_match: int = MIN_MATCH):
    """Greedy match search; returns (literals, runs, match_lens, match_offs).

    All units are elements of k bytes. Offsets count back from the current
    position; a terminal instruction may carry match length 0.
    """
    n = len(content) // k
    window = 1 << window_log
    probe_bytes = min_match * k
    view = memoryview(content)

    literals = bytearray()
    runs: list[int] = []
    match_lens: list[int] = []
    match_offs: list[int] = []
    chains: dict[bytes, list[int]] = {}
    pending = 0
    last_hashable = n - min_match

    def insert(p: int) -> None:
        key = bytes(view[p * k : p * k + probe_bytes])
        chain = chains.get(key)
        if chain is None:
            chains[key] = [p]
        else:
            chain.append(p)
            if len(chain) > _CHAIN_TRIM:
                del chain[: -CHAIN_DEPTH]

    def match_len_at(cand: int, pos: int) -> int:
        a = cand * k
        b = pos * k
        limit = (n - pos) * k
        m = 0
        while m + 32 <= limit and view[a + m : a + m + 32] == view[b + m : b + m + 32]:
            m += 32
        while m < limit and content[a + m] == content[b + m]:
            m += 1
        return m // k

    pos = 0
    while pos < n:
        best_len = 0
        best_off = 0
        if pos <= last_hashable:
            key = bytes(view[pos * k : pos * k + probe_bytes])
            chain = chains.get(key)
            if chain:
                probes = 0
                for cand in reversed(chain):
                    if probes >= CHAIN_DEPTH:
                        break
                    probes += 1
                    if pos - cand > window:
                        break  # older candidates are only farther away
                    length = match_len_at(cand, pos)
                    if length > best_len:
                        best_len = length
                        best_off = pos - cand
        if best_len >= min_match:
            runs.append(pending)
            match_lens.append(best_len)
            match_offs.append(best_off)
            pending = 0
            stop = min(pos + best_len, last_hashable + 1)
            for p in range(pos, stop):
                insert(p)
            pos += best_len
        else:
            literals += view[pos * k : (pos + 1) * k]
            pending += 1
            if pos <= last_hashable:
                insert(pos)
            pos += 1
    if pending:
        runs.append(pending)
        match_lens.append(0)
        match_offs.append(0)
    return bytes(literals), runs, match_lens, match_offs


def lz_replay(literals: bytes, k: int, runs, match_lens, match_offs) -> bytes:
    """Inverse of lz_sequences; validates every instruction."""
    out = bytearray()
    lit_pos = 0
    for run, mlen, moff in zip(runs, match_lens, match_offs):
        run = int(run)
        mlen = int(mlen)
        moff = int(moff)
        take = run * k
        require(lit_pos + take <= len(literals), "literal run overruns the literals stream")
        out += literals[lit_pos : lit_pos + take]
        lit_pos += take
        if mlen == 0:
            require(moff == 0, "zero-length match must carry offset 0")
            continue
        require(moff >= 1, "match offset must be positive")
        src = len(out) - moff * k
        require(src >= 0, "match offset reaches before the start of output")
        need = mlen * k
        while need > 0:
            avail = len(out) - src
            take_now = min(need, avail)
            out += out[src : src + take_now]
            src += take_now
            need -= take_now
    require(lit_pos == len(literals), "literals stream has unconsumed elements")
    return bytes(out)


def _element_width(stype) -> int:
    return 1 if stype.kind is StreamKind.SERIAL else stype.width


def _enc_lz(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    k = _element_width(src.stype)
    window_log = int(params.get("window_log", WINDOW_LOG))
    min_match = int(params.get("min_match", MIN_MATCH))
    require(min_match >= 1, "min_match must be at least one element")
    literals, runs, mlens, moffs = lz_sequences(src.content, k, window_log, min_match)
    require(len(runs) < 1 << 32, "too many sequences for 32-bit instruction streams")
    require(src.element_count < 1 << 32, "too many elements for 32-bit instruction streams")
    lit_count = len(literals) // k
    lit_stream = (
        TypedStream.serial(literals)
        if src.stype.kind is StreamKind.SERIAL
        else TypedStream(src.stype, literals, lit_count)
    )
    return [
        lit_stream,
        TypedStream.numeric(4, runs),
        TypedStream.numeric(4, mlens),
        TypedStream.numeric(4, moffs),
    ], b""


def _dec_lz(outputs: Sequence[TypedStream], header: bytes):
    literals, runs, mlens, moffs = outputs
    HeaderReader(header).done()
    for s, label in ((runs, "runs"), (mlens, "match lengths"), (moffs, "match offsets")):
        require(s.stype == NUMERIC(4), f"{label} must be numeric(4), got {s.stype}")
    require(
        runs.element_count == mlens.element_count == moffs.element_count,
        "instruction streams disagree on sequence count",
    )
    require(literals.stype.kind is not StreamKind.STRINGS, "literals must be fixed width")
    k = _element_width(literals.stype)
    content = lz_replay(literals.content, k, runs.values(), mlens.values(), moffs.values())
    if literals.stype.kind is StreamKind.SERIAL:
        return [TypedStream.serial(content)]
    return [TypedStream(literals.stype, content, len(content) // k)]


def _infer_lz(in_types, params):
    src = in_types[0] if in_types else None
    lit = src if src is not None else FIELD_LZ_INPUT
    return (lit, NUMERIC(4), NUMERIC(4), NUMERIC(4))


def _infer_byte_lz(in_types, params):
    src = in_types[0] if in_types else None
    lit = src if src is not None else BYTE_LZ_INPUT
    return (lit, NUMERIC(4), NUMERIC(4), NUMERIC(4))


FIELD_LZ_CODEC = CodecSpec(
    wire_id=20,
    name="field_lz",
    summary="greedy LZ over fixed-width elements",
    inputs=(FIELD_LZ_INPUT,),
    encode=_enc_lz,
    decode=_dec_lz,
    infer=_infer_lz,
    out_count=lambda header: 4,
)

BYTE_LZ_CODEC = CodecSpec(
    wire_id=21,
    name="byte_lz",
    summary="greedy LZ over plain bytes",
    inputs=(BYTE_LZ_INPUT,),
    encode=_enc_lz,
    decode=_dec_lz,
    infer=_infer_byte_lz,
    out_count=lambda header: 4,
)
