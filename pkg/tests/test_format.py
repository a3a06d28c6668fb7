"""Frame format: goldens, round-trips, canonical serialization, hostility."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    CRC32C_ABC,
    CRC32C_CHECK,
    FIG2_FRAME_HEX,
    FIG2_INPUT,
    MINIMAL_CONFIG_TEXT,
    STORE_FRAME_CRC_HEX,
    STORE_FRAME_HEX,
    crc32c_ref,
    leb128_ref,
)

from graphzip.core import (
    CodecNode,
    CompressorGraph,
    Edge,
    SERIAL,
    STRINGS,
    TypedStream,
    compress,
)
from graphzip.core.graph import ROOT
from graphzip.errors import (
    BadMagicError,
    ChecksumMismatchError,
    FrameError,
    LimitExceededError,
    MalformedFrameError,
    TruncatedFrameError,
    UnsupportedVersionError,
)
from graphzip.format import (
    DecodeLimits,
    crc32c,
    encode_uvarint,
    inspect_frame,
    read_frame,
    read_frame_streams,
    write_frame,
)
from graphzip.graphs import build_standard_graph


def store_frame(data: bytes, checksum: bool = False) -> bytes:
    g = build_standard_graph("store", [SERIAL])
    resolved, leaves = compress(g, [TypedStream.serial(data)])
    return write_frame(
        resolved, leaves, checksum_of=[TypedStream.serial(data)] if checksum else None
    )


def fig2_frame() -> bytes:
    nodes = [CodecNode(12), CodecNode(19), CodecNode(6), CodecNode(21)]
    edges = [Edge(ROOT, 0, 0, 0), Edge(0, 1, 1, 0), Edge(0, 0, 2, 0), Edge(2, 0, 3, 0)]
    g = CompressorGraph.build([STRINGS], nodes, edges)
    resolved, leaves = compress(g, [TypedStream.strings(list(FIG2_INPUT))])
    return write_frame(resolved, leaves)


# -- varints and CRC ----------------------------------------------------------


@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_uvarint_matches_leb128_reference(value):
    assert encode_uvarint(value) == leb128_ref(value)


def test_crc32c_reference_agreement():
    assert crc32c(b"abc") == CRC32C_ABC
    assert crc32c(b"123456789") == CRC32C_CHECK
    rng = random.Random(3)
    for _ in range(50):
        data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 200)))
        assert crc32c(data) == crc32c_ref(data)


# -- golden frames ------------------------------------------------------------


def test_store_frame_golden_bytes():
    frame = store_frame(b"abc")
    assert frame.hex() == STORE_FRAME_HEX
    assert len(frame) == 15


def test_store_frame_checksummed_golden_bytes():
    frame = store_frame(b"abc", checksum=True)
    assert frame.hex() == STORE_FRAME_CRC_HEX
    assert len(frame) == 19
    assert frame[-4:] == CRC32C_ABC.to_bytes(4, "little")


def test_fig2_frame_golden_bytes():
    assert fig2_frame().hex() == FIG2_FRAME_HEX


def test_empty_store_frame():
    frame = store_frame(b"")
    streams = read_frame(frame)
    assert streams == (TypedStream.serial(b""),)


def test_store_frame_overhead_is_constant():
    for n in (0, 1, 100, 10_000):
        frame = store_frame(bytes(n))
        assert len(frame) - n <= 16 + 10


# -- round-trips and canonical form --------------------------------------------


def test_read_frame_restores_roots():
    for data in (b"", b"x", b"hello world", bytes(range(256)) * 3):
        assert read_frame(store_frame(data)) == (TypedStream.serial(data),)
        assert read_frame(store_frame(data, checksum=True)) == (TypedStream.serial(data),)


def test_fig2_frame_roundtrip():
    assert read_frame(fig2_frame()) == (TypedStream.strings(list(FIG2_INPUT)),)


def test_write_after_read_is_identity():
    # Canonical serialization: parse then re-serialize reproduces the bytes.
    for frame in (store_frame(b"abc"), fig2_frame()):
        resolved, leaves = read_frame_streams(frame)
        assert write_frame(resolved, leaves) == frame


def test_checksummed_write_after_read_is_identity():
    frame = store_frame(b"graphzip", checksum=True)
    resolved, leaves = read_frame_streams(frame)
    roots = read_frame(frame)
    assert write_frame(resolved, leaves, checksum_of=roots) == frame


# -- hostile input -------------------------------------------------------------


def test_bad_magic_rejected():
    frame = bytearray(store_frame(b"abc"))
    frame[0] ^= 0xFF
    with pytest.raises(BadMagicError):
        read_frame(bytes(frame))
    with pytest.raises(FrameError):
        read_frame(b"")


def test_version_99_rejected():
    frame = bytearray(store_frame(b"abc"))
    frame[4] = 99
    with pytest.raises(UnsupportedVersionError):
        read_frame(bytes(frame))
    with pytest.raises(UnsupportedVersionError):
        inspect_frame(bytes(frame))


def test_undefined_flag_bits_rejected():
    frame = bytearray(store_frame(b"abc"))
    frame[5] |= 0x02
    with pytest.raises(MalformedFrameError):
        read_frame(bytes(frame))


def test_every_truncation_is_a_typed_error():
    frame = fig2_frame()
    for cut in range(len(frame)):
        with pytest.raises(FrameError):
            read_frame(frame[:cut])


def test_single_bit_flips_never_pass_silently():
    rng = random.Random(17)
    data = bytes(rng.randrange(256) for _ in range(64))
    frame = store_frame(data, checksum=True)
    for bit in range(len(frame) * 8):
        mutated = bytearray(frame)
        mutated[bit // 8] ^= 1 << (bit % 8)
        try:
            streams = read_frame(bytes(mutated))
        except FrameError:
            continue
        # A parse that survives must still deliver the original bytes
        # (e.g. flips inside ignored varint slack are impossible here).
        assert streams != (TypedStream.serial(data),) or bytes(mutated) == frame
        raise AssertionError(f"bit {bit} flip went unnoticed")


def test_checksum_mismatch_is_distinct_error():
    frame = bytearray(store_frame(b"abcdef", checksum=True))
    frame[-1] ^= 1
    with pytest.raises(ChecksumMismatchError):
        read_frame(bytes(frame))


def test_limits_bound_decoded_bytes():
    frame = store_frame(bytes(10_000))
    with pytest.raises(LimitExceededError):
        read_frame(frame, limits=DecodeLimits(max_total_stream_bytes=100))
    assert read_frame(frame, limits=DecodeLimits(max_total_stream_bytes=1 << 20))


def test_limits_bound_node_count():
    frame = fig2_frame()
    with pytest.raises(LimitExceededError):
        read_frame(frame, limits=DecodeLimits(max_nodes=2))


def test_declared_length_past_buffer_is_truncation():
    frame = bytearray(store_frame(b"abc"))
    # leaf content length varint is the byte before the content; inflate it
    frame[-4] = 0x7F
    with pytest.raises(FrameError):
        read_frame(bytes(frame))


def test_unknown_wire_id_in_frame_rejected():
    frame = bytearray(fig2_frame())
    # first node's wire_id varint sits right after the node count
    idx = frame.index(bytes([0x04, 0x0C])) + 1  # node count 4, tokenize id 12
    frame[idx] = 0x63  # 99
    with pytest.raises(FrameError):
        read_frame(bytes(frame))


# -- inspection -----------------------------------------------------------------


def test_inspect_store_frame():
    info = inspect_frame(store_frame(b"abc"))
    assert info.version == 1
    assert not info.checksum
    assert [str(t) for t in info.root_types] == ["serial"]
    assert info.node_count == 0
    assert info.leaf_count == 1
    assert info.leaf_bytes == 3
    assert info.frame_bytes == 15


def test_inspect_fig2_frame_names_nodes():
    info = inspect_frame(fig2_frame())
    assert [n.name for n in info.nodes] == [
        "tokenize",
        "huffman",
        "strings_separate",
        "byte_lz",
    ]


def test_inspect_truncated_header_errors():
    with pytest.raises(FrameError):
        inspect_frame(b"GMC")


@settings(max_examples=200)
@given(st.binary(max_size=60))
def test_random_buffers_raise_typed_errors_only(blob):
    try:
        read_frame(blob)
    except FrameError:
        pass
