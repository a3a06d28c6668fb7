"""Per-codec behavior: worked examples, error paths, oracle cross-checks."""

import random

import pytest

from gen import assert_roundtrip, codec_case
from oracles import (
    delta_ref,
    huffman_cost_ref,
    naive_lz_ref,
    pack_bits_lsb_ref,
    shannon_bits_ref,
    tokenize_ref,
    zigzag_ref,
)

from graphzip.codecs import registry
from graphzip.core import TypedStream
from graphzip.errors import CodecError


def enc(wire_id, inputs, params=None):
    return registry.get(wire_id).encode(list(inputs), params or {})


def dec(wire_id, outputs, header):
    return registry.get(wire_id).decode(list(outputs), header)


# -- conversions (1-6, 22) --------------------------------------------------


def test_serial_record_views():
    outs, hdr = enc(1, [TypedStream.serial(b"abcd")], {"width": 2})
    assert outs[0] == TypedStream.record(2, b"abcd")
    with pytest.raises(CodecError):
        enc(1, [TypedStream.serial(b"abc")], {"width": 2})
    outs, hdr = enc(2, [TypedStream.record(2, b"abcd")], {})
    assert outs[0] == TypedStream.serial(b"abcd")


def test_serial_numeric_endianness():
    le, _ = enc(3, [TypedStream.serial(b"\x01\x00\x00\x02")], {"width": 2})
    assert list(le[0].values()) == [1, 512]
    be, _ = enc(4, [TypedStream.serial(b"\x01\x00\x00\x02")], {"width": 2})
    assert list(be[0].values()) == [256, 2]
    # big-endian conversion must restore the original byte order
    assert dec(4, be, b"")[0] == TypedStream.serial(b"\x01\x00\x00\x02")
    with pytest.raises(CodecError):
        enc(3, [TypedStream.serial(b"abc")], {"width": 2})


def test_numeric_to_serial_is_le_layout():
    outs, _ = enc(5, [TypedStream.numeric(2, [1, 512])], {})
    assert outs[0] == TypedStream.serial(b"\x01\x00\x00\x02")


def test_strings_separate():
    outs, _ = enc(6, [TypedStream.strings([b"ab", b"", b"c"])], {})
    content, lengths = outs
    assert content == TypedStream.serial(b"abc")
    assert list(lengths.values()) == [2, 0, 1]


def test_serial_to_strings():
    outs, hdr = enc(22, [TypedStream.serial(b"abcde")], {"lengths": [2, 0, 3]})
    assert outs[0] == TypedStream.strings([b"ab", b"", b"cde"])
    with pytest.raises(CodecError):
        enc(22, [TypedStream.serial(b"abc")], {"lengths": [1, 1]})


# -- restructure (7-9) ------------------------------------------------------


def test_dispatch_example():
    outs, hdr = enc(
        7,
        [TypedStream.serial(b"aabbcc")],
        {"n": 2, "instructions": [(0, 2), (1, 2), (0, 2)]},
    )
    assert outs[0] == TypedStream.serial(b"aacc")
    assert outs[1] == TypedStream.serial(b"bb")
    assert list(outs[2].values()) == [0, 1, 0]  # targets
    assert list(outs[3].values()) == [2, 2, 2]  # lengths
    assert dec(7, outs, hdr)[0] == TypedStream.serial(b"aabbcc")


def test_dispatch_coverage_and_target_errors():
    with pytest.raises(CodecError):
        enc(7, [TypedStream.serial(b"abc")], {"n": 1, "instructions": [(0, 2)]})
    with pytest.raises(CodecError):
        enc(7, [TypedStream.serial(b"ab")], {"n": 1, "instructions": [(1, 2)]})
    with pytest.raises(CodecError):
        enc(7, [TypedStream.serial(b"")], {"n": 300, "instructions": []})


def test_split_examples():
    outs, hdr = enc(8, [TypedStream.serial(b"abcdef")], {"segment_sizes": [2, 4]})
    assert [o.content for o in outs] == [b"ab", b"cdef"]
    outs, hdr = enc(8, [TypedStream.serial(b"abcdef")], {"segment_sizes": [6]})
    assert outs[0].content == b"abcdef"
    with pytest.raises(CodecError):
        enc(8, [TypedStream.serial(b"abcdef")], {"segment_sizes": [7]})


def test_concat_examples():
    outs, hdr = enc(9, [TypedStream.serial(b"ab"), TypedStream.serial(b"c")], {})
    assert outs[0].content == b"abc"
    assert list(outs[1].values()) == [2, 1]
    single, _ = enc(9, [TypedStream.serial(b"xyz")], {})
    assert single[0].content == b"xyz"
    assert list(single[1].values()) == [3]
    with pytest.raises(CodecError):
        enc(9, [TypedStream.numeric(2, [1]), TypedStream.numeric(4, [1])], {})


def test_concat_strings_keeps_boundaries():
    a = TypedStream.strings([b"ab", b"c"])
    b = TypedStream.strings([b"", b"xyz"])
    outs, hdr = enc(9, [a, b], {})
    assert outs[0] == TypedStream.strings([b"ab", b"c", b"", b"xyz"])
    assert dec(9, outs, hdr) == [a, b]


# -- numeric transforms (10, 11, 13-15) --------------------------------------


def test_delta_examples():
    outs, _ = enc(10, [TypedStream.numeric(1, [5, 7, 9])], {})
    assert list(outs[0].values()) == [5, 2, 2]
    outs, _ = enc(10, [TypedStream.numeric(1, [3, 3, 3])], {})
    assert list(outs[0].values()) == [3, 0, 0]
    outs, _ = enc(10, [TypedStream.numeric(1, [0, 255])], {})
    assert list(outs[0].values()) == [0, 255]  # 255 == -1 mod 256


def test_delta_matches_reference():
    rng = random.Random(5)
    for _ in range(50):
        w = rng.choice([1, 2, 4, 8])
        vals = [rng.randint(0, (1 << 8 * w) - 1) for _ in range(rng.randint(0, 40))]
        outs, _ = enc(10, [TypedStream.numeric(w, vals)], {})
        assert list(outs[0].values()) == delta_ref(vals, w)


def test_zigzag_examples():
    outs, _ = enc(11, [TypedStream.numeric(1, [0, 0xFF, 1, 0x80])], {})
    assert list(outs[0].values()) == [0, 1, 2, 255]


def test_zigzag_matches_reference():
    rng = random.Random(6)
    for _ in range(50):
        w = rng.choice([1, 2, 4, 8])
        vals = [rng.randint(0, (1 << 8 * w) - 1) for _ in range(rng.randint(0, 40))]
        outs, _ = enc(11, [TypedStream.numeric(w, vals)], {})
        assert list(outs[0].values()) == [zigzag_ref(v, w) for v in vals]


def test_delta_zigzag_compositions_roundtrip():
    rng = random.Random(7)
    for _ in range(50):
        w = rng.choice([1, 2, 4, 8])
        vals = [rng.randint(0, (1 << 8 * w) - 1) for _ in range(rng.randint(0, 30))]
        stream = TypedStream.numeric(w, vals)
        for first, second in ((10, 11), (11, 10)):
            mid, h1 = enc(first, [stream], {})
            out, h2 = enc(second, mid, {})
            back = dec(first, dec(second, out, h2), h1)
            assert back == [stream]


def test_transpose_examples():
    outs, hdr = enc(13, [TypedStream.record(2, b"ABCDEF")], {})
    assert outs[0] == TypedStream.serial(b"ACEBDF")
    outs, hdr = enc(13, [TypedStream.record(1, b"xyz")], {})
    assert outs[0].content == b"xyz"
    outs, hdr = enc(13, [TypedStream.record(4, b"")], {})
    assert outs[0].content == b""


def test_bitpack_examples():
    outs, hdr = enc(14, [TypedStream.numeric(1, [1, 3, 2, 0])], {})
    assert outs[0].content == b"\x2d"
    outs, hdr = enc(14, [TypedStream.numeric(1, [0, 0, 0])], {})
    assert outs[0].content == b"\x00"
    outs, hdr = enc(14, [TypedStream.numeric(4, [])], {})
    assert outs[0].content == b""


def test_bitpack_matches_bit_writer_reference():
    rng = random.Random(8)
    for _ in range(60):
        w = rng.choice([1, 2, 4, 8])
        vals = [rng.randint(0, (1 << 8 * w) - 1) for _ in range(rng.randint(1, 40))]
        outs, _ = enc(14, [TypedStream.numeric(w, vals)], {})
        b = max(1, max(v.bit_length() for v in vals) or 1)
        assert outs[0].content == pack_bits_lsb_ref(vals, b)


def test_range_pack_examples():
    outs, hdr = enc(15, [TypedStream.numeric(1, [100, 101, 103])], {})
    assert outs[0].content == pack_bits_lsb_ref([0, 1, 3], 2)
    outs, hdr = enc(15, [TypedStream.numeric(1, [9, 9])], {})
    assert outs[0].content == b"\x00"  # two 1-bit zero residuals
    with pytest.raises(CodecError):
        enc(15, [TypedStream.numeric(1, [])], {})


# -- alphabet/value codecs (12, 16, 17, 18) ----------------------------------


def test_tokenize_token_sequence():
    tokens = [b"alice", b"bob", b"bob", b"eve", b"alice", b"bob", b"alice"]
    outs, hdr = enc(12, [TypedStream.strings(tokens)], {})
    alphabet, indices = outs
    assert alphabet.elements() == [b"alice", b"bob", b"eve"]
    assert list(indices.values()) == [0, 1, 1, 2, 0, 1, 0]
    assert dec(12, outs, hdr)[0] == TypedStream.strings(tokens)


def test_tokenize_empty_and_width_selection():
    outs, _ = enc(12, [TypedStream.strings([])], {})
    assert outs[0].element_count == 0 and outs[1].element_count == 0
    assert outs[1].stype.width == 1
    # 300 distinct Record(4) values need 2-byte indices (299 > 255)
    content = b"".join(i.to_bytes(4, "little") for i in range(300))
    outs, _ = enc(12, [TypedStream.record(4, content)], {})
    assert outs[1].stype.width == 2


def test_tokenize_matches_reference():
    rng = random.Random(9)
    for _ in range(50):
        elements = [bytes([rng.randrange(3)]) * rng.randint(1, 3) for _ in range(rng.randint(0, 50))]
        outs, _ = enc(12, [TypedStream.strings(elements)], {})
        alphabet, indices = tokenize_ref(elements)
        assert outs[0].elements() == alphabet
        assert list(outs[1].values()) == indices
        assert len(alphabet) <= len(elements) or not elements


def test_constant_examples():
    outs, hdr = enc(16, [TypedStream.numeric(1, [7, 7, 7])], {})
    assert outs[0].content == b""
    assert dec(16, outs, hdr)[0] == TypedStream.numeric(1, [7, 7, 7])
    with pytest.raises(CodecError):
        enc(16, [TypedStream.numeric(1, [7, 8])], {})
    big, hdr = enc(16, [TypedStream.serial(b"\x00" * 10**6)], {})
    assert big[0].content == b""


def test_parse_int_examples():
    outs, hdr = enc(17, [TypedStream.strings([b"123", b"-5", b"0"])], {})
    assert list(outs[0].signed_values()) == [123, -5, 0]
    assert dec(17, outs, hdr)[0] == TypedStream.strings([b"123", b"-5", b"0"])
    for bad in ([b"007"], [b"9223372036854775808"], [b""], [b"+1"], [b"-0"], [b"1a"]):
        with pytest.raises(CodecError):
            enc(17, [TypedStream.strings(bad)], {})


def test_parse_int_int64_extremes():
    cells = [b"9223372036854775807", b"-9223372036854775808"]
    outs, hdr = enc(17, [TypedStream.strings(cells)], {})
    assert list(outs[0].signed_values()) == [2**63 - 1, -(2**63)]
    assert dec(17, outs, hdr)[0] == TypedStream.strings(cells)


def test_float_deconstruct_planes():
    outs, hdr = enc(18, [TypedStream.numeric_raw(4, (0x3F800000).to_bytes(4, "little"))], {})
    sign, exponent, mantissa = outs
    assert sign.content == b"\x00"  # one sign bit, zero
    assert list(exponent.values()) == [0x7F]
    assert mantissa.content == bytes(3)  # 23 zero bits
    zero, hdr = enc(18, [TypedStream.numeric(4, [0])], {})
    assert zero[0].content == b"\x00" and list(zero[1].values()) == [0]


def test_float_deconstruct_bitwise_roundtrip():
    rng = random.Random(10)
    words = [rng.getrandbits(32) for _ in range(10**4)]
    stream = TypedStream.numeric(4, words)
    outs, hdr = enc(18, [stream], {})
    assert dec(18, outs, hdr)[0] == stream  # NaN payloads included


# -- entropy (19) -------------------------------------------------------------


def test_huffman_single_symbol():
    outs, hdr = enc(19, [TypedStream.serial(b"\xaa" * 64)], {})
    assert len(outs[0].content) == 8  # 64 one-bit codes
    assert dec(19, outs, hdr)[0] == TypedStream.serial(b"\xaa" * 64)
    with pytest.raises(CodecError):
        enc(19, [TypedStream.serial(b"")], {})


def test_huffman_cost_matches_oracle():
    rng = random.Random(11)
    cases = [b"abracadabra"]
    for _ in range(100):
        n = rng.randint(1, 400)
        alphabet = bytes(rng.randrange(256) for _ in range(rng.randint(1, 30)))
        cases.append(bytes(rng.choice(alphabet) for _ in range(n)))
    for data in cases:
        freqs = [0] * 256
        for b in data:
            freqs[b] += 1
        outs, _ = enc(19, [TypedStream.serial(data)], {})
        payload_bits = len(outs[0].content) * 8
        optimal = huffman_cost_ref(freqs)
        # Exact byte count: optimal bit cost rounded up to whole bytes.
        assert payload_bits == (optimal + 7) // 8 * 8
        assert payload_bits + 8 > optimal >= shannon_bits_ref(freqs) - 1e-6


def test_huffman_uniform_256_is_incompressible():
    data = bytes(range(256)) * 4
    outs, _ = enc(19, [TypedStream.serial(data)], {})
    assert len(outs[0].content) == len(data)  # all lengths 8


def test_huffman_respects_length_limit():
    # Fibonacci frequencies push unlimited Huffman beyond 12 bits.
    fib = [1, 1]
    while len(fib) < 18:
        fib.append(fib[-1] + fib[-2])
    data = b"".join(bytes([i]) * f for i, f in enumerate(fib))
    stream = TypedStream.serial(data)
    outs, hdr = enc(19, [stream], {})
    assert dec(19, outs, hdr)[0] == stream
    freqs = [0] * 256
    for b in data:
        freqs[b] += 1
    assert len(outs[0].content) * 8 == (huffman_cost_ref(freqs, limit=12) + 7) // 8 * 8


# -- LZ (20, 21) --------------------------------------------------------------


def lz_streams_to_seqs(outs):
    lits = outs[0]
    lit_lens = list(outs[1].values())
    match_lens = list(outs[2].values())
    offsets = list(outs[3].values())
    return lits.content, list(zip(lit_lens, match_lens, offsets))


def test_byte_lz_example():
    outs, hdr = enc(21, [TypedStream.serial(b"abcabcabc")], {})
    lits, seqs = lz_streams_to_seqs(outs)
    assert lits == b"abc"
    assert seqs == [(3, 6, 3)]
    assert dec(21, outs, hdr)[0] == TypedStream.serial(b"abcabcabc")


def test_field_lz_element_granularity():
    content = b"XXXXYYYY" * 3  # X Y X Y X Y at k=4
    outs, hdr = enc(20, [TypedStream.record(4, content)], {})
    lits, seqs = lz_streams_to_seqs(outs)
    assert lits == b"XXXXYYYY"
    assert seqs == [(2, 4, 2)]
    assert dec(20, outs, hdr)[0] == TypedStream.record(4, content)


def test_lz_all_distinct_is_one_literal_run():
    data = bytes(range(64))
    outs, _ = enc(21, [TypedStream.serial(data)], {})
    lits, seqs = lz_streams_to_seqs(outs)
    assert lits == data
    assert seqs == [(64, 0, 0)]


def test_lz_matches_naive_oracle():
    rng = random.Random(12)
    for _ in range(150):
        k = rng.choice([1, 1, 2, 4])
        n = rng.randint(0, 60)  # small enough that the chain cap cannot bind
        alphabet = bytes(range(rng.randint(1, 4)))
        content = bytes(rng.choice(alphabet) for _ in range(n * k))
        if k == 1:
            outs, _ = enc(21, [TypedStream.serial(content)], {})
        else:
            outs, _ = enc(20, [TypedStream.record(k, content)], {})
        lits, seqs = lz_streams_to_seqs(outs)
        ref_lits, ref_seqs = naive_lz_ref(content, k)
        assert (lits, seqs) == (ref_lits, ref_seqs)


def test_lz_beats_literals_when_repeats_exist():
    rng = random.Random(13)
    for _ in range(30):
        unit = bytes(rng.randrange(4) for _ in range(rng.randint(2, 6)))
        data = unit * rng.randint(3, 10)
        outs, _ = enc(21, [TypedStream.serial(data)], {})
        lits, seqs = lz_streams_to_seqs(outs)
        assert len(lits) < len(data)


# -- whole-registry round-trip sweep ------------------------------------------


@pytest.mark.parametrize("wire_id", list(registry.wire_ids()))
def test_randomized_roundtrips(wire_id):
    rng = random.Random(1000 + wire_id)
    spec = registry.get(wire_id)
    for _ in range(400):
        inputs, params = codec_case(wire_id, rng)
        assert_roundtrip(spec, inputs, params)
