"""Self-checks for the reference implementations in oracles.py.

These tests pin the oracles to frozen, hand-checkable values so that the
cross-checks elsewhere in the suite rest on verified ground.  Nothing here
imports the package under test.
"""

import random

from oracles import (
    CRC32C_ABC,
    CRC32C_CHECK,
    crc32c_ref,
    delta_ref,
    huffman_cost_ref,
    huffman_depths_ref,
    leb128_ref,
    naive_lz_ref,
    pack_bits_lsb_ref,
    shannon_bits_ref,
    tokenize_ref,
    unpack_bits_lsb_ref,
    zigzag_ref,
)


def test_crc32c_ref_check_values():
    assert crc32c_ref(b"123456789") == CRC32C_CHECK
    assert crc32c_ref(b"abc") == CRC32C_ABC
    assert crc32c_ref(b"") == 0


def test_leb128_ref_edges():
    assert leb128_ref(0) == b"\x00"
    assert leb128_ref(127) == b"\x7f"
    assert leb128_ref(128) == b"\x80\x01"
    assert leb128_ref(624485) == b"\xe5\x8e\x26"


def test_pack_bits_lsb_frozen_example():
    # [1,3,2,0] at 2 bits: 01 | 11 | 10 | 00 LSB-first = 0b00101101 = 0x2D.
    assert pack_bits_lsb_ref([1, 3, 2, 0], 2) == b"\x2d"
    assert pack_bits_lsb_ref([0, 0, 0], 1) == b"\x00"
    assert pack_bits_lsb_ref([], 5) == b""


def test_pack_unpack_bits_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        bits = rng.randint(1, 17)
        values = [rng.randrange(1 << bits) for _ in range(rng.randint(0, 40))]
        packed = pack_bits_lsb_ref(values, bits)
        assert unpack_bits_lsb_ref(packed, bits, len(values)) == values


def test_huffman_depths_single_symbol_cost():
    freqs = [0] * 256
    freqs[0xAA] = 64
    assert huffman_depths_ref(freqs) == {0xAA: 1}
    assert huffman_cost_ref(freqs) == 64


def test_huffman_cost_two_symbols():
    freqs = [0] * 256
    freqs[0], freqs[1] = 10, 3
    assert huffman_cost_ref(freqs) == 13  # one bit each


def test_huffman_cost_abracadabra():
    text = b"abracadabra"
    freqs = [0] * 256
    for b in text:
        freqs[b] += 1
    # a:5 b:2 r:2 c:1 d:1 -> optimal cost 23 bits (a=1, b=r=? see tree below)
    # a(5)=1 bit, b(2)=r(2)=3 bits, c(1)=d(1)=3..4 bits; Huffman: 5*1+2*3+2*3+1*4+1*4=23
    assert huffman_cost_ref(freqs) == 23
    assert huffman_cost_ref(freqs) >= shannon_bits_ref(freqs) - 1e-9


def test_huffman_limited_dp_matches_unlimited_when_slack():
    rng = random.Random(11)
    for _ in range(20):
        freqs = [0] * 32
        for sym in range(rng.randint(2, 12)):
            freqs[sym] = rng.randint(1, 50)
        unlimited = huffman_cost_ref(freqs, limit=40)
        limited = huffman_cost_ref(freqs, limit=12)
        assert limited >= unlimited
        if max(huffman_depths_ref(freqs).values()) <= 12:
            assert limited == unlimited


def test_huffman_limited_dp_binding_case():
    # Fibonacci-like frequencies force an unlimited tree deeper than 12.
    fib = [1, 1]
    while len(fib) < 16:
        fib.append(fib[-1] + fib[-2])
    freqs = fib[:]
    assert max(huffman_depths_ref(freqs).values()) > 12
    limited = huffman_cost_ref(freqs, limit=12)
    unlimited = sum(f * d for f, d in zip(freqs, (huffman_depths_ref(freqs)[i] for i in range(len(freqs)))))
    assert limited >= unlimited
    # Kraft feasibility of the DP optimum is implied by its construction;
    # sanity: cost strictly below the flat 12-bit assignment.
    assert limited < 12 * sum(freqs)


def test_naive_lz_frozen_examples():
    lits, seqs = naive_lz_ref(b"abcabcabc", 1)
    assert lits == b"abc"
    assert seqs == [(3, 6, 3)]

    content = b"XXXXYYYY" * 3  # k=4 elements X Y X Y X Y
    lits, seqs = naive_lz_ref(content, 4)
    assert lits == b"XXXXYYYY"
    assert seqs == [(2, 4, 2)]

    lits, seqs = naive_lz_ref(b"abcd", 1)  # no repeats
    assert lits == b"abcd"
    assert seqs == [(4, 0, 0)]

    lits, seqs = naive_lz_ref(b"", 1)
    assert lits == b""
    assert seqs == []


def test_naive_lz_replay_inverse():
    rng = random.Random(23)
    for _ in range(200):
        k = rng.choice([1, 1, 2, 4])
        n = rng.randint(0, 60)
        alphabet = bytes(range(rng.randint(1, 4)))
        content = bytes(rng.choice(alphabet) for _ in range(n * k))
        lits, seqs = naive_lz_ref(content, k)
        out = bytearray()
        pos = 0
        for lit, match, off in seqs:
            out += lits[pos * k : (pos + lit) * k]
            pos += lit
            for _ in range(match * k):
                out.append(out[len(out) - off * k])
        assert bytes(out) == content


def test_delta_zigzag_tokenize_refs():
    assert delta_ref([5, 7, 9], 1) == [5, 2, 2]
    assert delta_ref([3, 3, 3], 1) == [3, 0, 0]
    assert delta_ref([0, 255], 1) == [0, 255]
    assert zigzag_ref(0, 1) == 0
    assert zigzag_ref(0xFF, 1) == 1  # -1 -> 1
    assert zigzag_ref(1, 1) == 2
    assert zigzag_ref(0x80, 1) == 255  # -128 -> 255
    alphabet, indices = tokenize_ref([b"alice", b"bob", b"bob", b"eve", b"alice", b"bob", b"alice"])
    assert alphabet == [b"alice", b"bob", b"eve"]
    assert indices == [0, 1, 1, 2, 0, 1, 0]
