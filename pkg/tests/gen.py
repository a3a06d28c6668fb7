"""Randomized input generators for codec round-trip testing.

`codec_case(wire_id, rng)` draws (inputs, params) from the codec's full legal
input domain, deliberately over-weighting degenerate shapes: empty streams,
single elements, all-equal and all-distinct runs, sawtooth patterns, and
maximum-width values.
"""

from __future__ import annotations

import random
from typing import Sequence

from graphzip.core import TypedStream

WIDTHS = (1, 2, 4, 8)


def _size(rng: random.Random, lo: int = 0, hi: int = 80) -> int:
    """Small sizes dominate; occasional larger bursts."""
    roll = rng.random()
    if roll < 0.08:
        return 0
    if roll < 0.16:
        return 1
    if roll < 0.9:
        return rng.randint(lo if lo else 2, hi)
    return rng.randint(hi, hi * 8)


def _values(rng: random.Random, width: int, n: int) -> list[int]:
    top = (1 << (8 * width)) - 1
    style = rng.randrange(6)
    if style == 0:  # all equal
        v = rng.randint(0, top)
        return [v] * n
    if style == 1:  # ramp (sorted, small steps)
        base = rng.randint(0, top // 2)
        step = rng.randint(0, 3)
        return [(base + i * step) & top for i in range(n)]
    if style == 2:  # sawtooth
        return [(i % 7) * (top // 7 or 1) for i in range(n)]
    if style == 3:  # small alphabet
        alpha = [rng.randint(0, top) for _ in range(rng.randint(1, 4))]
        return [rng.choice(alpha) for _ in range(n)]
    if style == 4:  # extremes
        return [rng.choice([0, 1, top, top - 1]) for _ in range(n)]
    return [rng.randint(0, top) for _ in range(n)]


def _serial(rng: random.Random, n: int) -> bytes:
    return bytes(_values(rng, 1, n))


def _strings(rng: random.Random) -> TypedStream:
    n = _size(rng, hi=30)
    style = rng.randrange(4)
    if style == 0:
        pool = [b"", b"a", b"alpha", b"beta", b"gamma"]
        return TypedStream.strings([rng.choice(pool) for _ in range(n)])
    out = []
    for _ in range(n):
        out.append(_serial(rng, rng.randint(0, 12)))
    return TypedStream.strings(out)


def _record(rng: random.Random, width: int | None = None) -> TypedStream:
    k = width or rng.choice([1, 2, 3, 4, 8])
    n = _size(rng, hi=40)
    return TypedStream.record(k, _serial(rng, n * k))


def _numeric(rng: random.Random, width: int | None = None) -> TypedStream:
    w = width or rng.choice(WIDTHS)
    return TypedStream.numeric(w, _values(rng, w, _size(rng, hi=60)))


def _canonical_int(rng: random.Random) -> bytes:
    if rng.random() < 0.1:
        return b"0"
    digits = rng.randint(1, 18)
    value = rng.randint(10 ** (digits - 1) if digits > 1 else 0, 10**digits - 1)
    if value == 0:
        return b"0"
    sign = "-" if rng.random() < 0.3 else ""
    return f"{sign}{value}".encode()


def _segmentation(rng: random.Random, total: int, parts: int) -> list[int]:
    if parts <= 1:
        return [total]
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    sizes = []
    prev = 0
    for c in cuts + [total]:
        sizes.append(c - prev)
        prev = c
    return sizes


def codec_case(wire_id: int, rng: random.Random):
    """Draw (inputs, params) for one randomized round-trip of `wire_id`."""
    if wire_id == 1:  # serial_to_record
        k = rng.choice([1, 2, 3, 4, 8])
        n = _size(rng, hi=40)
        return [TypedStream.serial(_serial(rng, n * k))], {"width": k}
    if wire_id == 2:  # record_to_serial
        return [_record(rng)], {}
    if wire_id in (3, 4):  # serial_to_numeric le/be
        w = rng.choice(WIDTHS)
        n = _size(rng, hi=40)
        return [TypedStream.serial(_serial(rng, n * w))], {"width": w}
    if wire_id == 5:  # numeric_to_serial
        return [_numeric(rng)], {}
    if wire_id == 6:  # strings_separate
        return [_strings(rng)], {}
    if wire_id == 7:  # dispatch
        n_out = rng.randint(1, 6)
        data = _serial(rng, _size(rng))
        instructions = []
        pos = 0
        while pos < len(data):
            run = rng.randint(1, max(1, len(data) - pos))
            instructions.append((rng.randrange(n_out), run))
            pos += run
        return [TypedStream.serial(data)], {"n": n_out, "instructions": instructions}
    if wire_id == 8:  # split
        data = _serial(rng, _size(rng))
        sizes = _segmentation(rng, len(data), rng.randint(1, 5))
        return [TypedStream.serial(data)], {"segment_sizes": sizes}
    if wire_id == 9:  # concat
        m = rng.randint(1, 5)
        kind = rng.randrange(4)
        if kind == 0:
            streams = [TypedStream.serial(_serial(rng, _size(rng, hi=30))) for _ in range(m)]
        elif kind == 1:
            w = rng.choice(WIDTHS)
            streams = [_numeric(rng, w) for _ in range(m)]
        elif kind == 2:
            k = rng.choice([1, 2, 4])
            streams = [_record(rng, k) for _ in range(m)]
        else:
            streams = [_strings(rng) for _ in range(m)]
        return streams, {}
    if wire_id in (10, 11, 14):  # delta, zigzag, bitpack
        return [_numeric(rng)], {}
    if wire_id == 12:  # tokenize
        return [(_strings(rng) if rng.random() < 0.5 else _record(rng))], {}
    if wire_id == 13:  # transpose
        return [_record(rng)], {}
    if wire_id == 15:  # range_pack (nonempty)
        w = rng.choice(WIDTHS)
        n = max(1, _size(rng, hi=60))
        return [TypedStream.numeric(w, _values(rng, w, n))], {}
    if wire_id == 16:  # constant (nonempty, all equal)
        kind = rng.randrange(3)
        n = max(1, _size(rng, hi=60))
        if kind == 0:
            return [TypedStream.serial(bytes([rng.randrange(256)]) * n)], {}
        if kind == 1:
            w = rng.choice(WIDTHS)
            return [TypedStream.numeric(w, [rng.randint(0, (1 << 8 * w) - 1)] * n)], {}
        k = rng.choice([2, 4])
        return [TypedStream.record(k, _serial(rng, k) * n)], {}
    if wire_id == 17:  # parse_int
        n = _size(rng, hi=30)
        return [TypedStream.strings([_canonical_int(rng) for _ in range(n)])], {}
    if wire_id == 18:  # float_deconstruct
        return [_numeric(rng, 4)], {}
    if wire_id == 19:  # huffman (nonempty serial / numeric(1))
        n = max(1, _size(rng))
        if rng.random() < 0.5:
            return [TypedStream.serial(_serial(rng, n))], {}
        return [TypedStream.numeric(1, _values(rng, 1, n))], {}
    if wire_id == 20:  # field_lz: record(k) or numeric(w)
        if rng.random() < 0.5:
            return [_record(rng)], {}
        return [_numeric(rng)], {}
    if wire_id == 21:  # byte_lz: serial or record(1)
        if rng.random() < 0.7:
            return [TypedStream.serial(_serial(rng, _size(rng)))], {}
        return [_record(rng, 1)], {}
    if wire_id == 22:  # serial_to_strings
        data = _serial(rng, _size(rng))
        lengths = _segmentation(rng, len(data), rng.randint(1, 6))
        return [TypedStream.serial(data)], {"lengths": lengths}
    raise AssertionError(f"no generator for wire_id {wire_id}")


def assert_roundtrip(spec, inputs: Sequence[TypedStream], params) -> None:
    outputs, header = spec.encode(list(inputs), params)
    decoded = spec.decode(list(outputs), header)
    assert list(decoded) == list(inputs), (
        f"{spec.name} round-trip mismatch on {inputs!r} params={params!r}"
    )
