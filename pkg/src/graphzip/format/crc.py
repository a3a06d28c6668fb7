"""CRC32C (Castagnoli), reflected, init and final xor 0xFFFFFFFF.

The stdlib only ships the IEEE polynomial (zlib.crc32), so the Castagnoli
table is built here once at import. Check value: crc32c(b"123456789") ==
0xE3069283.
"""

from __future__ import annotations

_POLY = 0x82F63B78

_TABLE = []
for _n in range(256):
    _c = _n
    for _ in range(8):
        _c = (_c >> 1) ^ _POLY if _c & 1 else _c >> 1
    _TABLE.append(_c)


def crc32c(data: bytes, crc: int = 0) -> int:
    table = _TABLE
    c = crc ^ 0xFFFFFFFF
    for b in data:
        c = table[(c ^ b) & 0xFF] ^ (c >> 8)
    return c ^ 0xFFFFFFFF
