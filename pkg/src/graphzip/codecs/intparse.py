"""parse_int (17): canonical decimal text to 64-bit values and back.

Only canonical signed decimals are accepted (optional minus, no leading
zeros except "0" itself, no "-0", value fits a signed 64-bit range), so the
decoder can regenerate the exact original text from the values alone.
"""

from __future__ import annotations

import re
from typing import Mapping, Sequence

import numpy as np

from graphzip.core.streams import NUMERIC, STRINGS_ONLY, StreamKind, TypedStream
from graphzip.codecs.spec import CodecSpec, HeaderReader, require

_CANONICAL = re.compile(rb"0|-?[1-9][0-9]*")
_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1


def is_canonical_int(cell: bytes) -> bool:
    if not _CANONICAL.fullmatch(cell):
        return False
    return _INT64_MIN <= int(cell) <= _INT64_MAX


def _enc_parse_int(inputs: Sequence[TypedStream], params: Mapping):
    (src,) = inputs
    values = np.empty(src.element_count, dtype="<i8")
    pos = 0
    for i, l in enumerate(src.lengths):
        cell = src.content[pos : pos + l]
        pos += l
        require(_CANONICAL.fullmatch(cell) is not None, f"element {i} is not a canonical decimal: {cell!r}")
        v = int(cell)
        require(_INT64_MIN <= v <= _INT64_MAX, f"element {i} overflows 64 bits: {cell!r}")
        values[i] = v
    return [TypedStream(NUMERIC(8), values.astype("<u8").tobytes(), src.element_count)], b""


def _dec_parse_int(outputs: Sequence[TypedStream], header: bytes):
    (out,) = outputs
    require(out.stype == NUMERIC(8), f"parse_int output must be numeric(8), got {out.stype}")
    HeaderReader(header).done()
    cells = [str(int(v)).encode("ascii") for v in out.signed_values()]
    return [TypedStream.strings(cells)]


def _infer_parse_int(in_types, params):
    return (NUMERIC(8),)


PARSE_INT_CODEC = CodecSpec(
    wire_id=17,
    name="parse_int",
    summary="canonical decimal strings to 64-bit values",
    inputs=(STRINGS_ONLY,),
    encode=_enc_parse_int,
    decode=_dec_parse_int,
    infer=_infer_parse_int,
)
