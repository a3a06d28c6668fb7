"""Typed message streams.

A stream is an immutable value carrying raw content bytes plus just enough
typing to give the bytes a shape: flat bytes, fixed-width records, fixed-width
little-endian integers, or length-delimited strings. Codecs consume and
produce these; nothing else flows along graph edges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from graphzip.errors import StreamError

NUMERIC_WIDTHS = (1, 2, 4, 8)

_UINT_DTYPES = {1: np.uint8, 2: np.dtype("<u2"), 4: np.dtype("<u4"), 8: np.dtype("<u8")}
_INT_DTYPES = {1: np.int8, 2: np.dtype("<i2"), 4: np.dtype("<i4"), 8: np.dtype("<i8")}


class StreamKind(enum.Enum):
    SERIAL = "serial"
    RECORD = "record"
    NUMERIC = "numeric"
    STRINGS = "strings"


@dataclass(frozen=True)
class StreamType:
    """A stream's shape: kind plus element width where the kind has one."""

    kind: StreamKind
    width: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is StreamKind.RECORD:
            if not isinstance(self.width, int) or self.width < 1:
                raise StreamError(f"record width must be a positive int, got {self.width!r}")
        elif self.kind is StreamKind.NUMERIC:
            if self.width not in NUMERIC_WIDTHS:
                raise StreamError(f"numeric width must be one of {NUMERIC_WIDTHS}, got {self.width!r}")
        elif self.width is not None:
            raise StreamError(f"{self.kind.value} streams carry no width")

    @property
    def element_width(self) -> Optional[int]:
        """Bytes per element, or None for strings (variable)."""
        if self.kind is StreamKind.SERIAL:
            return 1
        if self.kind is StreamKind.STRINGS:
            return None
        return self.width

    def __str__(self) -> str:
        if self.width is None:
            return self.kind.value
        return f"{self.kind.value}({self.width})"


SERIAL = StreamType(StreamKind.SERIAL)
STRINGS = StreamType(StreamKind.STRINGS)


def RECORD(width: int) -> StreamType:
    return StreamType(StreamKind.RECORD, width)


def NUMERIC(width: int) -> StreamType:
    return StreamType(StreamKind.NUMERIC, width)


@dataclass(frozen=True)
class TypedStream:
    """Immutable content bytes plus their stream type.

    Numeric content is canonical little-endian regardless of host byte order.
    Strings content is the concatenation of the elements; ``lengths`` carries
    one byte length per element and is None for every other kind.
    """

    stype: StreamType
    content: bytes
    element_count: int
    lengths: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        kind = self.stype.kind
        n = self.element_count
        if n < 0:
            raise StreamError("element_count cannot be negative")
        if kind is StreamKind.STRINGS:
            if self.lengths is None or len(self.lengths) != n:
                raise StreamError("strings stream needs one length per element")
            if any(l < 0 for l in self.lengths):
                raise StreamError("string lengths cannot be negative")
            if sum(self.lengths) != len(self.content):
                raise StreamError("string lengths do not cover the content")
        else:
            if self.lengths is not None:
                raise StreamError(f"{kind.value} streams carry no lengths")
            width = self.stype.element_width
            if len(self.content) != n * width:
                raise StreamError(
                    f"{self.stype} with {n} elements needs {n * width} bytes, got {len(self.content)}"
                )

    # -- constructors ------------------------------------------------------

    @classmethod
    def serial(cls, content: bytes) -> "TypedStream":
        content = bytes(content)
        return cls(SERIAL, content, len(content))

    @classmethod
    def record(cls, width: int, content: bytes) -> "TypedStream":
        content = bytes(content)
        if len(content) % width != 0:
            raise StreamError(f"content length {len(content)} is not a multiple of record width {width}")
        return cls(RECORD(width), content, len(content) // width)

    @classmethod
    def numeric_raw(cls, width: int, content: bytes) -> "TypedStream":
        content = bytes(content)
        if len(content) % width != 0:
            raise StreamError(f"content length {len(content)} is not a multiple of numeric width {width}")
        return cls(NUMERIC(width), content, len(content) // width)

    @classmethod
    def numeric(cls, width: int, values: Iterable[int]) -> "TypedStream":
        """Build from unsigned values, reduced mod 2**(8*width)."""
        stype = NUMERIC(width)  # validates the width before it is used as a key
        mask = (1 << (8 * width)) - 1
        reduced = np.array([int(v) & mask for v in values], dtype=_UINT_DTYPES[width])
        return cls(stype, reduced.tobytes(), len(reduced))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "TypedStream":
        width = arr.dtype.itemsize
        le = arr.astype(_UINT_DTYPES[width], copy=False)
        return cls(NUMERIC(width), le.tobytes(), len(le))

    @classmethod
    def strings(cls, elements: Sequence[bytes]) -> "TypedStream":
        content = b"".join(elements)
        return cls(STRINGS, content, len(elements), tuple(len(e) for e in elements))

    # -- views -------------------------------------------------------------

    def values(self) -> np.ndarray:
        """Numeric content as an unsigned numpy array (little-endian view)."""
        if self.stype.kind is not StreamKind.NUMERIC:
            raise StreamError(f"values() needs a numeric stream, got {self.stype}")
        return np.frombuffer(self.content, dtype=_UINT_DTYPES[self.stype.width])

    def signed_values(self) -> np.ndarray:
        if self.stype.kind is not StreamKind.NUMERIC:
            raise StreamError(f"signed_values() needs a numeric stream, got {self.stype}")
        return np.frombuffer(self.content, dtype=_INT_DTYPES[self.stype.width])

    def elements(self) -> list[bytes]:
        """Content split into per-element byte strings."""
        kind = self.stype.kind
        if kind is StreamKind.STRINGS:
            out, pos = [], 0
            for l in self.lengths:
                out.append(self.content[pos : pos + l])
                pos += l
            return out
        width = self.stype.element_width
        return [self.content[i : i + width] for i in range(0, len(self.content), width)]

    def __len__(self) -> int:
        return self.element_count

    def __repr__(self) -> str:  # keep test output readable
        return f"TypedStream({self.stype}, n={self.element_count}, bytes={len(self.content)})"


@dataclass(frozen=True)
class PortPattern:
    """The set of stream types a codec port accepts or may produce.

    ``kinds`` is the accepted kind set; ``widths`` optionally constrains the
    width of record/numeric members (None means any legal width).
    """

    kinds: frozenset[StreamKind]
    widths: Optional[frozenset[int]] = None

    @classmethod
    def exact(cls, stype: StreamType) -> "PortPattern":
        widths = None if stype.width is None else frozenset({stype.width})
        return cls(frozenset({stype.kind}), widths)

    @classmethod
    def of(cls, *kinds: StreamKind, widths: Optional[Iterable[int]] = None) -> "PortPattern":
        return cls(frozenset(kinds), None if widths is None else frozenset(widths))

    def matches(self, stype: StreamType) -> bool:
        if stype.kind not in self.kinds:
            return False
        if self.widths is not None and stype.kind in (StreamKind.RECORD, StreamKind.NUMERIC):
            return stype.width in self.widths
        return True

    def intersects(self, other: "PortPattern") -> bool:
        """True when some concrete stream type satisfies both patterns."""
        common = self.kinds & other.kinds
        if not common:
            return False
        sized = {StreamKind.RECORD, StreamKind.NUMERIC}
        if common - sized:
            return True
        if self.widths is None or other.widths is None:
            return True
        if self.widths & other.widths:
            return True
        return False

    def __str__(self) -> str:
        names = "|".join(sorted(k.value for k in self.kinds))
        if self.widths is not None:
            names += f"({','.join(str(w) for w in sorted(self.widths))})"
        return names


ANY_STREAM = PortPattern(frozenset(StreamKind))
ANY_FIXED = PortPattern(frozenset({StreamKind.SERIAL, StreamKind.RECORD, StreamKind.NUMERIC}))
ANY_NUMERIC = PortPattern(frozenset({StreamKind.NUMERIC}))
ANY_RECORD = PortPattern(frozenset({StreamKind.RECORD}))
SERIAL_ONLY = PortPattern(frozenset({StreamKind.SERIAL}))
STRINGS_ONLY = PortPattern(frozenset({StreamKind.STRINGS}))


def empty_stream(stype: StreamType) -> TypedStream:
    if stype.kind is StreamKind.STRINGS:
        return TypedStream(stype, b"", 0, ())
    return TypedStream(stype, b"", 0)
