"""CSV ingestion: RFC-4180 parsing into column streams plus routing
instructions.

The parser never transforms bytes. Each cell's raw content span (for quoted
cells, the span between the outer quotes, escapes untouched) routes to that
column's target; every other byte — delimiters, row terminators, quote marks,
and the entire header row — routes to a single framing target. Replaying the
instruction list therefore regenerates the file exactly, which is what lets a
frame built from them round-trip byte-for-byte with no CSV code on the decode
side. Quote flags and row-terminator kinds are analysis outputs for training,
not reconstruction state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from graphzip.errors import CsvError

QUOTE = 0x22  # '"'
LF = 0x0A
CR = 0x0D

ROW_LF = 0
ROW_CRLF = 1
ROW_EOF = 2  # last row ends at end-of-input with no terminator


@dataclass(frozen=True)
class CsvDialect:
    delimiter: bytes = b","
    has_header: bool = True

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1:
            raise CsvError(f"delimiter must be one byte, got {self.delimiter!r}")
        if self.delimiter[0] in (QUOTE, LF, CR):
            raise CsvError("delimiter cannot be the quote or a newline byte")

    def to_doc(self) -> dict:
        return {"delimiter": self.delimiter.decode("latin-1"), "has_header": self.has_header}

    @classmethod
    def from_doc(cls, doc) -> "CsvDialect":
        if not isinstance(doc, dict) or set(doc) - {"delimiter", "has_header"}:
            raise CsvError(f"bad dialect document {doc!r}")
        delim = doc.get("delimiter", ",")
        if not isinstance(delim, str):
            raise CsvError("dialect delimiter must be a one-character string")
        return cls(delim.encode("latin-1"), bool(doc.get("has_header", True)))


@dataclass(frozen=True)
class Column:
    tag: str
    cells: tuple[bytes, ...]
    quoted: tuple[bool, ...]  # one flag per cell


@dataclass(frozen=True)
class CsvParse:
    dialect: CsvDialect
    columns: tuple[Column, ...]
    row_kinds: tuple[int, ...]  # ROW_LF / ROW_CRLF / ROW_EOF per data row
    instructions: tuple[tuple[int, int], ...]  # (target, length); framing last
    header: Optional[tuple[bytes, ...]]

    @property
    def column_count(self) -> int:
        return len(self.columns)

    @property
    def framing_target(self) -> int:
        return len(self.columns)

    @property
    def cell_lengths(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(len(c) for c in col.cells) for col in self.columns)


@dataclass(frozen=True)
class _Cell:
    start: int  # content span [start, end) — inner bytes for quoted cells
    end: int
    quoted: bool


def _parse_rows(data: bytes, delim: int) -> tuple[list[list[_Cell]], list[int]]:
    rows: list[list[_Cell]] = []
    kinds: list[int] = []
    pos = 0
    n = len(data)
    while pos < n:
        row: list[_Cell] = []
        while True:
            if pos < n and data[pos] == QUOTE:
                j = pos + 1
                while True:
                    close = data.find(b'"', j)
                    if close < 0:
                        raise CsvError(f"unterminated quote opened at offset {pos}")
                    if close + 1 < n and data[close + 1] == QUOTE:
                        j = close + 2  # doubled quote: literal, keep scanning
                        continue
                    break
                row.append(_Cell(pos + 1, close, True))
                pos = close + 1
                if pos < n and data[pos] not in (delim, LF, CR):
                    raise CsvError(f"unexpected byte after closing quote at offset {pos}")
                if pos < n and data[pos] == CR and (pos + 1 >= n or data[pos + 1] != LF):
                    raise CsvError(f"unexpected byte after closing quote at offset {pos}")
            else:
                j = pos
                while j < n:
                    b = data[j]
                    if b == delim or b == LF:
                        break
                    if b == CR and j + 1 < n and data[j + 1] == LF:
                        break
                    j += 1
                row.append(_Cell(pos, j, False))
                pos = j
            if pos >= n:
                kinds.append(ROW_EOF)
                break
            b = data[pos]
            if b == delim:
                pos += 1
                continue
            if b == LF:
                pos += 1
                kinds.append(ROW_LF)
                break
            # CR here is always CRLF: lone CR is consumed as cell content.
            pos += 2
            kinds.append(ROW_CRLF)
            break
        rows.append(row)
    return rows, kinds


def _column_tags(header: Optional[Sequence[bytes]], count: int) -> list[str]:
    if header is None:
        return [f"col{i}" for i in range(count)]
    tags: list[str] = []
    used: set[str] = set()
    counts: dict[str, int] = {}
    for i, cell in enumerate(header):
        name = cell.decode("utf-8", errors="replace") or f"col{i}"
        tag = name
        while tag in used:
            counts[name] = counts.get(name, 1) + 1
            tag = f"{name}#{counts[name]}"
        used.add(tag)
        tags.append(tag)
    return tags


def csv_parse(data: bytes, dialect: Optional[CsvDialect] = None) -> CsvParse:
    """Parse a whole CSV document; raises CsvError when it does not conform."""
    dialect = dialect or CsvDialect()
    data = bytes(data)
    delim = dialect.delimiter[0]
    rows, kinds = _parse_rows(data, delim)

    header: Optional[tuple[bytes, ...]] = None
    data_rows = rows
    data_kinds = kinds
    if dialect.has_header:
        if not rows:
            raise CsvError("no header row in input")
        header = tuple(data[c.start : c.end] for c in rows[0])
        data_rows = rows[1:]
        data_kinds = kinds[1:]

    if data_rows:
        width = len(data_rows[0])
    elif header is not None:
        width = len(header)
    else:
        width = 0
    if header is not None and len(header) != width and data_rows:
        raise CsvError(f"ragged row: header has {len(header)} fields, data rows have {width}")
    for i, row in enumerate(data_rows):
        if len(row) != width:
            raise CsvError(f"ragged row {i}: {len(row)} fields, expected {width}")

    framing = width
    instrs: list[list[int]] = []
    cursor = 0

    def emit(target: int, length: int) -> None:
        if length == 0:
            return
        if instrs and instrs[-1][0] == target:
            instrs[-1][1] += length
        else:
            instrs.append([target, length])

    skip = 1 if dialect.has_header else 0
    for row in rows[skip:]:
        for ci, cell in enumerate(row):
            emit(framing, cell.start - cursor)
            emit(ci, cell.end - cell.start)
            cursor = cell.end
    emit(framing, len(data) - cursor)

    columns = tuple(
        Column(
            tag=tag,
            cells=tuple(data[r[ci].start : r[ci].end] for r in data_rows),
            quoted=tuple(r[ci].quoted for r in data_rows),
        )
        for ci, tag in enumerate(_column_tags(header, width))
    )
    return CsvParse(
        dialect=dialect,
        columns=columns,
        row_kinds=tuple(data_kinds),
        instructions=tuple((t, l) for t, l in instrs),
        header=header,
    )


# -- column routing -----------------------------------------------------------

ROUTE_PARSE_INT = "parse_int"
ROUTE_TOKENIZE = "tokenize"
ROUTE_GENERIC = "generic"

TOKEN_RATIO = 0.125


def column_type_probe(cells: Sequence[bytes]) -> str:
    """Pick a route for one column: integer parsing, dictionary, or generic."""
    from graphzip.codecs.intparse import is_canonical_int

    if cells and all(is_canonical_int(c) for c in cells):
        return ROUTE_PARSE_INT
    if cells and len(set(cells)) / len(cells) <= TOKEN_RATIO:
        return ROUTE_TOKENIZE
    return ROUTE_GENERIC
