"""Compiler for the data-description language.

Grammar::

    format := decl* main
    decl   := "record" NAME "{" field* "}"
    field  := NAME ":" type ("->" DEST)? ";"
    type   := prim | NAME | type "[" count "]" | type "[]"
    prim   := u8|u16le|u16be|u32le|u32be|u64le|u64be|f32le|bytes "(" INT ")"
    count  := INT | NAME          -- NAME: an earlier integer field of the record
    main   := "main" ":" type ";"

``type "[]"`` repeats its element to end-of-input and is only legal as the
outermost array of ``main``. Fields without ``->`` route to the implicit
``rest`` destination. Records may reference records declared later, but the
reference graph must be acyclic. All diagnostics carry line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from graphzip.core.streams import NUMERIC, SERIAL, StreamType
from graphzip.errors import SddlSyntaxError

MAX_DESTINATIONS = 256  # routing limit of the dispatch codec

REST_DEST = "rest"

# name -> (byte width, endianness, is_integer, is_float)
PRIMS = {
    "u8": (1, "le", True, False),
    "u16le": (2, "le", True, False),
    "u16be": (2, "be", True, False),
    "u32le": (4, "le", True, False),
    "u32be": (4, "be", True, False),
    "u64le": (8, "le", True, False),
    "u64be": (8, "be", True, False),
    "f32le": (4, "le", False, True),
}

_PUNCT = ("->", "{", "}", ":", ";", "[", "]", "(", ")")


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "punct", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "-" and text.startswith("->", i):
            tokens.append(Token("punct", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "{}:;[]()":
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise SddlSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- type nodes ----------------------------------------------------------------


@dataclass(frozen=True)
class PrimNode:
    prim: str  # key into PRIMS

    @property
    def width(self) -> int:
        return PRIMS[self.prim][0]


@dataclass(frozen=True)
class BytesNode:
    size: int


@dataclass(frozen=True)
class RecordNode:
    name: str
    line: int
    column: int


@dataclass(frozen=True)
class ArrayNode:
    element: "TypeNode"
    count: Union[int, str]  # literal or earlier integer field name
    line: int
    column: int


@dataclass(frozen=True)
class TailNode:
    element: "TypeNode"
    line: int
    column: int


TypeNode = Union[PrimNode, BytesNode, RecordNode, ArrayNode, TailNode]


@dataclass(frozen=True)
class FieldDef:
    name: str
    ftype: TypeNode
    dest: str  # REST_DEST when the field has no explicit destination
    line: int
    column: int


@dataclass(frozen=True)
class RecordDef:
    name: str
    fields: tuple[FieldDef, ...]
    line: int
    column: int


@dataclass(frozen=True)
class DestInfo:
    """One dispatch destination plus the stream shape its bytes carry."""

    name: str
    stype: StreamType  # SERIAL when fields disagree or are raw bytes
    endian: Optional[str]  # "le"/"be" for integer destinations, None otherwise
    is_float: bool = False


@dataclass(frozen=True)
class SddlProgram:
    records: dict[str, RecordDef]
    main: TypeNode
    destinations: tuple[DestInfo, ...]

    def dest_index(self, name: str) -> int:
        for i, d in enumerate(self.destinations):
            if d.name == name:
                return i
        raise KeyError(name)


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def _fail(self, message: str, tok: Optional[Token] = None) -> "SddlSyntaxError":
        tok = tok or self.cur
        raise SddlSyntaxError(message, tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect_punct(self, text: str) -> Token:
        if self.cur.kind != "punct" or self.cur.text != text:
            self._fail(f"expected {text!r}, got {self.cur.text or 'end of input'!r}")
        return self.advance()

    def expect_name(self, what: str) -> Token:
        if self.cur.kind != "name":
            self._fail(f"expected {what}, got {self.cur.text or 'end of input'!r}")
        return self.advance()

    # type := base suffix*
    def parse_type(self, int_fields: dict[str, FieldDef]) -> TypeNode:
        tok = self.cur
        if tok.kind == "name" and tok.text == "bytes":
            self.advance()
            self.expect_punct("(")
            size_tok = self.advance()
            if size_tok.kind != "int":
                self._fail("bytes(...) needs an integer size", size_tok)
            self.expect_punct(")")
            node: TypeNode = BytesNode(int(size_tok.text))
        elif tok.kind == "name" and tok.text in PRIMS:
            self.advance()
            node = PrimNode(tok.text)
        elif tok.kind == "name":
            self.advance()
            node = RecordNode(tok.text, tok.line, tok.column)
        else:
            self._fail(f"expected a type, got {tok.text or 'end of input'!r}", tok)
        while self.cur.kind == "punct" and self.cur.text == "[":
            open_tok = self.advance()
            if self.cur.kind == "punct" and self.cur.text == "]":
                self.advance()
                node = TailNode(node, open_tok.line, open_tok.column)
                continue
            count_tok = self.advance()
            if count_tok.kind == "int":
                count: Union[int, str] = int(count_tok.text)
            elif count_tok.kind == "name":
                ref = int_fields.get(count_tok.text)
                if ref is None:
                    self._fail(
                        f"count {count_tok.text!r} must name an earlier integer field of this record",
                        count_tok,
                    )
                count = count_tok.text
            else:
                self._fail("array count must be an integer or a field name", count_tok)
            self.expect_punct("]")
            node = ArrayNode(node, count, open_tok.line, open_tok.column)
        return node

    def parse_record(self) -> RecordDef:
        kw = self.advance()  # "record"
        name_tok = self.expect_name("record name")
        if name_tok.text in PRIMS or name_tok.text == "bytes":
            self._fail(f"record name {name_tok.text!r} shadows a primitive type", name_tok)
        self.expect_punct("{")
        fields: list[FieldDef] = []
        int_fields: dict[str, FieldDef] = {}
        seen: set[str] = set()
        while not (self.cur.kind == "punct" and self.cur.text == "}"):
            if self.cur.kind == "eof":
                self._fail("unterminated record body")
            fname_tok = self.expect_name("field name")
            if fname_tok.text in seen:
                self._fail(f"duplicate field {fname_tok.text!r}", fname_tok)
            seen.add(fname_tok.text)
            self.expect_punct(":")
            ftype = self.parse_type(int_fields)
            dest = REST_DEST
            if self.cur.kind == "punct" and self.cur.text == "->":
                arrow = self.advance()
                if not _routable(ftype):
                    self._fail("only primitive (or array-of-primitive) fields can route to a destination", arrow)
                dest_tok = self.expect_name("destination name")
                dest = dest_tok.text
            self.expect_punct(";")
            fdef = FieldDef(fname_tok.text, ftype, dest, fname_tok.line, fname_tok.column)
            fields.append(fdef)
            if isinstance(ftype, PrimNode) and PRIMS[ftype.prim][2]:
                int_fields[fdef.name] = fdef
        self.expect_punct("}")
        return RecordDef(name_tok.text, tuple(fields), kw.line, kw.column)


def _routable(node: TypeNode) -> bool:
    """Destinations apply to byte-emitting leaves only, not whole records."""
    while isinstance(node, (ArrayNode, TailNode)):
        node = node.element
    return isinstance(node, (PrimNode, BytesNode))


def _walk(node: TypeNode):
    yield node
    if isinstance(node, (ArrayNode, TailNode)):
        yield from _walk(node.element)


def _check_no_tail(node: TypeNode) -> None:
    for sub in _walk(node):
        if isinstance(sub, TailNode):
            raise SddlSyntaxError(
                "tail repeat '[]' is only allowed at the outermost position of main",
                sub.line,
                sub.column,
            )


def _resolve_records(node: TypeNode, records: dict[str, RecordDef]) -> None:
    for sub in _walk(node):
        if isinstance(sub, RecordNode) and sub.name not in records:
            raise SddlSyntaxError(f"unknown type or record {sub.name!r}", sub.line, sub.column)


def _record_deps(rec: RecordDef) -> set[str]:
    deps: set[str] = set()
    for f in rec.fields:
        for sub in _walk(f.ftype):
            if isinstance(sub, RecordNode):
                deps.add(sub.name)
    return deps


def _check_acyclic(records: dict[str, RecordDef]) -> None:
    state: dict[str, int] = {}  # 1 visiting, 2 done

    def visit(name: str) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            rec = records[name]
            raise SddlSyntaxError(f"recursive record definition involving {name!r}", rec.line, rec.column)
        state[name] = 1
        for dep in sorted(_record_deps(records[name])):
            if dep in records:
                visit(dep)
        state[name] = 2

    for name in records:
        visit(name)


def _leaf_shape(node: TypeNode) -> Optional[tuple[StreamType, Optional[str], bool]]:
    """(stream type, endianness, is_float) of a routable leaf type."""
    while isinstance(node, (ArrayNode, TailNode)):
        node = node.element
    if isinstance(node, BytesNode):
        return (SERIAL, None, False)
    if isinstance(node, PrimNode):
        width, endian, is_int, is_float = PRIMS[node.prim]
        if is_int or is_float:
            return (NUMERIC(width), endian, is_float)
    return None


def _collect_destinations(records: dict[str, RecordDef], main: TypeNode) -> tuple[DestInfo, ...]:
    """Explicit destinations in first-appearance order; ``rest`` always last."""
    shapes: dict[str, list[tuple]] = {}
    order: list[str] = []

    for rec in records.values():
        for f in rec.fields:
            if f.dest == REST_DEST:
                continue
            if f.dest not in shapes:
                shapes[f.dest] = []
                order.append(f.dest)
            shape = _leaf_shape(f.ftype)
            if shape is not None:
                shapes[f.dest].append(shape)

    dests = []
    for name in order:
        seen = set(shapes[name])
        if len(seen) == 1:
            stype, endian, is_float = next(iter(seen))
            dests.append(DestInfo(name, stype, endian, is_float))
        else:
            dests.append(DestInfo(name, SERIAL, None, False))
    dests.append(DestInfo(REST_DEST, SERIAL, None, False))
    if len(dests) > MAX_DESTINATIONS:
        raise SddlSyntaxError(
            f"{len(dests)} destinations exceed the routing limit of {MAX_DESTINATIONS}", 1, 1
        )
    return tuple(dests)


def compile_description(text: str) -> SddlProgram:
    """Compile description text; raises SddlSyntaxError with line/column."""
    parser = _Parser(_tokenize(text))
    records: dict[str, RecordDef] = {}
    while parser.cur.kind == "name" and parser.cur.text == "record":
        rec = parser.parse_record()
        if rec.name in records:
            raise SddlSyntaxError(f"duplicate record {rec.name!r}", rec.line, rec.column)
        records[rec.name] = rec

    if not (parser.cur.kind == "name" and parser.cur.text == "main"):
        parser._fail("expected 'record' or 'main'")
    parser.advance()
    parser.expect_punct(":")
    main = parser.parse_type({})
    parser.expect_punct(";")
    if parser.cur.kind != "eof":
        parser._fail(f"unexpected {parser.cur.text!r} after main")

    # main may use one outermost tail repeat; nothing else may use any.
    main_inner = main.element if isinstance(main, TailNode) else main
    _check_no_tail(main_inner)
    for rec in records.values():
        for f in rec.fields:
            _check_no_tail(f.ftype)
            _resolve_records(f.ftype, records)
    _resolve_records(main, records)
    _check_acyclic(records)

    # Counts referencing fields are validated at parse time; literal counts in
    # main cannot reference fields (no record scope there), also parse-time.
    return SddlProgram(records, main, _collect_destinations(records, main))
