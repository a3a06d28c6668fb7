"""Named standard graphs.

These are the built-in building blocks a config or a graph-reference node can
name: ``store`` (leave streams as leaves), ``entropy`` (best of store /
constant / order-0 coding, chosen by measurement), ``lz`` (match coding with
raw outputs), and ``compress`` (the general-purpose type-routed pipeline).
Builders specialize on the concrete input types they are handed, so the same
name works for any stream mix.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from graphzip.core.graph import (
    ROOT,
    CodecNode,
    CompressorGraph,
    Edge,
    GraphNode,
    GraphRefNode,
    SelectorNode,
)
from graphzip.core.streams import PortPattern, StreamKind, StreamType
from graphzip.errors import GraphError

# Wire ids used when assembling standard graphs.
W_RECORD_TO_SERIAL = 2
W_SERIAL_TO_NUMERIC = 3
W_NUMERIC_TO_SERIAL = 5
W_STRINGS_SEPARATE = 6
W_DELTA = 10
W_TOKENIZE = 12
W_BITPACK = 14
W_RANGE_PACK = 15
W_CONSTANT = 16
W_HUFFMAN = 19
W_FIELD_LZ = 20
W_BYTE_LZ = 21

Fragment = tuple[list[GraphNode], list[Edge]]
BuilderFn = Callable[[tuple[StreamType, ...], Mapping], CompressorGraph]

_BUILDERS: dict[str, BuilderFn] = {}


def register_builder(name: str, fn: BuilderFn) -> None:
    if name in _BUILDERS:
        raise GraphError(f"standard graph {name!r} already registered")
    _BUILDERS[name] = fn


def build_standard_graph(name: str, input_types: Sequence[StreamType], params: Mapping = {}) -> CompressorGraph:
    fn = _BUILDERS.get(name)
    if fn is None:
        raise GraphError(f"unknown standard graph {name!r}")
    if not input_types:
        raise GraphError(f"standard graph {name!r} needs at least one input type")
    return fn(tuple(input_types), params)


def builder_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def _single(stype: StreamType, nodes: Sequence[GraphNode], edges: Sequence[Edge]) -> CompressorGraph:
    """One-root graph from a fragment whose local root is ROOT port 0."""
    return CompressorGraph.build([PortPattern.exact(stype)], nodes, edges)


def _per_root(
    types: tuple[StreamType, ...],
    fragment: Callable[[StreamType], Fragment],
) -> CompressorGraph:
    """Tile a per-type fragment across every root of a multi-input graph."""
    roots = [PortPattern.exact(t) for t in types]
    nodes: list[GraphNode] = []
    edges: list[Edge] = []
    for i, t in enumerate(types):
        frag_nodes, frag_edges = fragment(t)
        base = len(nodes)
        nodes.extend(frag_nodes)
        for e in frag_edges:
            if e.src == ROOT:
                edges.append(Edge(ROOT, i, e.dst + base, e.dst_port))
            else:
                edges.append(Edge(e.src + base, e.src_port, e.dst + base, e.dst_port))
    return CompressorGraph.build(roots, nodes, edges)


def _store_graph(stype: StreamType) -> CompressorGraph:
    return CompressorGraph.build([PortPattern.exact(stype)], [], [])


def _fanout_edges(src: int, dst: int, count: int) -> list[Edge]:
    return [Edge(src, port, dst, port) for port in range(count)]


# -- entropy -----------------------------------------------------------------


def _order0_route(stype: StreamType) -> CompressorGraph:
    """Order-0 coding of one stream, inserting conversions where needed."""
    kind = stype.kind
    if kind is StreamKind.SERIAL or (kind is StreamKind.NUMERIC and stype.width == 1):
        return _single(stype, [CodecNode(W_HUFFMAN)], [Edge(ROOT, 0, 0, 0)])
    if kind is StreamKind.NUMERIC:
        return _single(
            stype,
            [CodecNode(W_NUMERIC_TO_SERIAL), CodecNode(W_HUFFMAN)],
            [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)],
        )
    if kind is StreamKind.RECORD:
        return _single(
            stype,
            [CodecNode(W_RECORD_TO_SERIAL), CodecNode(W_HUFFMAN)],
            [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)],
        )
    # Strings: split into content and lengths, entropy-code each side.
    return _single(
        stype,
        [CodecNode(W_STRINGS_SEPARATE), GraphRefNode("entropy")],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0), Edge(0, 1, 1, 1)],
    )


def _constant_route(stype: StreamType) -> CompressorGraph:
    return _single(stype, [CodecNode(W_CONSTANT)], [Edge(ROOT, 0, 0, 0)])


def _bitpack_route(stype: StreamType) -> CompressorGraph:
    """Pack to the max bit-width; non-numeric inputs reinterpret as Numeric(1)."""
    kind = stype.kind
    if kind is StreamKind.NUMERIC:
        return _single(stype, [CodecNode(W_BITPACK)], [Edge(ROOT, 0, 0, 0)])
    if kind is StreamKind.SERIAL:
        return _single(
            stype,
            [CodecNode(W_SERIAL_TO_NUMERIC, {"width": 1}), CodecNode(W_BITPACK)],
            [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)],
        )
    return _single(
        stype,
        [
            CodecNode(W_RECORD_TO_SERIAL),
            CodecNode(W_SERIAL_TO_NUMERIC, {"width": 1}),
            CodecNode(W_BITPACK),
        ],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0), Edge(1, 0, 2, 0)],
    )


def _entropy_candidates(stype: StreamType) -> tuple[CompressorGraph, ...]:
    """Store plus the coding routes, ordered store-first then by the wire id
    of each route's defining codec, so min-cost ties resolve the same way on
    every build (store wins an exact tie)."""
    if stype.kind is StreamKind.STRINGS:
        return (_store_graph(stype), _order0_route(stype))
    return (
        _store_graph(stype),
        _bitpack_route(stype),  # defined by bitpack (14)
        _constant_route(stype),  # defined by constant (16)
        _order0_route(stype),  # defined by huffman (19)
    )


def _entropy_fragment(stype: StreamType) -> Fragment:
    return [SelectorNode("min_cost", _entropy_candidates(stype))], [Edge(ROOT, 0, 0, 0)]


def _entropy_builder(types: tuple[StreamType, ...], params: Mapping) -> CompressorGraph:
    return _per_root(types, _entropy_fragment)


# -- lz ------------------------------------------------------------------


def _lz_fragment(stype: StreamType) -> Fragment:
    """Match-code one stream, then entropy-code the four match streams."""
    kind = stype.kind
    if kind in (StreamKind.SERIAL, StreamKind.RECORD, StreamKind.NUMERIC):
        byte_wise = kind is StreamKind.SERIAL or (kind is StreamKind.RECORD and stype.width == 1)
        wire = W_BYTE_LZ if byte_wise else W_FIELD_LZ
        return (
            [CodecNode(wire), GraphRefNode("entropy")],
            [Edge(ROOT, 0, 0, 0)] + _fanout_edges(0, 1, 4),
        )
    # Strings: match-code the content bytes and the length stream separately.
    return (
        [
            CodecNode(W_STRINGS_SEPARATE),
            CodecNode(W_BYTE_LZ),
            GraphRefNode("entropy"),
            CodecNode(W_FIELD_LZ),
            GraphRefNode("entropy"),
        ],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)]
        + _fanout_edges(1, 2, 4)
        + [Edge(0, 1, 3, 0)]
        + _fanout_edges(3, 4, 4),
    )


def _lz_builder(types: tuple[StreamType, ...], params: Mapping) -> CompressorGraph:
    return _per_root(types, _lz_fragment)


# -- compress ---------------------------------------------------------------


def _lz_entropy_route(stype: StreamType, wire: int) -> CompressorGraph:
    """Match-code one stream, then entropy-code all four outputs."""
    return _single(
        stype,
        [CodecNode(wire), GraphRefNode("entropy")],
        [Edge(ROOT, 0, 0, 0)] + _fanout_edges(0, 1, 4),
    )


def _delta_entropy_route(stype: StreamType) -> CompressorGraph:
    return _single(
        stype,
        [CodecNode(W_DELTA), GraphRefNode("entropy")],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)],
    )


def _range_route(stype: StreamType) -> CompressorGraph:
    return _single(stype, [CodecNode(W_RANGE_PACK)], [Edge(ROOT, 0, 0, 0)])


def _tokenize_route(stype: StreamType) -> CompressorGraph:
    """Dictionary-code: alphabet gets entropy coding, indices recurse."""
    return _single(
        stype,
        [CodecNode(W_TOKENIZE), GraphRefNode("entropy"), GraphRefNode("compress")],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0), Edge(0, 1, 2, 0)],
    )


def _entropy_ref_route(stype: StreamType) -> CompressorGraph:
    return _single(stype, [GraphRefNode("entropy")], [Edge(ROOT, 0, 0, 0)])


def _compress_fragment(stype: StreamType) -> Fragment:
    kind = stype.kind
    if kind is StreamKind.SERIAL:
        # Order-0 coding beats match-coding when there are no repeats to find
        # (random-ish text) or when the whole stream is one value (constant).
        candidates = (
            _store_graph(stype),
            _entropy_ref_route(stype),
            _lz_entropy_route(stype, W_BYTE_LZ),
        )
        return [SelectorNode("min_cost", candidates)], [Edge(ROOT, 0, 0, 0)]
    if kind is StreamKind.RECORD:
        lz_wire = W_BYTE_LZ if stype.width == 1 else W_FIELD_LZ
        candidates = (_lz_entropy_route(stype, lz_wire), _tokenize_route(stype))
        return [SelectorNode("record_route", candidates)], [Edge(ROOT, 0, 0, 0)]
    if kind is StreamKind.NUMERIC:
        candidates = (
            _store_graph(stype),
            _delta_entropy_route(stype),
            _range_route(stype),
            _constant_route(stype),
            _lz_entropy_route(stype, W_FIELD_LZ),
        )
        return [SelectorNode("min_cost", candidates)], [Edge(ROOT, 0, 0, 0)]
    # Strings: store outright, separate and recurse on both sides, or
    # dictionary-code repeated elements.
    separated = _single(
        stype,
        [CodecNode(W_STRINGS_SEPARATE), GraphRefNode("compress"), GraphRefNode("compress")],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0), Edge(0, 1, 2, 0)],
    )
    candidates = (_store_graph(stype), separated, _tokenize_route(stype))
    return [SelectorNode("min_cost", candidates)], [Edge(ROOT, 0, 0, 0)]


def _compress_builder(types: tuple[StreamType, ...], params: Mapping) -> CompressorGraph:
    return _per_root(types, _compress_fragment)


def _store_builder(types: tuple[StreamType, ...], params: Mapping) -> CompressorGraph:
    return CompressorGraph.build([PortPattern.exact(t) for t in types], [], [])


register_builder("store", _store_builder)
register_builder("entropy", _entropy_builder)
register_builder("lz", _lz_builder)
register_builder("compress", _compress_builder)
