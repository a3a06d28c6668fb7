"""Compression engine: expansion, selector resolution, replay decoding."""

import pytest

from graphzip.core import (
    Budget,
    CodecNode,
    CompressorGraph,
    Edge,
    GraphRefNode,
    SelectorNode,
    SERIAL,
    STRINGS,
    TypedStream,
    compress,
    decompress_resolved,
)
from graphzip.core.graph import ROOT
from graphzip.errors import BudgetExceededError, CodecError, GraphError

W_TOKENIZE, W_HUFFMAN, W_CONSTANT, W_BYTE_LZ = 12, 19, 16, 21


def store_graph(stype=SERIAL):
    return CompressorGraph.build([stype], [], [])


def test_store_graph_roundtrip():
    data = TypedStream.serial(b"hello world")
    resolved, leaves = compress(store_graph(), [data])
    assert resolved.nodes == ()
    assert leaves == (data,)
    assert decompress_resolved(resolved, leaves) == [data]


def test_codec_chain_roundtrip():
    data = TypedStream.serial(b"abcabcabc" * 10)
    g = CompressorGraph.build(
        [SERIAL], [CodecNode(W_BYTE_LZ), CodecNode(W_HUFFMAN)],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0)],
    )
    resolved, leaves = compress(g, [data])
    assert decompress_resolved(resolved, leaves) == [data]
    # literals went through huffman, so the literal stream is not a leaf
    assert len(leaves) == len(resolved.leaves)


def test_selector_resolves_to_single_candidate():
    # min_cost between store and constant: constant wins on a constant input
    constant = CompressorGraph.build([SERIAL], [CodecNode(W_CONSTANT)], [Edge(ROOT, 0, 0, 0)])
    sel = SelectorNode("min_cost", (store_graph(), constant))
    g = CompressorGraph.build([SERIAL], [sel], [Edge(ROOT, 0, 0, 0)])

    resolved, leaves = compress(g, [TypedStream.serial(b"\x41" * 1000)])
    assert [n.wire_id for n in resolved.nodes] == [W_CONSTANT]
    assert decompress_resolved(resolved, leaves) == [TypedStream.serial(b"\x41" * 1000)]

    resolved, leaves = compress(g, [TypedStream.serial(bytes(range(256)))])
    assert resolved.nodes == ()  # store candidate spliced in


def test_graph_ref_expansion():
    g = CompressorGraph.build([SERIAL], [GraphRefNode("entropy")], [Edge(ROOT, 0, 0, 0)])
    data = TypedStream.serial(b"\x00" * 512)
    resolved, leaves = compress(g, [data])
    assert decompress_resolved(resolved, leaves) == [data]


def test_unknown_graph_ref_fails():
    g = CompressorGraph.build([SERIAL], [GraphRefNode("no_such_graph")], [Edge(ROOT, 0, 0, 0)])
    with pytest.raises(GraphError):
        compress(g, [TypedStream.serial(b"x")])


def test_multi_root_graph():
    g = CompressorGraph.build([SERIAL, SERIAL], [], [])
    a, b = TypedStream.serial(b"aa"), TypedStream.serial(b"bb")
    resolved, leaves = compress(g, [a, b])
    assert decompress_resolved(resolved, leaves) == [a, b]


def test_budget_exhaustion_is_typed():
    # entropy of entropy of entropy ... via nested graph refs trips the depth cap
    g = CompressorGraph.build([SERIAL], [GraphRefNode("compress")], [Edge(ROOT, 0, 0, 0)])
    with pytest.raises(BudgetExceededError):
        compress(g, [TypedStream.serial(b"abc" * 50)], Budget(max_expansion_depth=1))


def test_node_budget_enforced():
    stream = TypedStream.strings([b"alice", b"bob", b"alice"] * 5)
    nodes = [CodecNode(W_TOKENIZE), CodecNode(W_HUFFMAN)]
    edges = [Edge(ROOT, 0, 0, 0), Edge(0, 1, 1, 0)]
    g = CompressorGraph.build([STRINGS], nodes, edges)
    with pytest.raises(BudgetExceededError):
        compress(g, [stream], Budget(max_nodes=1))


def test_decode_replays_in_reverse_topological_order():
    # A two-stage chain must decode back through both stages.
    data = TypedStream.strings([b"q", b"r", b"q", b"q"])
    g = CompressorGraph.build(
        [STRINGS],
        [CodecNode(W_TOKENIZE), CodecNode(W_HUFFMAN)],
        [Edge(ROOT, 0, 0, 0), Edge(0, 1, 1, 0)],
    )
    resolved, leaves = compress(g, [data])
    assert decompress_resolved(resolved, leaves) == [data]


def test_decode_rejects_leaf_mismatch():
    data = TypedStream.serial(b"abc")
    resolved, leaves = compress(store_graph(), [data])
    with pytest.raises(CodecError):
        decompress_resolved(resolved, [])
