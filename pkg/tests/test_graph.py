"""Graph construction and static validation."""

import pytest

from graphzip.core import (
    NUMERIC,
    SERIAL,
    STRINGS,
    CodecNode,
    CompressorGraph,
    Edge,
    GraphRefNode,
    SelectorNode,
    TypedStream,
    compress,
    topological_order,
    validate_graph,
    validate_resolved,
)
from graphzip.core.graph import ROOT
from graphzip.errors import GraphError

W_TOKENIZE, W_HUFFMAN, W_SEPARATE, W_BYTE_LZ = 12, 19, 6, 21
W_DELTA, W_CONSTANT = 10, 16


def fig2_graph() -> CompressorGraph:
    """tokenize -> huffman on indices; alphabet -> separate -> byte_lz."""
    nodes = [
        CodecNode(W_TOKENIZE),
        CodecNode(W_HUFFMAN),
        CodecNode(W_SEPARATE),
        CodecNode(W_BYTE_LZ),
    ]
    edges = [
        Edge(ROOT, 0, 0, 0),
        Edge(0, 1, 1, 0),  # indices -> huffman
        Edge(0, 0, 2, 0),  # alphabet -> strings_separate
        Edge(2, 0, 3, 0),  # content -> byte_lz
    ]
    return CompressorGraph.build([STRINGS], nodes, edges)


def test_valid_graph_passes():
    assert validate_graph(fig2_graph()).ok


def test_unknown_wire_id_reported():
    g = CompressorGraph.build([SERIAL], [CodecNode(99)], [Edge(ROOT, 0, 0, 0)])
    report = validate_graph(g)
    assert not report.ok
    assert any("99" in v for v in report.violations)


def test_unconnected_input_reported():
    # huffman node present but nothing feeds it
    g = CompressorGraph.build([SERIAL], [CodecNode(W_HUFFMAN)], [])
    assert not validate_graph(g).ok


def test_type_mismatch_reported():
    # delta needs numeric, gets serial root
    g = CompressorGraph.build([SERIAL], [CodecNode(W_DELTA)], [Edge(ROOT, 0, 0, 0)])
    report = validate_graph(g)
    assert not report.ok


def test_duplicate_consumer_reported():
    # two edges into the same input port
    g = CompressorGraph.build(
        [SERIAL, SERIAL],
        [CodecNode(W_BYTE_LZ)],
        [Edge(ROOT, 0, 0, 0), Edge(ROOT, 1, 0, 0)],
    )
    assert not validate_graph(g).ok


def test_cycle_reported():
    # 0 feeds 1 feeds 0: constant(serial)->serial? use byte_lz <-> byte_lz ports
    g = CompressorGraph.build(
        [SERIAL],
        [CodecNode(W_BYTE_LZ), CodecNode(W_BYTE_LZ)],
        [Edge(ROOT, 0, 0, 0), Edge(0, 0, 1, 0), Edge(1, 0, 0, 0)],
    )
    report = validate_graph(g)
    assert not report.ok


def test_root_port_out_of_range():
    g = CompressorGraph.build([SERIAL], [CodecNode(W_BYTE_LZ)], [Edge(ROOT, 2, 0, 0)])
    assert not validate_graph(g).ok


def test_selector_candidates_must_agree_on_roots():
    one_root = CompressorGraph.build([SERIAL], [], [])
    two_roots = CompressorGraph.build([SERIAL, SERIAL], [], [])
    sel = SelectorNode("min_cost", (one_root, two_roots))
    g = CompressorGraph.build([SERIAL], [sel], [Edge(ROOT, 0, 0, 0)])
    assert not validate_graph(g).ok


def test_resolved_graph_validates_and_orders():
    stream = TypedStream.strings([b"a", b"b", b"a"])
    resolved, leaves = compress(fig2_graph(), [stream])
    assert validate_resolved(resolved).ok
    order = topological_order(resolved)
    assert sorted(order) == list(range(len(resolved.nodes)))
    # every node's inputs must exist before it runs
    produced = set(range(len(resolved.root_types)))
    position = {node_idx: pos for pos, node_idx in enumerate(order)}
    for idx in order:
        node = resolved.nodes[idx]
        for sid in node.inputs:
            assert sid in produced or any(
                sid in resolved.nodes[j].outputs and position[j] < position[idx]
                for j in range(len(resolved.nodes))
            )
        produced.update(node.outputs)


def test_leaves_are_unconsumed_streams():
    stream = TypedStream.strings([b"x", b"y"])
    resolved, leaves = compress(fig2_graph(), [stream])
    consumed = {s for node in resolved.nodes for s in node.inputs}
    produced = {s for node in resolved.nodes for s in node.outputs}
    produced |= set(range(len(resolved.root_types)))
    assert set(resolved.leaves) == produced - consumed
    assert len(leaves) == len(resolved.leaves)
    # ascending leaf ids pair with the returned leaf streams
    assert list(resolved.leaves) == sorted(resolved.leaves)


def test_compress_rejects_wrong_root_type():
    with pytest.raises(GraphError):
        compress(fig2_graph(), [TypedStream.serial(b"abc")])


def test_compress_rejects_wrong_root_count():
    with pytest.raises(GraphError):
        compress(fig2_graph(), [])
