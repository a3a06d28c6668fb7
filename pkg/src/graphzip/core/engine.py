"""Graph execution: compress to a resolved trace, decode a trace back.

Compression walks the graph in deterministic topological order, runs codec
encoders, and expands selectors and graph references in place. Decompression
needs only the resolved trace and the leaf streams: it walks the records in
reverse and runs each codec's decoder, so any conforming frame decodes with
no knowledge of how its graph was chosen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from graphzip.core.graph import (
    ROOT,
    CodecNode,
    CompressorGraph,
    Edge,
    GraphRefNode,
    ResolvedGraph,
    ResolvedNode,
    SelectorNode,
    _node_order,
    validate_resolved,
)
from graphzip.core.streams import StreamType, TypedStream
from graphzip.errors import BudgetExceededError, CodecError, GraphError

DEFAULT_MAX_NODES = 10_000
DEFAULT_MAX_DEPTH = 64
DEFAULT_EXPANSION_FACTOR = 64  # max stream bytes per input byte during compress
DEFAULT_DECODE_LIMIT = 1 << 30  # 1 GiB unless the caller says otherwise


@dataclass(frozen=True)
class Budget:
    """Resource ceilings for one engine run."""

    max_nodes: int = DEFAULT_MAX_NODES
    max_expansion_depth: int = DEFAULT_MAX_DEPTH
    max_total_stream_bytes: Optional[int] = None  # None: derived from input size

    def resolved_byte_limit(self, input_bytes: int) -> int:
        if self.max_total_stream_bytes is not None:
            return self.max_total_stream_bytes
        return max(1 << 16, DEFAULT_EXPANSION_FACTOR * input_bytes)


class _Trace:
    """Mutable state for one compression run."""

    def __init__(self, inputs: Sequence[TypedStream], budget: Budget) -> None:
        self.streams: list[TypedStream] = list(inputs)
        self.records: list[ResolvedNode] = []
        self.consumed: set[int] = set()
        self.budget = budget
        self.byte_limit = budget.resolved_byte_limit(sum(len(s.content) for s in inputs))
        self.total_bytes = sum(len(s.content) for s in inputs)

    def add_node(self, wire_id: int, header: bytes, input_ids: Sequence[int], outputs: Sequence[TypedStream]) -> list[int]:
        if len(self.records) + 1 > self.budget.max_nodes:
            raise BudgetExceededError(f"node budget {self.budget.max_nodes} exhausted")
        produced = sum(len(s.content) for s in outputs)
        self.total_bytes += produced
        if self.total_bytes > self.byte_limit:
            raise BudgetExceededError(
                f"stream byte budget {self.byte_limit} exhausted ({self.total_bytes} produced)"
            )
        out_ids = list(range(len(self.streams), len(self.streams) + len(outputs)))
        self.streams.extend(outputs)
        self.consumed.update(input_ids)
        self.records.append(ResolvedNode(wire_id, header, tuple(input_ids), tuple(out_ids)))
        return out_ids


def _check_roots(graph: CompressorGraph, inputs: Sequence[TypedStream]) -> None:
    if len(inputs) != len(graph.roots):
        raise GraphError(f"graph expects {len(graph.roots)} roots, got {len(inputs)}")
    for i, (pat, stream) in enumerate(zip(graph.roots, inputs)):
        if not pat.matches(stream.stype):
            raise GraphError(f"root {i} expects {pat}, got {stream.stype}")


def _run_graph(graph: CompressorGraph, root_ids: list[int], trace: _Trace, depth: int) -> None:
    from graphzip.codecs import registry as codec_registry

    if depth > trace.budget.max_expansion_depth:
        raise BudgetExceededError(f"expansion depth {trace.budget.max_expansion_depth} exhausted")

    edge_by_port: dict[tuple[int, int], Edge] = {}
    for e in graph.edges:
        edge_by_port[(e.dst, e.dst_port)] = e
    out_ids_of: dict[int, list[int]] = {}

    def source_id(e: Edge) -> int:
        if e.src == ROOT:
            return root_ids[e.src_port]
        outs = out_ids_of.get(e.src)
        if outs is None or e.src_port >= len(outs):
            raise GraphError(f"edge {e} references an unproduced output")
        return outs[e.src_port]

    def gather(i: int, arity: int) -> list[int]:
        ids = []
        for port in range(arity):
            e = edge_by_port.get((i, port))
            if e is None:
                raise GraphError(f"node {i}: input port {port} has no incoming edge")
            ids.append(source_id(e))
        return ids

    in_degree = [0] * len(graph.nodes)
    for e in graph.edges:
        in_degree[e.dst] += 1

    for i in _node_order(graph):
        node = graph.nodes[i]
        if isinstance(node, CodecNode):
            spec = codec_registry.get(node.wire_id)  # raises UnknownCodecError
            arity = in_degree[i] if spec.variadic else len(spec.inputs)
            input_ids = gather(i, arity)
            input_streams = [trace.streams[sid] for sid in input_ids]
            for port, stream in enumerate(input_streams):
                pat = spec.inputs[0] if spec.variadic else spec.inputs[port]
                if not pat.matches(stream.stype):
                    raise CodecError(
                        f"{spec.name}: input port {port} expects {pat}, got {stream.stype}"
                    )
            outputs, header = spec.encode(input_streams, node.params)
            out_ids = trace.add_node(node.wire_id, header, input_ids, outputs)
            out_ids_of[i] = out_ids
        elif isinstance(node, SelectorNode):
            from graphzip.graphs.selectors import get_selector

            fn = get_selector(node.selector)
            input_ids = gather(i, len(node.candidates[0].roots))
            input_streams = [trace.streams[sid] for sid in input_ids]
            choice = fn(input_streams, node.params, node.candidates)
            if not (0 <= choice < len(node.candidates)):
                raise GraphError(f"selector {node.selector!r} chose candidate {choice} of {len(node.candidates)}")
            chosen = node.candidates[choice]
            _check_roots(chosen, input_streams)
            _run_graph(chosen, input_ids, trace, depth + 1)
        elif isinstance(node, GraphRefNode):
            from graphzip.graphs import build_standard_graph

            input_ids = gather(i, in_degree[i])
            input_streams = [trace.streams[sid] for sid in input_ids]
            sub = build_standard_graph(node.name, tuple(s.stype for s in input_streams), node.params)
            _check_roots(sub, input_streams)
            _run_graph(sub, input_ids, trace, depth + 1)
        else:  # pragma: no cover - dataclass union is closed
            raise GraphError(f"unknown node kind {type(node).__name__}")


def compress(
    graph: CompressorGraph,
    inputs: Sequence[TypedStream],
    budget: Optional[Budget] = None,
) -> tuple[ResolvedGraph, tuple[TypedStream, ...]]:
    """Run the graph on the inputs; codecs see only their own input streams.

    Returns the resolved trace and the leaf streams (ascending stream id).
    Unconsumed streams, including untouched roots, become leaves implicitly.
    """
    budget = budget or Budget()
    _check_roots(graph, inputs)
    trace = _Trace(inputs, budget)
    _run_graph(graph, list(range(len(inputs))), trace, depth=0)

    leaves = tuple(i for i in range(len(trace.streams)) if i not in trace.consumed)
    resolved = ResolvedGraph(
        root_types=tuple(s.stype for s in inputs),
        nodes=tuple(trace.records),
        stream_types=tuple(s.stype for s in trace.streams),
        leaves=leaves,
    )
    return resolved, tuple(trace.streams[i] for i in leaves)


def decompress_resolved(
    resolved: ResolvedGraph,
    leaves: Sequence[TypedStream],
    budget: Optional[Budget] = None,
) -> list[TypedStream]:
    """Regenerate the root streams from a resolved trace and its leaves.

    Walks the records in reverse: each codec decodes its recorded outputs back
    into its inputs. When a stream fans out to several consumers, every
    regeneration must agree byte for byte.
    """
    from graphzip.codecs import registry as codec_registry

    budget = budget or Budget(max_total_stream_bytes=DEFAULT_DECODE_LIMIT)
    report = validate_resolved(resolved)
    if not report.ok:
        raise GraphError("; ".join(report.violations))
    if len(leaves) != len(resolved.leaves):
        raise CodecError(f"expected {len(resolved.leaves)} leaf streams, got {len(leaves)}")

    byte_limit = budget.resolved_byte_limit(sum(len(s.content) for s in leaves))
    total = sum(len(s.content) for s in leaves)
    table: dict[int, TypedStream] = {}
    for sid, stream in zip(resolved.leaves, leaves):
        declared = resolved.stream_types[sid]
        if declared is not None and stream.stype != declared:
            raise CodecError(f"leaf {sid} declared {declared}, got {stream.stype}")
        table[sid] = stream

    def put(sid: int, stream: TypedStream) -> None:
        nonlocal total
        existing = table.get(sid)
        if existing is not None:
            if existing.stype != stream.stype or existing.content != stream.content or existing.lengths != stream.lengths:
                raise CodecError(f"stream {sid} regenerated inconsistently by fan-out consumers")
            return
        total += len(stream.content)
        if total > byte_limit:
            raise BudgetExceededError(f"decode byte budget {byte_limit} exhausted")
        table[sid] = stream

    for record in reversed(resolved.nodes):
        spec = codec_registry.get(record.wire_id)  # raises UnknownCodecError
        outputs = []
        for sid in record.outputs:
            stream = table.get(sid)
            if stream is None:
                raise CodecError(f"{spec.name}: output stream {sid} was never materialized")
            outputs.append(stream)
        regenerated = spec.decode(outputs, record.header)
        if len(regenerated) != len(record.inputs):
            raise CodecError(
                f"{spec.name}: decode produced {len(regenerated)} inputs, trace expects {len(record.inputs)}"
            )
        for sid, stream in zip(record.inputs, regenerated):
            put(sid, stream)

    roots = []
    for sid, rt in enumerate(resolved.root_types):
        stream = table.get(sid)
        if stream is None:
            raise CodecError(f"root stream {sid} was never regenerated")
        if stream.stype != rt:
            raise CodecError(f"root {sid} declared {rt}, regenerated {stream.stype}")
        roots.append(stream)
    return roots
