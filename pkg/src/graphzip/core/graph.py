"""Compressor graphs and their resolved (selector-free) form.

A ``CompressorGraph`` is the static artifact a user builds or a config
describes: codec nodes, selector nodes (runtime choice among candidate
subgraphs), and references to named standard graphs. Selector and reference
nodes are sinks; when the engine expands them, the chosen subgraph's nodes
splice into the trace and its unconsumed streams become leaves.

A ``ResolvedGraph`` is the selector-free trace that frames serialize: codec
records in topological order over a flat stream-id space, where ids 0..r-1
are the root inputs and each node's outputs take consecutive fresh ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from graphzip.core.streams import PortPattern, StreamType, TypedStream
from graphzip.errors import GraphError

ROOT = -1  # edge source index meaning "graph root input"


@dataclass(frozen=True)
class CodecNode:
    wire_id: int
    params: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class SelectorNode:
    selector: str
    candidates: tuple["CompressorGraph", ...]
    params: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class GraphRefNode:
    name: str
    params: Mapping = field(default_factory=dict)


GraphNode = Union[CodecNode, SelectorNode, GraphRefNode]


@dataclass(frozen=True)
class Edge:
    """Connects ``src`` node's output port to ``dst`` node's input port.

    ``src == ROOT`` wires a graph root input; ``src_port`` is then the root index.
    """

    src: int
    src_port: int
    dst: int
    dst_port: int


@dataclass(frozen=True)
class CompressorGraph:
    roots: tuple[PortPattern, ...]
    nodes: tuple[GraphNode, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def build(
        cls,
        roots: Sequence[Union[PortPattern, StreamType]],
        nodes: Sequence[GraphNode],
        edges: Sequence[Edge],
    ) -> "CompressorGraph":
        norm = tuple(r if isinstance(r, PortPattern) else PortPattern.exact(r) for r in roots)
        return cls(norm, tuple(nodes), tuple(edges))


@dataclass(frozen=True)
class ResolvedNode:
    wire_id: int
    header: bytes
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]


@dataclass(frozen=True)
class ResolvedGraph:
    """Selector-free execution trace over a flat stream-id space.

    ``stream_types`` has one entry per stream id; entries may be None for
    graphs reconstructed from a frame, where intermediate types are only
    discovered during decoding.
    """

    root_types: tuple[StreamType, ...]
    nodes: tuple[ResolvedNode, ...]
    stream_types: tuple[Optional[StreamType], ...]
    leaves: tuple[int, ...]

    @property
    def stream_count(self) -> int:
        return len(self.stream_types)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def _node_label(index: int, node: GraphNode) -> str:
    if isinstance(node, CodecNode):
        return f"node {index} (codec {node.wire_id})"
    if isinstance(node, SelectorNode):
        return f"node {index} (selector {node.selector!r})"
    return f"node {index} (graph {node.name!r})"


def _input_port_count(node: GraphNode, in_degree: int, report: ValidationReport, label: str):
    """Declared input arity, or None when it cannot be determined."""
    from graphzip.codecs import registry as codec_registry

    if isinstance(node, CodecNode):
        spec = codec_registry.lookup(node.wire_id)
        if spec is None:
            report.add(f"{label}: unknown codec wire_id {node.wire_id}")
            return None
        if spec.variadic:
            if in_degree < 1:
                report.add(f"{label}: variadic codec needs at least one input")
                return None
            return in_degree
        return len(spec.inputs)
    if isinstance(node, SelectorNode):
        counts = {len(c.roots) for c in node.candidates}
        if not node.candidates:
            report.add(f"{label}: selector has no candidates")
            return None
        if len(counts) != 1:
            report.add(f"{label}: candidates disagree on root count {sorted(counts)}")
            return None
        return counts.pop()
    # Graph references accept whatever arrives; builders specialize on the
    # actual types at expansion time.
    return in_degree if in_degree >= 1 else None


def _port_pattern(node: GraphNode, port: int) -> Optional[PortPattern]:
    from graphzip.codecs import registry as codec_registry
    from graphzip.core.streams import ANY_STREAM

    if isinstance(node, CodecNode):
        spec = codec_registry.lookup(node.wire_id)
        if spec is None:
            return None
        if spec.variadic:
            return spec.inputs[0]
        return spec.inputs[port]
    if isinstance(node, SelectorNode):
        patterns = [c.roots[port] for c in node.candidates if port < len(c.roots)]
        if not patterns:
            return None
        kinds = frozenset().union(*(p.kinds for p in patterns))
        return PortPattern(kinds)
    return ANY_STREAM


def validate_graph(graph: CompressorGraph) -> ValidationReport:
    """Check structure and type compatibility; returns a report, never raises.

    Static typing is optimistic where a codec's output shape depends on data
    (an edge is flagged only when no concrete type could satisfy both ends);
    the engine re-checks actual types at execution time.
    """
    from graphzip.codecs import registry as codec_registry

    report = ValidationReport()
    n_nodes = len(graph.nodes)

    in_degree = [0] * n_nodes
    for e in graph.edges:
        if not (0 <= e.dst < n_nodes):
            report.add(f"edge {e}: destination node out of range")
            continue
        in_degree[e.dst] += 1

    # Per-port wiring: exactly one incoming edge per declared input port.
    seen_ports: dict[tuple[int, int], Edge] = {}
    arity: list[Optional[int]] = []
    for i, node in enumerate(graph.nodes):
        arity.append(_input_port_count(node, in_degree[i], report, _node_label(i, node)))

    for e in graph.edges:
        if not (0 <= e.dst < n_nodes):
            continue
        if e.src != ROOT and not (0 <= e.src < n_nodes):
            report.add(f"edge {e}: source node out of range")
            continue
        if e.src == ROOT and not (0 <= e.src_port < len(graph.roots)):
            report.add(f"edge {e}: root index out of range")
            continue
        if e.src != ROOT and isinstance(graph.nodes[e.src], (SelectorNode, GraphRefNode)):
            report.add(f"edge {e}: selector and graph nodes are sinks and have no output ports")
            continue
        key = (e.dst, e.dst_port)
        if key in seen_ports:
            report.add(f"edge {e}: input port already driven by {seen_ports[key]}")
        seen_ports[key] = e
        want = arity[e.dst]
        if want is not None and not (0 <= e.dst_port < want):
            report.add(f"edge {e}: {_node_label(e.dst, graph.nodes[e.dst])} has {want} input ports")

    for i, node in enumerate(graph.nodes):
        want = arity[i]
        if want is None:
            continue
        for port in range(want):
            if (i, port) not in seen_ports:
                report.add(f"{_node_label(i, node)}: input port {port} has no incoming edge")

    # Cycle check over node dependencies.
    deps: list[set[int]] = [set() for _ in range(n_nodes)]
    for e in graph.edges:
        if 0 <= e.dst < n_nodes and e.src != ROOT and 0 <= e.src < n_nodes:
            deps[e.dst].add(e.src)
    state = [0] * n_nodes  # 0 unvisited, 1 in progress, 2 done

    def visit(i: int) -> bool:
        if state[i] == 1:
            return False
        if state[i] == 2:
            return True
        state[i] = 1
        for d in deps[i]:
            if not visit(d):
                return False
        state[i] = 2
        return True

    for i in range(n_nodes):
        if not visit(i):
            report.add(f"cycle detected involving {_node_label(i, graph.nodes[i])}")
            break

    if not report.ok:
        return report

    # Type propagation in dependency order. Each node output is either a
    # concrete StreamType or a PortPattern when data-dependent.
    order = _node_order(graph)
    out_info: dict[tuple[int, int], Union[StreamType, PortPattern, None]] = {}

    def source_info(e: Edge) -> Union[StreamType, PortPattern, None]:
        if e.src == ROOT:
            pat = graph.roots[e.src_port]
            if len(pat.kinds) == 1 and pat.widths is not None and len(pat.widths) == 1:
                kind = next(iter(pat.kinds))
                return StreamType(kind, next(iter(pat.widths)))
            if len(pat.kinds) == 1 and pat.widths is None:
                kind = next(iter(pat.kinds))
                if kind.value in ("serial", "strings"):
                    return StreamType(kind)
            return pat
        return out_info.get((e.src, e.src_port))

    edge_by_port = {(e.dst, e.dst_port): e for e in graph.edges}
    for i in order:
        node = graph.nodes[i]
        label = _node_label(i, node)
        want = arity[i] or 0
        in_types: list[Optional[StreamType]] = []
        for port in range(want):
            e = edge_by_port.get((i, port))
            info = source_info(e) if e is not None else None
            target = _port_pattern(node, port)
            if info is None or target is None:
                in_types.append(None)
                continue
            if isinstance(info, StreamType):
                if not target.matches(info):
                    report.add(f"{label}: port {port} expects {target}, got {info}")
                in_types.append(info)
            else:
                if not info.intersects(target):
                    report.add(f"{label}: port {port} expects {target}, upstream produces {info}")
                in_types.append(None)
        if isinstance(node, CodecNode):
            spec = codec_registry.lookup(node.wire_id)
            if spec is None:
                continue
            try:
                inferred = spec.infer(tuple(in_types), node.params)
            except Exception as exc:  # inference mirrors encode preconditions
                report.add(f"{label}: {exc}")
                inferred = ()
            for port, info in enumerate(inferred):
                out_info[(i, port)] = info
        elif isinstance(node, SelectorNode):
            for cand in node.candidates:
                sub = validate_graph(cand)
                for v in sub.violations:
                    report.add(f"{label}: candidate: {v}")

    return report


def _node_order(graph: CompressorGraph) -> list[int]:
    deps: list[set[int]] = [set() for _ in graph.nodes]
    for e in graph.edges:
        if e.src != ROOT and 0 <= e.src < len(graph.nodes) and 0 <= e.dst < len(graph.nodes):
            deps[e.dst].add(e.src)
    remaining = dict(enumerate(deps))
    order: list[int] = []
    while remaining:
        ready = sorted(i for i, d in remaining.items() if not d)
        if not ready:
            break  # cycle; caller already reported
        for i in ready:
            order.append(i)
            del remaining[i]
        for d in remaining.values():
            d.difference_update(ready)
    return order


def validate_resolved(resolved: ResolvedGraph) -> ValidationReport:
    """Structural checks for a resolved trace (frame representability)."""
    report = ValidationReport()
    total = resolved.stream_count
    root_count = len(resolved.root_types)
    if total < root_count:
        report.add("stream table smaller than root count")
        return report
    for i, rt in enumerate(resolved.root_types):
        declared = resolved.stream_types[i]
        if declared is not None and declared != rt:
            report.add(f"stream {i}: root type {rt} disagrees with table entry {declared}")

    next_id = root_count
    consumed: set[int] = set()
    for idx, node in enumerate(resolved.nodes):
        for sid in node.inputs:
            if not (0 <= sid < next_id):
                report.add(f"node {idx}: input stream {sid} not yet produced")
            consumed.add(sid)
        if tuple(node.outputs) != tuple(range(next_id, next_id + len(node.outputs))):
            report.add(f"node {idx}: outputs {node.outputs} are not consecutive from {next_id}")
        next_id += len(node.outputs)
    if next_id != total:
        report.add(f"stream table has {total} entries, trace produces {next_id}")

    expected_leaves = tuple(i for i in range(total) if i not in consumed)
    if tuple(resolved.leaves) != expected_leaves:
        report.add(f"leaves {resolved.leaves} do not match unconsumed streams {expected_leaves}")
    return report


def topological_order(resolved: ResolvedGraph) -> list[int]:
    """Node indices in dependency order, ties broken by ascending index.

    Raises GraphError on cycles or self-loops (possible in hand-built traces).
    """
    producer: dict[int, int] = {}
    for idx, node in enumerate(resolved.nodes):
        for sid in node.outputs:
            if sid in producer:
                raise GraphError(f"stream {sid} produced twice")
            producer[sid] = idx

    deps: list[set[int]] = [set() for _ in resolved.nodes]
    for idx, node in enumerate(resolved.nodes):
        for sid in node.inputs:
            p = producer.get(sid)
            if p is not None:
                if p == idx:
                    raise GraphError(f"node {idx} consumes its own output stream {sid}")
                deps[idx].add(p)

    import heapq

    indegree = [len(d) for d in deps]
    children: list[list[int]] = [[] for _ in resolved.nodes]
    for idx, d in enumerate(deps):
        for p in d:
            children[p].append(idx)
    heap = [i for i, d in enumerate(indegree) if d == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for c in children[i]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != len(resolved.nodes):
        raise GraphError("cycle detected in resolved graph")
    return order
