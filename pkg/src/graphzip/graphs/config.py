"""Compressor configs: the serializable description of how to compress.

A config names either a frontend profile (with its parameters) or an explicit
set of named graphs plus an entry point. Configs are canonical JSON — sorted
keys, two-space indent, trailing newline — so that equal configurations are
equal bytes, and they are capped at 64 KiB so a trained artifact stays a
deployable description rather than a data dump. Decompression never needs a
config; frames are self-describing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from graphzip.core.graph import (
    CodecNode,
    CompressorGraph,
    Edge,
    GraphNode,
    GraphRefNode,
    SelectorNode,
    validate_graph,
)
from graphzip.core.streams import PortPattern, StreamKind
from graphzip.errors import ConfigError

CONFIG_VERSION = 1
MAX_CONFIG_BYTES = 64 * 1024
CONFIG_SUFFIX = ".gmc.json"


def canonical_json(obj: Any) -> str:
    """The one true JSON shape: sorted keys, 2-space indent, final newline."""
    try:
        return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config is not JSON-serializable: {exc}") from exc


# -- graph documents ----------------------------------------------------------


def _pattern_to_doc(pattern: PortPattern) -> dict:
    doc: dict[str, Any] = {"kinds": sorted(k.value for k in pattern.kinds)}
    doc["widths"] = sorted(pattern.widths) if pattern.widths is not None else None
    return doc


def _pattern_from_doc(doc: Any) -> PortPattern:
    if not isinstance(doc, dict) or set(doc) - {"kinds", "widths"}:
        raise ConfigError(f"bad root pattern {doc!r}")
    kinds = doc.get("kinds")
    if not isinstance(kinds, list) or not kinds:
        raise ConfigError("root pattern needs a non-empty 'kinds' list")
    try:
        kind_set = frozenset(StreamKind(k) for k in kinds)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    widths = doc.get("widths")
    if widths is not None:
        if not isinstance(widths, list) or not all(isinstance(w, int) and w >= 1 for w in widths):
            raise ConfigError("root pattern widths must be positive integers")
        widths = frozenset(widths)
    return PortPattern(kind_set, widths)


def _params_to_doc(params: Mapping) -> dict:
    return {str(k): v for k, v in params.items()}


def _node_to_doc(node: GraphNode) -> dict:
    from graphzip.codecs import registry

    if isinstance(node, CodecNode):
        return {"codec": registry.get(node.wire_id).name, "params": _params_to_doc(node.params)}
    if isinstance(node, SelectorNode):
        return {
            "selector": node.selector,
            "params": _params_to_doc(node.params),
            "candidates": [graph_to_doc(c) for c in node.candidates],
        }
    return {"graph": node.name, "params": _params_to_doc(node.params)}


def _node_from_doc(doc: Any) -> GraphNode:
    from graphzip.codecs import registry

    if not isinstance(doc, dict):
        raise ConfigError(f"graph node must be an object, got {doc!r}")
    keys = set(doc)
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("node params must be an object")
    if "codec" in keys:
        if keys - {"codec", "params"}:
            raise ConfigError(f"unknown keys in codec node: {sorted(keys - {'codec', 'params'})}")
        try:
            spec = registry.by_name(doc["codec"])
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        return CodecNode(spec.wire_id, params)
    if "selector" in keys:
        if keys - {"selector", "params", "candidates"}:
            raise ConfigError("unknown keys in selector node")
        cands = doc.get("candidates")
        if not isinstance(cands, list) or not cands:
            raise ConfigError("selector node needs a non-empty 'candidates' list")
        return SelectorNode(str(doc["selector"]), tuple(graph_from_doc(c) for c in cands), params)
    if "graph" in keys:
        if keys - {"graph", "params"}:
            raise ConfigError("unknown keys in graph-reference node")
        return GraphRefNode(str(doc["graph"]), params)
    raise ConfigError(f"graph node needs one of 'codec', 'selector', 'graph': {sorted(keys)}")


def graph_to_doc(graph: CompressorGraph) -> dict:
    return {
        "roots": [_pattern_to_doc(p) for p in graph.roots],
        "nodes": [_node_to_doc(n) for n in graph.nodes],
        "edges": [[e.src, e.src_port, e.dst, e.dst_port] for e in graph.edges],
    }


def _check_refs(name: str, graph: CompressorGraph) -> None:
    """Reject graph references that no registered builder can resolve."""
    from graphzip.graphs.standard import builder_names

    known = set(builder_names())
    stack = list(graph.nodes)
    while stack:
        node = stack.pop()
        if isinstance(node, GraphRefNode) and node.name not in known:
            raise ConfigError(f"graph {name!r} references undefined graph {node.name!r}")
        if isinstance(node, SelectorNode):
            for cand in node.candidates:
                stack.extend(cand.nodes)


def graph_from_doc(doc: Any) -> CompressorGraph:
    if not isinstance(doc, dict) or set(doc) - {"roots", "nodes", "edges"}:
        raise ConfigError(f"bad graph document: {doc!r}")
    roots = doc.get("roots")
    nodes = doc.get("nodes", [])
    edges = doc.get("edges", [])
    if not isinstance(roots, list) or not roots:
        raise ConfigError("graph document needs a non-empty 'roots' list")
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise ConfigError("graph 'nodes' and 'edges' must be lists")
    parsed_edges = []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 4 and all(isinstance(v, int) for v in e)):
            raise ConfigError(f"edge must be [src, src_port, dst, dst_port], got {e!r}")
        parsed_edges.append(Edge(*e))
    return CompressorGraph.build(
        [_pattern_from_doc(r) for r in roots],
        [_node_from_doc(n) for n in nodes],
        parsed_edges,
    )


# -- configs ------------------------------------------------------------------


@dataclass(frozen=True)
class CompressorConfig:
    """Either a profile (name + params) or explicit graphs with an entry."""

    profile: Optional[str] = None
    profile_params: Mapping = field(default_factory=dict)
    graphs: Optional[Mapping[str, CompressorGraph]] = None
    entry: Optional[str] = None

    def __post_init__(self) -> None:
        has_profile = self.profile is not None
        has_graphs = self.graphs is not None or self.entry is not None
        if has_profile == has_graphs:
            raise ConfigError("config needs exactly one of 'profile' or 'graphs'+'entry'")
        if has_graphs:
            if not self.graphs or self.entry is None:
                raise ConfigError("graph configs need both 'graphs' and 'entry'")
            if self.entry not in self.graphs:
                raise ConfigError(f"entry {self.entry!r} is not among graphs {sorted(self.graphs)}")

    def entry_graph(self) -> CompressorGraph:
        if self.graphs is None:
            raise ConfigError(f"profile config {self.profile!r} has no explicit graphs")
        return self.graphs[self.entry]

    def to_doc(self) -> dict:
        doc: dict[str, Any] = {"config_version": CONFIG_VERSION}
        if self.profile is not None:
            doc["profile"] = self.profile
            doc["profile_params"] = _params_to_doc(self.profile_params)
        else:
            doc["entry"] = self.entry
            doc["graphs"] = {name: graph_to_doc(g) for name, g in self.graphs.items()}
        return doc

    def to_json(self) -> str:
        text = canonical_json(self.to_doc())
        if len(text.encode("utf-8")) > MAX_CONFIG_BYTES:
            raise ConfigError(
                f"config serializes to {len(text.encode('utf-8'))} bytes, cap is {MAX_CONFIG_BYTES}"
            )
        return text

    @classmethod
    def from_doc(cls, doc: Any) -> "CompressorConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        version = doc.get("config_version")
        if version != CONFIG_VERSION:
            raise ConfigError(f"unsupported config_version {version!r}, want {CONFIG_VERSION}")
        allowed = {"config_version", "profile", "profile_params", "entry", "graphs"}
        if set(doc) - allowed:
            raise ConfigError(f"unknown config keys {sorted(set(doc) - allowed)}")
        if "profile" in doc:
            if "graphs" in doc or "entry" in doc:
                raise ConfigError("config cannot mix 'profile' with 'graphs'/'entry'")
            params = doc.get("profile_params", {})
            if not isinstance(params, dict):
                raise ConfigError("profile_params must be an object")
            return cls(profile=str(doc["profile"]), profile_params=params)
        graphs_doc = doc.get("graphs")
        if not isinstance(graphs_doc, dict) or not graphs_doc:
            raise ConfigError("config needs a non-empty 'graphs' object")
        graphs = {}
        for name, gdoc in graphs_doc.items():
            graph = graph_from_doc(gdoc)
            report = validate_graph(graph)
            if not report.ok:
                raise ConfigError(f"graph {name!r} is invalid: " + "; ".join(report.violations))
            _check_refs(name, graph)
            graphs[name] = graph
        entry = doc.get("entry")
        if not isinstance(entry, str):
            raise ConfigError("config needs a string 'entry'")
        return cls(graphs=graphs, entry=entry)

    @classmethod
    def from_json(cls, text: str) -> "CompressorConfig":
        if len(text.encode("utf-8")) > MAX_CONFIG_BYTES:
            raise ConfigError(f"config is {len(text.encode('utf-8'))} bytes, cap is {MAX_CONFIG_BYTES}")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_doc(doc)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path) -> "CompressorConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())
