"""Core data model: typed streams, compressor graphs, and the execution engine."""

from graphzip.core.streams import (
    StreamKind,
    StreamType,
    TypedStream,
    PortPattern,
    SERIAL,
    RECORD,
    NUMERIC,
    STRINGS,
)
from graphzip.core.graph import (
    CodecNode,
    SelectorNode,
    GraphRefNode,
    Edge,
    CompressorGraph,
    ResolvedNode,
    ResolvedGraph,
    ValidationReport,
    validate_graph,
    validate_resolved,
    topological_order,
)
from graphzip.core.engine import Budget, compress, decompress_resolved

__all__ = [
    "StreamKind",
    "StreamType",
    "TypedStream",
    "PortPattern",
    "SERIAL",
    "RECORD",
    "NUMERIC",
    "STRINGS",
    "CodecNode",
    "SelectorNode",
    "GraphRefNode",
    "Edge",
    "CompressorGraph",
    "ResolvedNode",
    "ResolvedGraph",
    "ValidationReport",
    "validate_graph",
    "validate_resolved",
    "topological_order",
    "Budget",
    "compress",
    "decompress_resolved",
]
