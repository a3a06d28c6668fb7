"""Incremental graph assembly.

Building a CompressorGraph by hand means tracking node indices and port
numbers; GraphSketch keeps that bookkeeping in one place. Sources are
(node_index, output_port) pairs, with ROOT as the node index for root inputs.
"""

from __future__ import annotations

from typing import Union

from graphzip.core.graph import ROOT, CompressorGraph, Edge, GraphNode
from graphzip.core.streams import PortPattern, StreamType

Src = tuple[int, int]  # (node index or ROOT, output port or root index)


class GraphSketch:
    def __init__(self) -> None:
        self.roots: list[PortPattern] = []
        self.nodes: list[GraphNode] = []
        self.edges: list[Edge] = []

    def add_root(self, shape: Union[PortPattern, StreamType]) -> Src:
        pattern = shape if isinstance(shape, PortPattern) else PortPattern.exact(shape)
        self.roots.append(pattern)
        return (ROOT, len(self.roots) - 1)

    def add(self, node: GraphNode, *sources: Src) -> int:
        """Append a node wired from the given sources; returns its index."""
        idx = len(self.nodes)
        self.nodes.append(node)
        for port, (src, src_port) in enumerate(sources):
            self.edges.append(Edge(src, src_port, idx, port))
        return idx

    def out(self, node_index: int, port: int = 0) -> Src:
        return (node_index, port)

    def build(self) -> CompressorGraph:
        return CompressorGraph.build(self.roots, self.nodes, self.edges)
