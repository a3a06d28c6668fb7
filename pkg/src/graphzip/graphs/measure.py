"""Cost measurement: how many bytes a trace costs once framed.

Selectors and the trainer both rank alternatives by the exact serialized
frame size, so every tie-break and every reported gain refers to real
output bytes rather than an estimate.
"""

from __future__ import annotations

from typing import Optional, Sequence

from graphzip.core.engine import Budget, compress
from graphzip.core.graph import CompressorGraph, ResolvedGraph
from graphzip.core.streams import TypedStream
from graphzip.format.frame import write_frame


def encoded_size(resolved: ResolvedGraph, leaves: Sequence[TypedStream]) -> int:
    """Exact frame size in bytes for a resolved trace (no checksum)."""
    return len(write_frame(resolved, leaves))


def trial_compress(
    graph: CompressorGraph,
    inputs: Sequence[TypedStream],
    budget: Optional[Budget] = None,
) -> tuple[ResolvedGraph, tuple[TypedStream, ...], int]:
    """Compress and measure in one step; raises like ``compress`` does."""
    resolved, leaves = compress(graph, inputs, budget)
    return resolved, leaves, encoded_size(resolved, leaves)
