"""graphzip: graph-structured lossless compression with self-describing frames.

Compression composes small invertible codecs into a DAG; the resolved DAG and
its leaf streams are serialized into a frame that any build of the decoder can
replay in reverse without configs, profiles, or trained artifacts.
"""

from __future__ import annotations

from typing import Optional

from graphzip.core.engine import Budget, compress as compress_graph, decompress_resolved
from graphzip.core.streams import TypedStream
from graphzip.errors import (
    BudgetExceededError,
    ChecksumMismatchError,
    CodecError,
    ConfigError,
    CsvError,
    FrameError,
    GraphError,
    GraphzipError,
    LimitExceededError,
    MalformedFrameError,
    SddlError,
    StreamError,
    TrainingError,
    UnknownCodecError,
    UnsupportedVersionError,
)
from graphzip.format import DecodeLimits, FrameInfo, inspect_frame, read_frame, write_frame
from graphzip.graphs.config import CompressorConfig

__version__ = "0.1.0"


def compress(
    data: bytes,
    config: Optional[CompressorConfig] = None,
    *,
    budget: Optional[Budget] = None,
    checksum: bool = True,
) -> bytes:
    """Compress a byte string into a self-describing frame.

    ``config`` selects the ingestion profile or a custom entry graph; the
    default is the raw profile (generic byte compression).
    """
    from graphzip.frontends import build_input_graph

    config = config or CompressorConfig(profile="raw")
    roots = [TypedStream.serial(data)]
    graph = build_input_graph(config, bytes(data))
    resolved, leaves = compress_graph(graph, roots, budget=budget)
    return write_frame(resolved, leaves, checksum_of=roots if checksum else None)


def decompress(frame: bytes, *, limits: Optional[DecodeLimits] = None) -> bytes:
    """Decode a frame produced by any graphzip build back into its bytes.

    Frames carry their own decode recipe, so no config is needed. Frames with
    several root streams decode to the roots' contents concatenated in order.
    """
    roots = read_frame(frame, limits=limits)
    return b"".join(stream.content for stream in roots)


__all__ = [
    "__version__",
    "compress",
    "decompress",
    "Budget",
    "DecodeLimits",
    "CompressorConfig",
    "FrameInfo",
    "TypedStream",
    "compress_graph",
    "decompress_resolved",
    "inspect_frame",
    "read_frame",
    "write_frame",
    "GraphzipError",
    "StreamError",
    "GraphError",
    "CodecError",
    "UnknownCodecError",
    "BudgetExceededError",
    "FrameError",
    "MalformedFrameError",
    "ChecksumMismatchError",
    "LimitExceededError",
    "UnsupportedVersionError",
    "ConfigError",
    "SddlError",
    "CsvError",
    "TrainingError",
]
