"""Ingestion profiles: from raw file bytes to a concrete compression graph.

A profile inspects the input (parsing CSV structure, executing a data
description, or just reinterpreting fixed-width values) and emits a
selector-free front section wired into the standard backend graphs. The
decoder never needs any of this — the emitted frame is self-describing.
"""

from __future__ import annotations

from typing import Any, Mapping, Optional, Sequence

from graphzip.core.graph import CodecNode, CompressorGraph, GraphRefNode
from graphzip.core.streams import NUMERIC, SERIAL, StreamKind
from graphzip.errors import ConfigError, CsvError
from graphzip.frontends.csv import (
    ROUTE_PARSE_INT,
    ROUTE_TOKENIZE,
    CsvDialect,
    CsvParse,
    column_type_probe,
    csv_parse,
)
from graphzip.graphs.config import CompressorConfig
from graphzip.graphs.pipelines import Pipeline, apply_pipeline
from graphzip.graphs.sketch import GraphSketch, Src

W_SERIAL_TO_NUMERIC_LE = 3
W_SERIAL_TO_NUMERIC_BE = 4
W_DISPATCH = 7
W_CONCAT = 9
W_FLOAT_DECONSTRUCT = 18

MAX_DISPATCH_TARGETS = 256
NUMERIC_WIDTHS = (1, 2, 4, 8)

PROFILE_NAMES = ("raw", "csv", "numeric-le", "numeric-be", "f32", "sddl")


def parse_profile(name: str) -> tuple[str, Optional[int]]:
    """Split a profile name into (base, width); validates both."""
    base, sep, arg = name.partition(":")
    if base not in PROFILE_NAMES:
        raise ConfigError(f"unknown profile {name!r}")
    if base in ("numeric-le", "numeric-be"):
        if not sep:
            raise ConfigError(f"profile {base!r} needs an element width, e.g. {base}:4")
        try:
            width = int(arg)
        except ValueError:
            width = -1
        if width not in NUMERIC_WIDTHS:
            raise ConfigError(f"profile width must be one of {NUMERIC_WIDTHS}, got {arg!r}")
        return base, width
    if sep:
        raise ConfigError(f"profile {base!r} takes no argument")
    return base, None


def _compress_ref(sk: GraphSketch, src: Src) -> None:
    sk.add(GraphRefNode("compress"), src)


def _params_pipeline(params: Mapping[str, Any]) -> Pipeline:
    """Trained backend pipeline, defaulting to the general-purpose graph."""
    if "pipeline" in params:
        return Pipeline.from_doc(params["pipeline"])
    return Pipeline((), "compress")


def _raw_graph(params: Mapping[str, Any]) -> CompressorGraph:
    sk = GraphSketch()
    root = sk.add_root(SERIAL)
    apply_pipeline(sk, root, SERIAL, _params_pipeline(params))
    return sk.build()


def _numeric_graph(width: int, big_endian: bool, params: Mapping[str, Any]) -> CompressorGraph:
    sk = GraphSketch()
    root = sk.add_root(SERIAL)
    wire = W_SERIAL_TO_NUMERIC_BE if big_endian else W_SERIAL_TO_NUMERIC_LE
    node = sk.add(CodecNode(wire, {"width": width}), root)
    apply_pipeline(sk, sk.out(node), NUMERIC(width), _params_pipeline(params))
    return sk.build()


def _f32_graph() -> CompressorGraph:
    sk = GraphSketch()
    root = sk.add_root(SERIAL)
    values = sk.add(CodecNode(W_SERIAL_TO_NUMERIC_LE, {"width": 4}), root)
    planes = sk.add(CodecNode(W_FLOAT_DECONSTRUCT), sk.out(values))
    for port in range(3):  # signs, exponents, mantissas
        _compress_ref(sk, sk.out(planes, port))
    return sk.build()


def _sddl_graph(params: Mapping[str, Any], data: bytes) -> CompressorGraph:
    from graphzip.sddl import compile_description, execute

    text = params.get("description")
    if not isinstance(text, str):
        raise ConfigError("sddl profile needs a 'description' string in profile_params")
    program = compile_description(text)
    instructions = execute(program, data)

    sk = GraphSketch()
    root = sk.add_root(SERIAL)
    dests = program.destinations
    disp = sk.add(
        CodecNode(W_DISPATCH, {"n": len(dests), "instructions": [list(i) for i in instructions]}),
        root,
    )
    for i, dest in enumerate(dests):
        src = sk.out(disp, i)
        if dest.stype.kind is StreamKind.NUMERIC:
            wire = W_SERIAL_TO_NUMERIC_BE if dest.endian == "be" else W_SERIAL_TO_NUMERIC_LE
            node = sk.add(CodecNode(wire, {"width": dest.stype.width}), src)
            src = sk.out(node)
            if dest.is_float and dest.stype.width == 4:
                planes = sk.add(CodecNode(W_FLOAT_DECONSTRUCT), src)
                for port in range(3):
                    _compress_ref(sk, sk.out(planes, port))
                continue
        _compress_ref(sk, src)
    _compress_ref(sk, sk.out(disp, len(dests)))  # routing targets
    _compress_ref(sk, sk.out(disp, len(dests) + 1))  # run lengths
    return sk.build()


def _probe_pipeline(cells: Sequence[bytes]) -> Pipeline:
    route = column_type_probe(tuple(cells))
    if route == ROUTE_PARSE_INT:
        return Pipeline(("parse_int",), "compress")
    if route == ROUTE_TOKENIZE:
        return Pipeline(("tokenize",), "compress")
    return Pipeline((), "compress")


def _csv_trained_plan(
    params: Mapping[str, Any], tags: Sequence[str]
) -> tuple[dict[str, Pipeline], list[tuple[list[str], Pipeline]]]:
    """Extract per-column and per-cluster pipelines that apply to this input.

    Config entries naming columns absent from the input are ignored; input
    columns with no entry fall back to the probed default route.
    """
    present = set(tags)
    columns_doc = params.get("columns", {})
    if not isinstance(columns_doc, Mapping):
        raise ConfigError("csv profile_params 'columns' must map tag -> pipeline")
    singles = {
        tag: Pipeline.from_doc(doc) for tag, doc in columns_doc.items() if tag in present
    }

    clusters_doc = params.get("clusters", [])
    if not isinstance(clusters_doc, Sequence) or isinstance(clusters_doc, (str, bytes)):
        raise ConfigError("csv profile_params 'clusters' must be a list")
    clusters: list[tuple[list[str], Pipeline]] = []
    claimed: set[str] = set(singles)
    for entry in clusters_doc:
        if not isinstance(entry, Mapping) or set(entry) - {"columns", "pipeline"}:
            raise ConfigError(f"cluster entry must have columns/pipeline, got {entry!r}")
        member_tags = entry.get("columns")
        if not isinstance(member_tags, Sequence) or isinstance(member_tags, (str, bytes)):
            raise ConfigError("cluster 'columns' must be a list of tags")
        pipeline = Pipeline.from_doc(entry.get("pipeline"))
        members = sorted(t for t in member_tags if t in present)
        for tag in members:
            if tag in claimed:
                raise ConfigError(f"column {tag!r} assigned to more than one pipeline")
            claimed.add(tag)
        if len(members) >= 2:
            clusters.append((members, pipeline))
        elif members:
            singles[members[0]] = pipeline
    return singles, clusters


def _csv_graph(params: Mapping[str, Any], data: bytes) -> CompressorGraph:
    dialect = (
        CsvDialect.from_doc(params["dialect"]) if "dialect" in params else CsvDialect()
    )
    parse: CsvParse = csv_parse(data, dialect)
    k = parse.column_count
    if k + 1 > MAX_DISPATCH_TARGETS:
        raise CsvError(f"too many columns to route ({k}; limit {MAX_DISPATCH_TARGETS - 1})")

    tags = [c.tag for c in parse.columns]
    singles, clusters = _csv_trained_plan(params, tags)

    sk = GraphSketch()
    root = sk.add_root(SERIAL)
    disp = sk.add(
        CodecNode(
            W_DISPATCH,
            {"n": k + 1, "instructions": [list(i) for i in parse.instructions]},
        ),
        root,
    )
    index_of = {tag: i for i, tag in enumerate(tags)}
    clustered = {tag for members, _ in clusters for tag in members}

    for i, column in enumerate(parse.columns):
        if column.tag in clustered:
            continue
        pipeline = singles.get(column.tag) or _probe_pipeline(column.cells)
        apply_pipeline(
            sk,
            sk.out(disp, i),
            SERIAL,
            pipeline,
            lengths=parse.cell_lengths[i],
        )

    for members, pipeline in clusters:
        sources = [sk.out(disp, index_of[tag]) for tag in members]
        joined = sk.add(CodecNode(W_CONCAT), *sources)
        _compress_ref(sk, sk.out(joined, 1))  # member byte counts
        combined: list[int] = []
        for tag in members:
            combined.extend(parse.cell_lengths[index_of[tag]])
        apply_pipeline(sk, sk.out(joined, 0), SERIAL, pipeline, lengths=combined)

    _compress_ref(sk, sk.out(disp, k))  # framing bytes
    _compress_ref(sk, sk.out(disp, k + 1))  # routing targets
    _compress_ref(sk, sk.out(disp, k + 2))  # run lengths
    return sk.build()


def build_input_graph(config: CompressorConfig, data: bytes) -> CompressorGraph:
    """Build the concrete single-root graph this config prescribes for data."""
    if config.graphs is not None:
        graph = config.entry_graph()
        if len(graph.roots) != 1 or not graph.roots[0].matches(SERIAL):
            raise ConfigError("entry graph must accept exactly one serial root")
        return graph

    base, width = parse_profile(config.profile)
    params = config.profile_params
    if base == "raw":
        return _raw_graph(params)
    if base == "csv":
        return _csv_graph(params, data)
    if base == "numeric-le":
        return _numeric_graph(width, big_endian=False, params=params)
    if base == "numeric-be":
        return _numeric_graph(width, big_endian=True, params=params)
    if base == "f32":
        return _f32_graph()
    if base == "sddl":
        return _sddl_graph(params, data)
    raise ConfigError(f"unknown profile {config.profile!r}")  # pragma: no cover
