"""Compress-time selectors.

A selector is a pure function from (input streams, params, candidate graphs)
to a candidate index. The engine splices the chosen candidate into the trace;
nothing about the choice is recorded in the frame, which is what keeps
decoding universal.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

import numpy as np

from graphzip.core.graph import CompressorGraph
from graphzip.core.streams import StreamKind, TypedStream
from graphzip.errors import GraphError, GraphzipError
from graphzip.graphs.measure import trial_compress

SelectorFn = Callable[[Sequence[TypedStream], Mapping, tuple[CompressorGraph, ...]], int]

_SELECTORS: dict[str, SelectorFn] = {}


def register_selector(name: str, fn: SelectorFn) -> None:
    if name in _SELECTORS:
        raise GraphError(f"selector {name!r} already registered")
    _SELECTORS[name] = fn


def get_selector(name: str) -> SelectorFn:
    fn = _SELECTORS.get(name)
    if fn is None:
        raise GraphError(f"unknown selector {name!r}")
    return fn


def selector_names() -> tuple[str, ...]:
    return tuple(sorted(_SELECTORS))


def min_cost(
    inputs: Sequence[TypedStream],
    params: Mapping,
    candidates: tuple[CompressorGraph, ...],
) -> int:
    """Trial-compress every candidate and keep the smallest framed size.

    A candidate that fails (codec precondition, budget) is disqualified
    rather than fatal; ties keep the earliest candidate, so orderings that
    put the plainest graph first stay deterministic.
    """
    best_cost = None
    best_idx = None
    for i, cand in enumerate(candidates):
        try:
            _, _, cost = trial_compress(cand, inputs)
        except GraphzipError:
            continue
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_idx = i
    if best_idx is None:
        raise GraphError("no selector candidate accepts the input streams")
    return best_idx


DEFAULT_TOKEN_RATIO = 0.125  # distinct/total at or below this favors a dictionary


def record_route(
    inputs: Sequence[TypedStream],
    params: Mapping,
    candidates: tuple[CompressorGraph, ...],
) -> int:
    """Route a record stream: candidate 0 unless the element alphabet is small.

    When distinct/total is at or below ``max_token_ratio`` the stream is
    plausibly dictionary-coded, so all candidates are measured and the
    cheapest wins; otherwise candidate 0 is taken without measuring.
    """
    if len(inputs) != 1:
        raise GraphError(f"record_route takes one input stream, got {len(inputs)}")
    stream = inputs[0]
    if stream.stype.kind is not StreamKind.RECORD:
        raise GraphError(f"record_route needs a record stream, got {stream.stype}")
    if stream.element_count == 0:
        return 0
    width = stream.stype.width
    arr = np.frombuffer(stream.content, dtype=np.uint8).reshape(stream.element_count, width)
    distinct = len(np.unique(arr.view([("", np.uint8)] * width)))
    limit = float(params.get("max_token_ratio", DEFAULT_TOKEN_RATIO))
    if distinct / stream.element_count <= limit:
        return min_cost(inputs, params, candidates)
    return 0


register_selector("min_cost", min_cost)
register_selector("record_route", record_route)
