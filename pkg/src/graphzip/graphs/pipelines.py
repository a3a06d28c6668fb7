"""Serializable transform pipelines.

A pipeline is the recipe a trained config stores for one stream (a column, a
cluster of columns, or a whole file): an ordered list of transform steps
followed by a terminal backend graph. ``apply_pipeline`` lowers a pipeline
onto a graph sketch, inserting the string-framing conversion when the first
step needs element boundaries and side-routing secondary outputs (e.g. a
token alphabet) to the general-purpose backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence

from graphzip.core.graph import CodecNode, GraphRefNode
from graphzip.core.streams import StreamKind, StreamType
from graphzip.errors import ConfigError
from graphzip.graphs.sketch import GraphSketch, Src

W_TOKENIZE = 12
W_PARSE_INT = 17
W_DELTA = 10
W_ZIGZAG = 11
W_TRANSPOSE = 13
W_SERIAL_TO_STRINGS = 22

TERMINALS = ("entropy", "lz", "store", "compress")

# Steps admissible for a stream of each kind. Serial streams carry no element
# structure to exploit, so they go straight to a terminal.
STEPS_BY_KIND: dict[StreamKind, tuple[str, ...]] = {
    StreamKind.STRINGS: ("parse_int", "tokenize"),
    StreamKind.NUMERIC: ("delta", "zigzag"),
    StreamKind.RECORD: ("tokenize", "transpose"),
    StreamKind.SERIAL: (),
}

_STEP_NAMES = frozenset({"parse_int", "tokenize", "delta", "zigzag", "transpose"})


@dataclass(frozen=True)
class Pipeline:
    """Transform steps applied in order, then a terminal backend graph."""

    steps: tuple[str, ...] = ()
    terminal: str = "entropy"

    def __post_init__(self) -> None:
        for step in self.steps:
            if step not in _STEP_NAMES:
                raise ConfigError(f"unknown pipeline step {step!r}")
        if self.terminal not in TERMINALS:
            raise ConfigError(f"unknown pipeline terminal {self.terminal!r}")

    def to_doc(self) -> dict[str, Any]:
        return {"steps": list(self.steps), "terminal": self.terminal}

    @classmethod
    def from_doc(cls, doc: Any) -> "Pipeline":
        if not isinstance(doc, Mapping) or set(doc) - {"steps", "terminal"}:
            raise ConfigError(f"pipeline document must have steps/terminal, got {doc!r}")
        steps = doc.get("steps", [])
        if not isinstance(steps, Sequence) or isinstance(steps, (str, bytes)):
            raise ConfigError("pipeline steps must be a list of step names")
        if not all(isinstance(s, str) for s in steps):
            raise ConfigError("pipeline steps must be strings")
        terminal = doc.get("terminal", "entropy")
        if not isinstance(terminal, str):
            raise ConfigError("pipeline terminal must be a string")
        return cls(tuple(steps), terminal)


def steps_for(kind: StreamKind) -> tuple[str, ...]:
    return STEPS_BY_KIND[kind]


def _side_route(sk: GraphSketch, src: Src) -> None:
    sk.add(GraphRefNode("compress"), src)


def apply_pipeline(
    sk: GraphSketch,
    src: Src,
    src_type: StreamType,
    pipeline: Pipeline,
    *,
    lengths: Optional[Sequence[int]] = None,
) -> None:
    """Lower ``pipeline`` onto the sketch starting from ``src``.

    ``lengths`` supplies element boundaries when ``src`` is a serial stream
    whose first step needs strings (the framing conversion is inserted then,
    and only then).
    """
    cur: Src = src
    kind: StreamKind = src_type.kind
    for step in pipeline.steps:
        if kind is StreamKind.SERIAL and step in ("parse_int", "tokenize"):
            if lengths is None:
                raise ConfigError(f"step {step!r} needs string boundaries, none available")
            node = sk.add(
                CodecNode(W_SERIAL_TO_STRINGS, {"lengths": [int(l) for l in lengths]}),
                cur,
            )
            cur, kind = sk.out(node), StreamKind.STRINGS

        if step == "parse_int":
            if kind is not StreamKind.STRINGS:
                raise ConfigError(f"parse_int cannot apply to a {kind.name.lower()} stream")
            node = sk.add(CodecNode(W_PARSE_INT), cur)
            cur, kind = sk.out(node), StreamKind.NUMERIC
        elif step == "tokenize":
            if kind not in (StreamKind.STRINGS, StreamKind.RECORD):
                raise ConfigError(f"tokenize cannot apply to a {kind.name.lower()} stream")
            node = sk.add(CodecNode(W_TOKENIZE), cur)
            _side_route(sk, sk.out(node, 0))  # alphabet
            cur, kind = sk.out(node, 1), StreamKind.NUMERIC  # indices
        elif step in ("delta", "zigzag"):
            if kind is not StreamKind.NUMERIC:
                raise ConfigError(f"{step} cannot apply to a {kind.name.lower()} stream")
            node = sk.add(CodecNode(W_DELTA if step == "delta" else W_ZIGZAG), cur)
            cur = sk.out(node)
        elif step == "transpose":
            if kind is not StreamKind.RECORD:
                raise ConfigError(f"transpose cannot apply to a {kind.name.lower()} stream")
            node = sk.add(CodecNode(W_TRANSPOSE), cur)
            cur = sk.out(node)
        else:  # pragma: no cover - Pipeline validation rejects unknown steps
            raise ConfigError(f"unknown pipeline step {step!r}")

    sk.add(GraphRefNode(pipeline.terminal), cur)
