"""Candidate space for offline training.

A CandidateSet bounds the pipelines the trainer may propose: which transform
steps are admissible for each stream kind, how deep a chain may grow, and
which terminal backends close a pipeline. Cost weights are static per-codec
scores used for the secondary (speed-proxy) axis of the Pareto set, keeping
training runs wall-clock free and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from graphzip.core.streams import StreamKind
from graphzip.errors import TrainingError
from graphzip.graphs.pipelines import STEPS_BY_KIND, TERMINALS, Pipeline

# Terminals the trainer searches over. "compress" is expressible in configs
# but is itself a searching graph, so offering it to the trainer would nest
# search inside search for no gain.
TRAIN_TERMINALS = ("entropy", "lz", "store")

# Static per-step/per-terminal cost scores (speed proxy, higher = slower).
COST_WEIGHTS: Mapping[str, int] = {
    "parse_int": 2,
    "tokenize": 3,
    "delta": 1,
    "zigzag": 1,
    "transpose": 1,
    "entropy": 2,
    "lz": 4,
    "store": 0,
    "compress": 5,
}

# How many candidate pipelines the exhaustive pass may evaluate before the
# explorer falls back to the seeded genetic search.
DEFAULT_ENUMERATION_LIMIT = 512


def _default_steps() -> dict[StreamKind, tuple[str, ...]]:
    return dict(STEPS_BY_KIND)


@dataclass(frozen=True)
class CandidateSet:
    steps_by_kind: Mapping[StreamKind, tuple[str, ...]] = field(default_factory=_default_steps)
    depth: int = 3
    terminals: tuple[str, ...] = TRAIN_TERMINALS
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise TrainingError(f"pipeline depth must be >= 0, got {self.depth}")
        if not self.terminals:
            raise TrainingError("candidate set needs at least one terminal")
        for terminal in self.terminals:
            if terminal not in TERMINALS:
                raise TrainingError(f"unknown terminal {terminal!r}")
        known_steps = {step for steps in STEPS_BY_KIND.values() for step in steps}
        for steps in self.steps_by_kind.values():
            for step in steps:
                if step not in known_steps:
                    raise TrainingError(f"unknown step {step!r}")
        if self.enumeration_limit < 1:
            raise TrainingError("enumeration limit must be positive")

    def steps_for(self, kind: StreamKind) -> tuple[str, ...]:
        return tuple(self.steps_by_kind.get(kind, ()))


def pipeline_cost(pipeline: Pipeline) -> int:
    """Static cost score: sum of step weights plus the terminal weight."""
    return sum(COST_WEIGHTS[s] for s in pipeline.steps) + COST_WEIGHTS[pipeline.terminal]
