"""Backend exploration: find the best pipeline for one group of streams.

The explorer enumerates every type-correct pipeline up to the candidate
depth and measures each by total framed size over the sample streams. When
the candidate space exceeds the enumeration limit it switches to a seeded
genetic search (population 32, generations 20, fixed seed) so results stay
deterministic. Either way the full ranking is returned, plus the Pareto set
over (size, static cost score) so callers can trade size against speed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from graphzip.core.streams import SERIAL, StreamKind, TypedStream
from graphzip.errors import GraphzipError, TrainingError
from graphzip.graphs.measure import trial_compress
from graphzip.graphs.pipelines import Pipeline, apply_pipeline
from graphzip.graphs.sketch import GraphSketch
from graphzip.trainer.candidates import CandidateSet, pipeline_cost

GA_SEED = 0x6A5EED
GA_POPULATION = 32
GA_GENERATIONS = 20


@dataclass(frozen=True)
class RankedPipeline:
    pipeline: Pipeline
    size: int  # total framed bytes over the samples
    cost: int  # static cost score


@dataclass(frozen=True)
class ExplorationResult:
    ranking: tuple[RankedPipeline, ...]  # by size ascending, enumeration-stable
    pareto: tuple[RankedPipeline, ...]  # non-dominated over (size, cost)
    exhaustive: bool

    @property
    def best(self) -> RankedPipeline:
        return self.ranking[0]


def _kind_after(step: str, kind: StreamKind) -> Optional[StreamKind]:
    """Stream kind a step leaves behind, or None when it cannot apply."""
    if step == "parse_int":
        return StreamKind.NUMERIC if kind is StreamKind.STRINGS else None
    if step == "tokenize":
        # Continue on the index stream; the alphabet is side-routed.
        return StreamKind.NUMERIC if kind in (StreamKind.STRINGS, StreamKind.RECORD) else None
    if step in ("delta", "zigzag"):
        return StreamKind.NUMERIC if kind is StreamKind.NUMERIC else None
    if step == "transpose":
        return StreamKind.RECORD if kind is StreamKind.RECORD else None
    return None


def _chains(kind: StreamKind, candidates: CandidateSet) -> Iterator[tuple[str, ...]]:
    """Type-correct step chains in breadth-first order (shallow first)."""
    frontier: list[tuple[tuple[str, ...], StreamKind]] = [((), kind)]
    for _ in range(candidates.depth + 1):
        next_frontier: list[tuple[tuple[str, ...], StreamKind]] = []
        for chain, cur in frontier:
            yield chain
            for step in candidates.steps_for(cur):
                after = _kind_after(step, cur)
                if after is not None:
                    next_frontier.append((chain + (step,), after))
        frontier = next_frontier
        if not frontier:
            return


def enumerate_pipelines(kind: StreamKind, candidates: CandidateSet) -> list[Pipeline]:
    """Every admissible pipeline, in canonical (depth, step, terminal) order."""
    return [
        Pipeline(chain, terminal)
        for chain in _chains(kind, candidates)
        for terminal in candidates.terminals
    ]


def measure_pipeline(
    pipeline: Pipeline,
    streams: Sequence[TypedStream],
    *,
    from_serial: bool = False,
) -> Optional[int]:
    """Total framed size of the streams under this pipeline; None if it fails.

    With ``from_serial`` the measurement mirrors how string columns are lowered
    from a byte-routing sink: the root is the raw content bytes and the string
    framing conversion is inserted only when the pipeline's first step needs
    element boundaries, so pipelines that never look at boundaries are not
    charged for them.
    """
    total = 0
    for stream in streams:
        sk = GraphSketch()
        if from_serial and stream.stype.kind is StreamKind.STRINGS:
            root_stream = TypedStream.serial(stream.content)
            root = sk.add_root(SERIAL)
            apply_pipeline(sk, root, SERIAL, pipeline, lengths=stream.lengths)
        else:
            root_stream = stream
            root = sk.add_root(stream.stype)
            apply_pipeline(sk, root, stream.stype, pipeline)
        try:
            _, _, size = trial_compress(sk.build(), [root_stream])
        except GraphzipError:
            return None
        total += size
    return total


def _pareto_front(ranking: Sequence[RankedPipeline]) -> tuple[RankedPipeline, ...]:
    front: list[RankedPipeline] = []
    best_cost: Optional[int] = None
    for entry in ranking:  # already size-ascending, enumeration-stable
        if best_cost is None or entry.cost < best_cost:
            front.append(entry)
            best_cost = entry.cost
    return tuple(front)


def _rank(
    evaluated: Sequence[tuple[Pipeline, int]],
) -> tuple[RankedPipeline, ...]:
    ranked = [
        RankedPipeline(pipeline, size, pipeline_cost(pipeline))
        for pipeline, size in evaluated
    ]
    # Size first, static cost second (equal bytes -> prefer the cheaper
    # pipeline), and the stable sort keeps enumeration order beyond that, so
    # two runs of the trainer agree byte-for-byte.
    ranked.sort(key=lambda r: (r.size, r.cost))
    return tuple(ranked)


def _common_kind(streams: Sequence[TypedStream]) -> StreamKind:
    kinds = {s.stype.kind for s in streams}
    if len(kinds) != 1:
        raise TrainingError(f"cluster streams mix kinds {sorted(k.name for k in kinds)}")
    return kinds.pop()


def _mutate_chain(
    chain: tuple[str, ...],
    kind: StreamKind,
    candidates: CandidateSet,
    rng: random.Random,
) -> tuple[str, ...]:
    """One random edit (insert/replace/delete), repaired to type-correctness."""
    ops = ["insert", "replace", "delete"] if chain else ["insert"]
    op = rng.choice(ops)
    steps = list(chain)
    if op == "delete":
        del steps[rng.randrange(len(steps))]
    elif op == "replace":
        steps[rng.randrange(len(steps))] = rng.choice(
            ["parse_int", "tokenize", "delta", "zigzag", "transpose"]
        )
    else:
        steps.insert(
            rng.randrange(len(steps) + 1),
            rng.choice(["parse_int", "tokenize", "delta", "zigzag", "transpose"]),
        )
    # Repair: keep only steps that type-check in sequence, up to the depth cap.
    repaired: list[str] = []
    cur = kind
    for step in steps:
        if len(repaired) >= candidates.depth:
            break
        if step not in candidates.steps_for(cur):
            continue
        after = _kind_after(step, cur)
        if after is None:
            continue
        repaired.append(step)
        cur = after
    return tuple(repaired)


def _genetic_search(
    kind: StreamKind,
    candidates: CandidateSet,
    measure: Callable[[Pipeline], Optional[int]],
) -> tuple[RankedPipeline, ...]:
    rng = random.Random(GA_SEED)
    evaluated: dict[Pipeline, int] = {}

    def consider(pipeline: Pipeline) -> None:
        if pipeline not in evaluated:
            size = measure(pipeline)
            if size is not None:
                evaluated[pipeline] = size

    # Seed population: the shallowest slice of the canonical enumeration.
    population: list[Pipeline] = []
    for chain in _chains(kind, candidates):
        for terminal in candidates.terminals:
            population.append(Pipeline(chain, terminal))
            if len(population) >= GA_POPULATION:
                break
        if len(population) >= GA_POPULATION:
            break
    for pipeline in population:
        consider(pipeline)

    for _ in range(GA_GENERATIONS):
        scored = sorted(
            (p for p in population if p in evaluated),
            key=lambda p: (evaluated[p], pipeline_cost(p), p.steps, p.terminal),
        )
        if not scored:
            break
        elite = scored[: max(2, GA_POPULATION // 4)]
        children: list[Pipeline] = []
        while len(children) < GA_POPULATION - len(elite):
            mother, father = rng.choice(elite), rng.choice(elite)
            cut_m = rng.randint(0, len(mother.steps))
            cut_f = rng.randint(0, len(father.steps))
            chain = _mutate_chain(
                mother.steps[:cut_m] + father.steps[cut_f:], kind, candidates, rng
            )
            terminal = (
                rng.choice(candidates.terminals)
                if rng.random() < 0.25
                else rng.choice((mother.terminal, father.terminal))
            )
            children.append(Pipeline(chain, terminal))
        population = elite + children
        for pipeline in population:
            consider(pipeline)

    return _rank(list(evaluated.items()))


def explore_backends(
    streams: Sequence[TypedStream],
    candidates: Optional[CandidateSet] = None,
    *,
    from_serial: bool = False,
) -> ExplorationResult:
    """Rank candidate pipelines for one cluster's sample streams."""
    if not streams:
        raise TrainingError("explore_backends needs at least one sample stream")
    candidates = candidates or CandidateSet()
    kind = _common_kind(streams)

    def measure(pipeline: Pipeline) -> Optional[int]:
        return measure_pipeline(pipeline, streams, from_serial=from_serial)

    pipelines = enumerate_pipelines(kind, candidates)
    if len(pipelines) <= candidates.enumeration_limit:
        evaluated = [(p, measure(p)) for p in pipelines]
        ranking = _rank([(p, s) for p, s in evaluated if s is not None])
        exhaustive = True
    else:
        ranking = _genetic_search(kind, candidates, measure)
        exhaustive = False
    if not ranking:
        raise TrainingError("no candidate pipeline could encode the streams")
    return ExplorationResult(ranking, _pareto_front(ranking), exhaustive)
