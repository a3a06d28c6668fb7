"""Greedy agglomerative clustering of tagged stream units.

Each unit (e.g. a CSV column observed across all samples) starts as its own
cluster with its own best pipeline. Every round evaluates all type-compatible
pairwise merges by real encoded size — members concatenated exactly the way
the final graph will concatenate them — and applies the merge with the
largest strict decrease; lexicographically smallest tag pair wins ties. The
loop stops when no merge helps, so it performs at most units-1 merges and
every accepted merge strictly shrinks the total.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from graphzip.core.graph import CodecNode, GraphRefNode
from graphzip.core.streams import SERIAL, StreamKind, TypedStream
from graphzip.errors import GraphzipError, TrainingError
from graphzip.graphs.clustering import ClusterConfig
from graphzip.graphs.measure import trial_compress
from graphzip.graphs.pipelines import Pipeline, apply_pipeline
from graphzip.graphs.sketch import GraphSketch
from graphzip.trainer.candidates import CandidateSet
from graphzip.trainer.explore import explore_backends

W_CONCAT = 9


@dataclass(frozen=True)
class Unit:
    """One tagged stream group: the same logical stream across all samples."""

    tag: str
    streams: tuple[TypedStream, ...]  # one per sample, same order everywhere


@dataclass(frozen=True)
class ClusterState:
    members: tuple[str, ...]  # ascending tags
    pipeline: Pipeline
    size: int  # real encoded size of this cluster over all samples


def _concat_streams(streams: Sequence[TypedStream]) -> TypedStream:
    first = streams[0]
    for other in streams[1:]:
        if other.stype != first.stype:
            raise TrainingError(f"cannot merge streams of types {first.stype} and {other.stype}")
    content = b"".join(s.content for s in streams)
    count = sum(s.element_count for s in streams)
    if first.stype.kind is StreamKind.STRINGS:
        lengths = tuple(l for s in streams for l in s.lengths)
        return TypedStream(first.stype, content, count, lengths)
    return TypedStream(first.stype, content, count)


def _cluster_size(
    member_streams: Sequence[Sequence[TypedStream]],  # [sample][member]
    pipeline: Pipeline,
    *,
    from_serial: bool,
) -> Optional[int]:
    """Real encoded size of one cluster, mirroring the final graph lowering.

    Single-member clusters route the stream straight into the pipeline;
    multi-member clusters pay for the concatenation's member-count stream,
    exactly as ``clustering_graph`` and the CSV assembly will.
    """
    total = 0
    for members in member_streams:
        sk = GraphSketch()
        if from_serial and members[0].stype.kind is StreamKind.STRINGS:
            roots = [sk.add_root(SERIAL) for _ in members]
            root_streams = [TypedStream.serial(s.content) for s in members]
            stype = SERIAL
        else:
            roots = [sk.add_root(s.stype) for s in members]
            root_streams = list(members)
            stype = members[0].stype
        lengths = [l for s in members for l in (s.lengths or ())]
        if len(roots) == 1:
            src = roots[0]
        else:
            joined = sk.add(CodecNode(W_CONCAT), *roots)
            sk.add(GraphRefNode("compress"), sk.out(joined, 1))
            src = sk.out(joined, 0)
        if from_serial and members[0].stype.kind is StreamKind.STRINGS:
            apply_pipeline(sk, src, SERIAL, pipeline, lengths=lengths)
        else:
            apply_pipeline(sk, src, stype, pipeline)
        try:
            _, _, size = trial_compress(sk.build(), root_streams)
        except GraphzipError:
            return None
        total += size
    return total


def _mergeable(a: Sequence[TypedStream], b: Sequence[TypedStream]) -> bool:
    return all(sa.stype == sb.stype for sa, sb in zip(a, b))


def _evaluate(
    members: tuple[str, ...],
    streams_by_tag: dict[str, tuple[TypedStream, ...]],
    candidates: CandidateSet,
    sample_count: int,
    *,
    from_serial: bool,
) -> Optional[ClusterState]:
    """Best pipeline and real size for a cluster of the given member tags."""
    per_sample = [
        [streams_by_tag[tag][i] for tag in members] for i in range(sample_count)
    ]
    merged = [_concat_streams(row) for row in per_sample]
    try:
        best = explore_backends(merged, candidates, from_serial=from_serial).best
    except TrainingError:
        return None
    size = _cluster_size(per_sample, best.pipeline, from_serial=from_serial)
    if size is None:
        return None
    return ClusterState(members, best.pipeline, size)


def train_clustering_detailed(
    units: Sequence[Unit],
    candidates: Optional[CandidateSet] = None,
    *,
    from_serial: bool = False,
) -> tuple[ClusterConfig, tuple[ClusterState, ...]]:
    """Greedy agglomerative merge; returns the config plus per-cluster detail."""
    if not units:
        raise TrainingError("clustering needs at least one unit")
    candidates = candidates or CandidateSet()
    tags = [u.tag for u in units]
    if len(set(tags)) != len(tags):
        raise TrainingError("unit tags must be unique")
    counts = {len(u.streams) for u in units}
    if len(counts) != 1:
        raise TrainingError("every unit needs one stream per sample")
    (sample_count,) = counts
    if sample_count == 0:
        raise TrainingError("clustering needs at least one sample")

    streams_by_tag = {u.tag: u.streams for u in units}
    memo: dict[tuple[str, ...], Optional[ClusterState]] = {}

    def evaluate(members: tuple[str, ...]) -> Optional[ClusterState]:
        if members not in memo:
            memo[members] = _evaluate(
                members, streams_by_tag, candidates, sample_count, from_serial=from_serial
            )
        return memo[members]

    clusters: list[ClusterState] = []
    for unit in sorted(units, key=lambda u: u.tag):
        state = evaluate((unit.tag,))
        if state is None:
            raise TrainingError(f"no pipeline can encode unit {unit.tag!r}")
        clusters.append(state)

    while len(clusters) > 1:
        best_gain = 0
        best_merge: Optional[ClusterState] = None
        best_pair: Optional[tuple[int, int]] = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                a, b = clusters[i], clusters[j]
                if not _mergeable(
                    streams_by_tag[a.members[0]], streams_by_tag[b.members[0]]
                ):
                    continue
                merged = evaluate(tuple(sorted(a.members + b.members)))
                if merged is None:
                    continue
                gain = a.size + b.size - merged.size
                # Strictly positive improvement; first pair in ascending tag
                # order wins ties because we only accept strictly larger gains.
                if gain > best_gain:
                    best_gain, best_merge, best_pair = gain, merged, (i, j)
        if best_merge is None:
            break
        i, j = best_pair
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(best_merge)
        clusters.sort(key=lambda c: c.members)

    clusters.sort(key=lambda c: c.members)
    config = ClusterConfig(
        clusters=tuple((c.members, c.pipeline) for c in clusters)
    )
    return config, tuple(clusters)


def train_clustering(
    units: Sequence[Unit],
    candidates: Optional[CandidateSet] = None,
    *,
    from_serial: bool = False,
) -> ClusterConfig:
    config, _ = train_clustering_detailed(units, candidates, from_serial=from_serial)
    return config
