"""Cluster routing: concatenate grouped streams, route each group's pipeline.

A ClusterConfig records which tagged units belong together and which pipeline
each group feeds. ``clustering_graph`` lowers that onto tagged roots: members
of a cluster are concatenated in ascending tag order (the member-size stream
rides along), singleton clusters skip the concatenation, and tags the config
does not mention fall into its designated default cluster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence

from graphzip.core.graph import CodecNode, CompressorGraph, GraphRefNode
from graphzip.core.streams import StreamType
from graphzip.errors import ConfigError, GraphError
from graphzip.graphs.pipelines import Pipeline, apply_pipeline
from graphzip.graphs.sketch import GraphSketch
from graphzip.graphs.standard import register_builder

W_CONCAT = 9


@dataclass(frozen=True)
class ClusterConfig:
    """Tag groups plus the pipeline each group feeds."""

    clusters: tuple[tuple[tuple[str, ...], Pipeline], ...] = ()
    default: Optional[int] = None  # cluster index that absorbs unknown tags

    def __post_init__(self) -> None:
        # Canonicalize member order so equal groupings are equal objects and
        # serialize to equal bytes regardless of how they were written down.
        object.__setattr__(
            self,
            "clusters",
            tuple((tuple(sorted(members)), pipe) for members, pipe in self.clusters),
        )
        seen: set[str] = set()
        for members, _ in self.clusters:
            for tag in members:
                if tag in seen:
                    raise ConfigError(f"tag {tag!r} assigned to more than one cluster")
                seen.add(tag)
        if self.default is not None and not 0 <= self.default < len(self.clusters):
            raise ConfigError(f"default cluster index {self.default} out of range")

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "clusters": [
                {"columns": list(members), "pipeline": pipe.to_doc()}
                for members, pipe in self.clusters
            ]
        }
        if self.default is not None:
            doc["default"] = self.default
        return doc

    @classmethod
    def from_doc(cls, doc: Any) -> "ClusterConfig":
        if not isinstance(doc, Mapping) or set(doc) - {"clusters", "default"}:
            raise ConfigError(f"cluster config must have clusters/default, got {doc!r}")
        entries = doc.get("clusters", [])
        if not isinstance(entries, Sequence) or isinstance(entries, (str, bytes)):
            raise ConfigError("'clusters' must be a list")
        clusters = []
        for entry in entries:
            if not isinstance(entry, Mapping) or set(entry) - {"columns", "pipeline"}:
                raise ConfigError(f"cluster entry must have columns/pipeline, got {entry!r}")
            members = entry.get("columns")
            if not isinstance(members, Sequence) or isinstance(members, (str, bytes)):
                raise ConfigError("cluster 'columns' must be a list of tags")
            if not all(isinstance(t, str) for t in members):
                raise ConfigError("cluster tags must be strings")
            clusters.append((tuple(sorted(members)), Pipeline.from_doc(entry.get("pipeline"))))
        default = doc.get("default")
        if default is not None and not isinstance(default, int):
            raise ConfigError("'default' must be a cluster index")
        return cls(tuple(clusters), default)


def clustering_graph(
    tags: Sequence[str],
    input_types: Sequence[StreamType],
    config: ClusterConfig,
) -> CompressorGraph:
    """Build the cluster-routing graph over one tagged root per unit."""
    if len(tags) != len(input_types):
        raise GraphError(f"{len(tags)} tags for {len(input_types)} inputs")
    if len(set(tags)) != len(tags):
        raise GraphError("unit tags must be unique")

    groups: list[list[int]] = [[] for _ in config.clusters]
    assignment = {
        tag: ci for ci, (members, _) in enumerate(config.clusters) for tag in members
    }
    for i, tag in enumerate(tags):
        ci = assignment.get(tag, config.default)
        if ci is None:
            raise GraphError(f"no cluster for tag {tag!r} and no default cluster")
        groups[ci].append(i)

    sk = GraphSketch()
    roots = [sk.add_root(t) for t in input_types]
    for ci, (_, pipeline) in enumerate(config.clusters):
        members = sorted(groups[ci], key=lambda i: tags[i])
        if not members:
            continue
        types = {input_types[i] for i in members}
        if len(types) > 1:
            raise GraphError(
                f"cluster {ci} mixes stream types {sorted(map(str, types))}"
            )
        (stype,) = types
        if len(members) == 1:
            apply_pipeline(sk, roots[members[0]], stype, pipeline)
            continue
        joined = sk.add(CodecNode(W_CONCAT), *[roots[i] for i in members])
        sk.add(GraphRefNode("compress"), sk.out(joined, 1))  # member element counts
        apply_pipeline(sk, sk.out(joined, 0), stype, pipeline)
    return sk.build()


def _clustering_builder(types: tuple[StreamType, ...], params: Mapping) -> CompressorGraph:
    tags = params.get("tags")
    if not isinstance(tags, Sequence) or isinstance(tags, (str, bytes)):
        raise GraphError("clustering graph needs a 'tags' list naming each input")
    config = ClusterConfig.from_doc(
        {k: v for k, v in params.items() if k in ("clusters", "default")}
    )
    return clustering_graph(list(tags), types, config)


register_builder("clustering", _clustering_builder)
