"""Graph-level machinery: standard graphs, selectors, configs, cost measure."""

from graphzip.graphs.clustering import ClusterConfig, clustering_graph
from graphzip.graphs.config import (
    CONFIG_VERSION,
    MAX_CONFIG_BYTES,
    CompressorConfig,
    canonical_json,
    graph_from_doc,
    graph_to_doc,
)
from graphzip.graphs.measure import encoded_size, trial_compress
from graphzip.graphs.pipelines import (
    STEPS_BY_KIND,
    TERMINALS,
    Pipeline,
    apply_pipeline,
    steps_for,
)
from graphzip.graphs.sketch import GraphSketch, Src
from graphzip.graphs.selectors import (
    get_selector,
    min_cost,
    record_route,
    register_selector,
    selector_names,
)
from graphzip.graphs.standard import build_standard_graph, builder_names, register_builder

__all__ = [
    "ClusterConfig",
    "clustering_graph",
    "STEPS_BY_KIND",
    "TERMINALS",
    "Pipeline",
    "apply_pipeline",
    "steps_for",
    "CONFIG_VERSION",
    "MAX_CONFIG_BYTES",
    "CompressorConfig",
    "canonical_json",
    "graph_from_doc",
    "graph_to_doc",
    "encoded_size",
    "trial_compress",
    "GraphSketch",
    "Src",
    "get_selector",
    "min_cost",
    "record_route",
    "register_selector",
    "selector_names",
    "build_standard_graph",
    "builder_names",
    "register_builder",
]
