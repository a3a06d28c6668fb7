"""Offline trainer: clustering, backend exploration, and orchestration."""

from graphzip.trainer.candidates import (
    COST_WEIGHTS,
    DEFAULT_ENUMERATION_LIMIT,
    TRAIN_TERMINALS,
    CandidateSet,
    pipeline_cost,
)
from graphzip.trainer.cluster import (
    ClusterState,
    Unit,
    train_clustering,
    train_clustering_detailed,
)
from graphzip.trainer.explore import (
    ExplorationResult,
    RankedPipeline,
    enumerate_pipelines,
    explore_backends,
    measure_pipeline,
)
from graphzip.trainer.train import (
    SampleCorpus,
    TrainingReport,
    TrainingResult,
    train,
    train_detailed,
)

__all__ = [
    "COST_WEIGHTS",
    "DEFAULT_ENUMERATION_LIMIT",
    "TRAIN_TERMINALS",
    "CandidateSet",
    "pipeline_cost",
    "ClusterState",
    "Unit",
    "train_clustering",
    "train_clustering_detailed",
    "ExplorationResult",
    "RankedPipeline",
    "enumerate_pipelines",
    "explore_backends",
    "measure_pipeline",
    "SampleCorpus",
    "TrainingReport",
    "TrainingResult",
    "train",
    "train_detailed",
]
