"""Training orchestration: walk a seed config over samples, improve it.

The forward pass executes the seed profile far enough to expose its trainable
slots — the clustering stage and per-cluster backend pipelines for CSV, the
single backend slot for raw and fixed-width numeric profiles — runs the
dedicated trainers on the streams observed there, and rewrites the config.
The result is guaranteed never to be worse than the seed on the training
corpus: when nothing beats the seed, the seed comes back unchanged.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Optional

import graphzip
from graphzip.core.streams import TypedStream
from graphzip.errors import CsvError, GraphzipError, TrainingError
from graphzip.frontends.csv import CsvDialect, csv_parse
from graphzip.frontends.profiles import parse_profile
from graphzip.graphs.config import CompressorConfig
from graphzip.trainer.candidates import CandidateSet
from graphzip.trainer.cluster import Unit, train_clustering_detailed
from graphzip.trainer.explore import explore_backends


@dataclass(frozen=True)
class SampleCorpus:
    """Named training samples in deterministic (name-sorted) order."""

    samples: tuple[tuple[str, bytes], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.samples]
        if sorted(names) != names:
            raise TrainingError("corpus samples must be sorted by name")
        if len(set(names)) != len(names):
            raise TrainingError("corpus sample names must be unique")

    @classmethod
    def from_samples(cls, pairs: Any) -> "SampleCorpus":
        return cls(tuple(sorted(((str(n), bytes(d)) for n, d in pairs))))

    @classmethod
    def from_dir(cls, path: str) -> "SampleCorpus":
        try:
            entries = sorted(os.listdir(path))
        except OSError as exc:
            raise TrainingError(f"cannot list sample directory {path!r}: {exc}") from exc
        pairs = []
        for name in entries:
            full = os.path.join(path, name)
            if not os.path.isfile(full):
                continue
            with open(full, "rb") as fh:
                pairs.append((name, fh.read()))
        if not pairs:
            raise TrainingError(f"sample directory {path!r} has no files")
        return cls(tuple(pairs))

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def total_bytes(self) -> int:
        return sum(len(d) for _, d in self.samples)


@dataclass(frozen=True)
class TrainingReport:
    """Per-sample frame sizes for the seed and the returned config."""

    sample_sizes: tuple[tuple[str, int, int], ...]  # (name, seed, trained)

    @property
    def seed_total(self) -> int:
        return sum(s for _, s, _ in self.sample_sizes)

    @property
    def trained_total(self) -> int:
        return sum(t for _, _, t in self.sample_sizes)


@dataclass(frozen=True)
class TrainingResult:
    config: CompressorConfig
    report: TrainingReport
    improved: bool


def _config_sizes(config: CompressorConfig, corpus: SampleCorpus) -> list[int]:
    sizes = []
    for name, data in corpus.samples:
        try:
            sizes.append(len(graphzip.compress(data, config, checksum=False)))
        except GraphzipError as exc:
            raise TrainingError(f"sample {name!r} does not compress under config: {exc}") from exc
    return sizes


def _train_csv(
    seed: CompressorConfig, corpus: SampleCorpus, candidates: CandidateSet
) -> CompressorConfig:
    params = dict(seed.profile_params)
    dialect = CsvDialect.from_doc(params["dialect"]) if "dialect" in params else CsvDialect()
    parses = []
    for name, data in corpus.samples:
        try:
            parses.append(csv_parse(data, dialect))
        except CsvError as exc:
            raise TrainingError(f"sample {name!r} does not parse as CSV: {exc}") from exc

    tags = sorted({c.tag for p in parses for c in p.columns})
    if not tags:
        return seed
    units = []
    for tag in tags:
        streams = []
        for parse in parses:
            cells: tuple[bytes, ...] = ()
            for column in parse.columns:
                if column.tag == tag:
                    cells = column.cells
                    break
            streams.append(TypedStream.strings(cells))
        units.append(Unit(tag, tuple(streams)))

    _, states = train_clustering_detailed(units, candidates, from_serial=True)

    columns: dict[str, Any] = {}
    clusters: list[dict[str, Any]] = []
    for state in states:
        if len(state.members) == 1:
            columns[state.members[0]] = state.pipeline.to_doc()
        else:
            clusters.append(
                {"columns": list(state.members), "pipeline": state.pipeline.to_doc()}
            )
    params["columns"] = {tag: columns[tag] for tag in sorted(columns)}
    if clusters:
        params["clusters"] = clusters
    else:
        params.pop("clusters", None)
    return CompressorConfig(profile=seed.profile, profile_params=params)


def _train_single_stream(
    seed: CompressorConfig,
    corpus: SampleCorpus,
    candidates: CandidateSet,
    streams: list[TypedStream],
) -> CompressorConfig:
    best = explore_backends(streams, candidates).best
    params = dict(seed.profile_params)
    params["pipeline"] = best.pipeline.to_doc()
    return CompressorConfig(profile=seed.profile, profile_params=params)


def _numeric_streams(corpus: SampleCorpus, width: int, big_endian: bool) -> list[TypedStream]:
    from graphzip.codecs import registry

    wire = 4 if big_endian else 3
    spec = registry.get(wire)
    streams = []
    for name, data in corpus.samples:
        if len(data) % width:
            raise TrainingError(
                f"sample {name!r} is {len(data)} bytes, not a multiple of width {width}"
            )
        outputs, _ = spec.encode([TypedStream.serial(data)], {"width": width})
        streams.append(outputs[0])
    return streams


def train_detailed(
    seed: CompressorConfig,
    corpus: SampleCorpus,
    candidates: Optional[CandidateSet] = None,
) -> TrainingResult:
    """Train over the corpus; the returned config never loses to the seed."""
    if not len(corpus):
        raise TrainingError("training corpus is empty")
    candidates = candidates or CandidateSet()

    if seed.graphs is not None:
        candidate = seed  # custom graphs expose no trainable slots
    else:
        base, width = parse_profile(seed.profile)
        if base == "csv":
            candidate = _train_csv(seed, corpus, candidates)
        elif base == "raw":
            streams = [TypedStream.serial(data) for _, data in corpus.samples]
            candidate = _train_single_stream(seed, corpus, candidates, streams)
        elif base in ("numeric-le", "numeric-be"):
            streams = _numeric_streams(corpus, width, base == "numeric-be")
            candidate = _train_single_stream(seed, corpus, candidates, streams)
        else:
            candidate = seed  # f32/sddl routing is fixed by the description

    seed_sizes = _config_sizes(seed, corpus)
    if candidate is seed:
        trained_sizes = seed_sizes
    else:
        trained_sizes = _config_sizes(candidate, corpus)

    improved = sum(trained_sizes) < sum(seed_sizes)
    final = candidate if improved else seed
    final_sizes = trained_sizes if improved else seed_sizes
    report = TrainingReport(
        tuple(
            (name, seed_size, final_size)
            for (name, _), seed_size, final_size in zip(
                corpus.samples, seed_sizes, final_sizes
            )
        )
    )
    return TrainingResult(final, report, improved)


def train(
    seed: CompressorConfig,
    corpus: SampleCorpus,
    candidates: Optional[CandidateSet] = None,
) -> CompressorConfig:
    """Offline training: returns a config whose corpus total never exceeds the seed's."""
    return train_detailed(seed, corpus, candidates).config
