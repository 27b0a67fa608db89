"""Cluster summaries, labeling and recursive drill-down."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from ..ingest.model import Record
from ..linkage.consolidate import CanonicalRef
from ..network import CoCitationNetwork, build_cocitation, modularity, select_per_slice
from .labels import label_llr, label_lsi
from .partition import MIN_CLUSTER_SIZE, ClusteringError, Partition, cluster_network, silhouette, silhouettes

MIN_DRILL_RECORDS = 10


class DrillDownError(ValueError):
    pass


@dataclass
class Cluster:
    id: int
    members: list[str]
    silhouette: float = 0.0
    mean_year: float | None = None
    llr_labels: list[tuple[str, float]] = field(default_factory=list)
    lsi_labels: list[list[str]] = field(default_factory=list)
    path: str = ""

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def llr_label(self) -> str:
        return self.llr_labels[0][0] if self.llr_labels else ""

    @property
    def lsi_label(self) -> str:
        return self.lsi_labels[0][0] if self.lsi_labels and self.lsi_labels[0] else ""

    @property
    def display_year(self) -> int | None:
        return round_half_up(self.mean_year) if self.mean_year is not None else None


@dataclass
class ClusterAnalysis:
    network: CoCitationNetwork
    partition: Partition
    clusters: list[Cluster]
    modularity: float
    records: list[Record]
    path: str = ""

    def find(self, path: str) -> Cluster:
        for c in self.clusters:
            if c.path == path:
                return c
        valid = ", ".join(c.path for c in self.clusters)
        raise KeyError(f"unknown cluster path {path!r}; valid paths: {valid}")


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def cluster_stats(members: Sequence[str], net: CoCitationNetwork, partition: Partition | None = None,
                  scores: Mapping[str, float] | None = None) -> tuple[int, float, float | None]:
    """(size, silhouette, mean publication year) of one cluster.

    Silhouette falls back to 0.0 when the partition has a single block.
    """
    years = [net.nodes[m].year for m in members if net.nodes[m].year is not None]
    mean_year = sum(years) / len(years) if years else None
    if scores is None and partition is not None and len(partition.blocks) >= 2:
        scores = silhouettes(net, partition)
    sil = silhouette(members, net, partition, scores) if scores is not None else 0.0
    return len(members), sil, mean_year


def citing_records(members: Sequence[str], records: Sequence[Record]) -> list[Record]:
    """Records citing at least one member."""
    keep = set(members)
    return [r for r in records if keep.intersection(r.ref_ids)]


def analyze(records: Sequence[Record], canon: Mapping[str, CanonicalRef] | None = None, k: float = 30,
            slice_length: int = 1, min_size: int = MIN_CLUSTER_SIZE, path: str = "") -> ClusterAnalysis:
    """Select, build, cluster and label in one pass; cluster paths extend ``path``."""
    records = list(records)
    selection = select_per_slice(records, k=k, slice_length=slice_length)
    net = build_cocitation(records, selection, canon, k=int(k))
    if not net.nodes:
        raise ClusteringError("no references were selected; the network is empty")
    partition = cluster_network(net, min_size=min_size)
    scores = silhouettes(net, partition) if len(partition.blocks) >= 2 else None
    citing = [r for r in records if r.ref_ids]
    clusters = []
    for cid, members in enumerate(partition.clusters):
        size, sil, mean_year = cluster_stats(members, net, partition, scores)
        docs = citing_records(members, citing)
        clusters.append(Cluster(
            id=cid,
            members=members,
            silhouette=sil,
            mean_year=mean_year,
            llr_labels=label_llr(docs, citing, top=10),
            lsi_labels=label_lsi(docs),
            path=f"{path}#{cid}",
        ))
    return ClusterAnalysis(net, partition, clusters, modularity(net, partition.blocks), records, path)


def drill_down(cluster: Cluster, records: Sequence[Record], canon: Mapping[str, CanonicalRef] | None = None,
               min_records: int = MIN_DRILL_RECORDS, **options) -> ClusterAnalysis:
    """Re-run the analysis on the records citing ``cluster``."""
    if cluster.size < options.get("min_size", MIN_CLUSTER_SIZE):
        raise DrillDownError(f"cluster {cluster.path} has {cluster.size} member(s); too small to drill into")
    subset = citing_records(cluster.members, records)
    if len(subset) < min_records:
        raise DrillDownError(
            f"only {len(subset)} record(s) cite cluster {cluster.path}; at least {min_records} are needed")
    return analyze(subset, canon, path=cluster.path, **options)


def drill_path(analysis: ClusterAnalysis, path: str, canon: Mapping[str, CanonicalRef] | None = None,
               max_depth: int = 3, **options) -> ClusterAnalysis:
    """Follow a path like ``"#0#2"`` from a top-level analysis and drill into its last cluster."""
    steps = [int(p) for p in path.split("#")[1:]] if path.startswith("#") else None
    if not steps:
        raise KeyError(f"malformed cluster path {path!r}; expected e.g. '#0' or '#0#1'")
    if len(steps) >= max_depth:
        raise DrillDownError(f"path {path!r} exceeds the maximum depth of {max_depth} levels")
    current = analysis
    prefix = ""
    for step in steps:
        prefix += f"#{step}"
        cluster = current.find(prefix)
        current = drill_down(cluster, current.records, canon, **options)
    return current


def write_cluster_csv(analysis: ClusterAnalysis, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cluster", "path", "size", "silhouette", "mean_year", "lsi_label", "llr_label"])
        for c in analysis.clusters:
            w.writerow([c.id, c.path, c.size, f"{c.silhouette:.3f}",
                        "" if c.display_year is None else c.display_year, c.lsi_label, c.llr_label])
