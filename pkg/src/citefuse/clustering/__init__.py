"""Partitioning, silhouette, labeling and drill-down of co-citation networks."""
from .analysis import (
    Cluster, ClusterAnalysis, DrillDownError, MIN_DRILL_RECORDS, analyze, citing_records, cluster_stats,
    drill_down, drill_path, round_half_up, write_cluster_csv,
)
from .labels import STOP_WORDS, label_llr, label_lsi, llr, lsi_dimensions, tfidf_matrix, title_terms
from .partition import (
    MIN_CLUSTER_SIZE, ClusteringError, Partition, cluster_network, greedy_modularity, silhouette, silhouettes,
)

__all__ = [
    "Cluster", "ClusterAnalysis", "DrillDownError", "MIN_DRILL_RECORDS", "analyze", "citing_records",
    "cluster_stats", "drill_down", "drill_path", "round_half_up", "write_cluster_csv",
    "STOP_WORDS", "label_llr", "label_lsi", "llr", "lsi_dimensions", "tfidf_matrix", "title_terms",
    "MIN_CLUSTER_SIZE", "ClusteringError", "Partition", "cluster_network", "greedy_modularity",
    "silhouette", "silhouettes",
]
