"""Greedy modularity partitioning and silhouette scores."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from networkx.algorithms.community import greedy_modularity_communities

from ..network import CoCitationNetwork

MIN_CLUSTER_SIZE = 3


class ClusteringError(ValueError):
    pass


@dataclass
class Partition:
    """Blocks ordered by descending size (ties: smallest member id first).

    ``clusters`` are the blocks meeting the minimum size; their index is the
    cluster id. Smaller blocks are kept in ``noise``.
    """
    blocks: list[list[str]]
    min_size: int = MIN_CLUSTER_SIZE
    clusters: list[list[str]] = field(init=False)
    noise: list[list[str]] = field(init=False)

    def __post_init__(self) -> None:
        self.blocks = sorted((sorted(b) for b in self.blocks if b), key=lambda b: (-len(b), b[0]))
        self.clusters = [b for b in self.blocks if len(b) >= self.min_size]
        self.noise = [b for b in self.blocks if len(b) < self.min_size]

    def membership(self) -> dict[str, int]:
        return {n: i for i, b in enumerate(self.blocks) for n in b}


DENSE_LIMIT = 6000


def greedy_modularity(net: CoCitationNetwork) -> list[list[str]]:
    """Clauset-Newman-Moore agglomeration on edge weights.

    Merges the connected pair with the largest modularity gain until no merge
    gains. Ties go to the pair with the smallest node indices (nodes sorted by
    id). Networks above ``DENSE_LIMIT`` nodes fall back to networkx.
    """
    order = sorted(net.nodes)
    if len(order) > DENSE_LIMIT:
        g = net.to_networkx()
        return [sorted(c) for c in greedy_modularity_communities(g, weight="weight")]
    index = {n: i for i, n in enumerate(order)}
    n = len(order)
    e = np.zeros((n, n))
    for (a, b), edge in net.edges.items():
        e[index[a], index[b]] += edge.weight
        e[index[b], index[a]] += edge.weight
    total = e.sum()
    if total <= 0:
        return [[x] for x in order]
    e /= total
    return [[order[i] for i in block] for block in _cnm_dense(e)]


def _cnm_dense(e: np.ndarray) -> list[list[int]]:
    a = e.sum(axis=1)
    members = [[i] for i in range(len(e))]
    alive = np.ones(len(e), dtype=bool)

    def gains(rows: np.ndarray) -> np.ndarray:
        d = 2.0 * (e[rows] - a[rows, None] * a[None, :])
        d[e[rows] <= 0] = -np.inf
        d[np.arange(len(rows)), rows] = -np.inf
        return d

    # best_val is exact for fresh rows and an upper bound for stale ones
    best_val = np.full(len(e), -np.inf)
    best_idx = np.zeros(len(e), dtype=int)
    stale = np.zeros(len(e), dtype=bool)

    def refresh(rows: np.ndarray) -> None:
        for start in range(0, len(rows), 512):
            chunk = rows[start:start + 512]
            d = gains(chunk)
            best_idx[chunk] = d.argmax(axis=1)
            best_val[chunk] = d[np.arange(len(chunk)), best_idx[chunk]]
            stale[chunk] = False

    refresh(np.arange(len(e)))
    n_alive = len(e)
    while True:
        i = int(best_val.argmax())
        if stale[i]:
            refresh(np.array([i]))
            continue
        if not best_val[i] > 0:
            break
        j = int(best_idx[i])
        keep, gone = min(i, j), max(i, j)
        e[keep] += e[gone]
        e[:, keep] += e[:, gone]
        e[gone] = 0.0
        e[:, gone] = 0.0
        a[keep] += a[gone]
        a[gone] = 0.0
        alive[gone] = False
        n_alive -= 1
        members[keep].extend(members[gone])
        members[gone] = []
        best_val[gone] = -np.inf
        stale[gone] = False
        row = gains(np.array([keep]))[0]
        fresh = alive & ~stale
        fresh[keep] = False
        # A fresh row that pointed at the merged pair keeps `keep` as its best
        # when the gain did not drop (index order rules out ties); otherwise its
        # old best becomes an upper bound.
        pointed = fresh & ((best_idx == keep) | (best_idx == gone))
        kept = pointed & (row >= best_val)
        best_val[kept] = row[kept]
        best_idx[kept] = keep
        stale |= pointed & ~kept
        better = fresh & ~pointed & ((row > best_val) | ((row == best_val) & (keep < best_idx)))
        best_val[better] = row[better]
        best_idx[better] = keep
        lifted = alive & stale & (row > best_val)
        best_val[lifted] = row[lifted]
        best_idx[lifted] = keep
        stale[lifted] = False
        refresh(np.array([keep]))
        if n_alive * 2 < len(e) and len(e) > 64:
            sel = np.flatnonzero(alive)
            pos = np.zeros(len(e), dtype=int)
            pos[sel] = np.arange(len(sel))
            e = e[np.ix_(sel, sel)]
            a = a[sel]
            best_val, best_idx, stale = best_val[sel], pos[best_idx[sel]], stale[sel]
            members = [members[k] for k in sel]
            alive = np.ones(len(sel), dtype=bool)
    return [m for m in members if m]


def cluster_network(net: CoCitationNetwork, min_size: int = MIN_CLUSTER_SIZE,
                    method: Callable[[CoCitationNetwork], Sequence[Sequence[str]]] = greedy_modularity) -> Partition:
    """Partition the network with ``method`` (greedy modularity agglomeration by default)."""
    if not net.nodes:
        raise ClusteringError("cannot cluster an empty network")
    return Partition([list(b) for b in method(net)], min_size=min_size)


def _profiles(net: CoCitationNetwork, order: Sequence[str]) -> np.ndarray:
    """Row-normalized co-citation profiles.

    A node's self entry is its citation count (a reference is co-cited with
    itself by every citing record), or its strongest edge when counts are
    unknown.
    """
    index = {n: i for i, n in enumerate(order)}
    m = np.zeros((len(order), len(order)))
    for (a, b), e in net.edges.items():
        m[index[a], index[b]] = m[index[b], index[a]] = e.weight
    for n, i in index.items():
        m[i, i] = net.nodes[n].total_citations or (m[i].max() if m[i].any() else 1.0)
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    return m / np.where(norms > 0, norms, 1.0)


def silhouettes(net: CoCitationNetwork, partition: Partition | Sequence[Sequence[str]],
                chunk: int = 1024) -> dict[str, float]:
    """Per-node silhouette with distance ``1 - cosine`` between co-citation profiles."""
    blocks = partition.blocks if isinstance(partition, Partition) else [list(b) for b in partition]
    if len([b for b in blocks if b]) < 2:
        raise ClusteringError("silhouette is undefined for fewer than two clusters")
    order = [n for b in blocks for n in b]
    missing = set(net.nodes) - set(order)
    if missing:
        raise ClusteringError(f"partition does not cover {len(missing)} node(s)")
    label = np.repeat(np.arange(len(blocks)), [len(b) for b in blocks])
    sizes = np.array([len(b) for b in blocks], dtype=float)
    onehot = np.zeros((len(order), len(blocks)))
    onehot[np.arange(len(order)), label] = 1.0
    prof = _profiles(net, order)
    out = {}
    for start in range(0, len(order), chunk):
        stop = min(start + chunk, len(order))
        dist = 1.0 - prof[start:stop] @ prof.T
        dist[np.abs(dist) < 1e-12] = 0.0
        np.clip(dist, 0.0, 2.0, out=dist)
        for k in range(stop - start):
            dist[k, start + k] = 0.0
        sums = dist @ onehot
        rows = np.arange(stop - start)
        own = label[start:stop]
        own_size = sizes[own]
        a = sums[rows, own] / np.where(own_size > 1, own_size - 1, 1.0)
        means = sums / sizes
        means[rows, own] = np.inf
        b = means.min(axis=1)
        denom = np.maximum(a, b)
        s = np.where((own_size > 1) & (denom > 0), (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
        for k in rows:
            out[order[start + k]] = float(s[k])
    return out


def silhouette(members: Sequence[str], net: CoCitationNetwork, partition: Partition | Sequence[Sequence[str]],
               scores: Mapping[str, float] | None = None) -> float:
    """Mean member silhouette of one cluster."""
    scores = scores if scores is not None else silhouettes(net, partition)
    if not members:
        return 0.0
    return float(sum(scores[m] for m in members) / len(members))
