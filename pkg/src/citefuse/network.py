"""g-index node selection and weighted co-citation networks."""
from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import networkx as nx

from .ingest.model import Record
from .linkage.consolidate import CanonicalRef

Slice = tuple[int, int]


class ConfigError(ValueError):
    pass


@dataclass
class Node:
    id: str
    label: str = ""
    year: int | None = None
    total_citations: int = 0
    yearly_citations: dict[int, int] = field(default_factory=dict)


@dataclass
class Edge:
    weight: float
    first_year: int | None


@dataclass
class CoCitationNetwork:
    nodes: dict[str, Node] = field(default_factory=dict)
    edges: dict[tuple[str, str], Edge] = field(default_factory=dict)
    slices: list[Slice] = field(default_factory=list)
    selection_k: int = 30

    @property
    def total_weight(self) -> float:
        return sum(e.weight for e in self.edges.values())

    def strength(self) -> dict[str, float]:
        s = dict.fromkeys(self.nodes, 0.0)
        for (a, b), e in self.edges.items():
            s[a] += e.weight
            s[b] += e.weight
        return s

    def adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {n: {} for n in self.nodes}
        for (a, b), e in self.edges.items():
            adj[a][b] = e.weight
            adj[b][a] = e.weight
        return adj

    def subgraph(self, members: Iterable[str]) -> "CoCitationNetwork":
        keep = set(members)
        return CoCitationNetwork(
            nodes={n: v for n, v in self.nodes.items() if n in keep},
            edges={k: e for k, e in self.edges.items() if k[0] in keep and k[1] in keep},
            slices=list(self.slices),
            selection_k=self.selection_k,
        )

    def to_networkx(self, bursts: Mapping[str, Sequence] | None = None) -> nx.Graph:
        g = nx.Graph()
        for n in sorted(self.nodes):
            v = self.nodes[n]
            g.add_node(n, label=v.label, year=v.year if v.year is not None else -1,
                       total_citations=v.total_citations, burst=bool(bursts and bursts.get(n)))
        for (a, b) in sorted(self.edges):
            e = self.edges[(a, b)]
            g.add_edge(a, b, weight=e.weight, first_year=e.first_year if e.first_year is not None else -1)
        return g

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], nodes: Iterable[str] = ()) -> "CoCitationNetwork":
        """Convenience constructor from ``(a, b[, weight[, first_year]])`` tuples."""
        net = cls()
        for n in nodes:
            net.nodes.setdefault(n, Node(n))
        for item in edges:
            a, b = item[0], item[1]
            w = item[2] if len(item) > 2 else 1
            fy = item[3] if len(item) > 3 else None
            net.nodes.setdefault(a, Node(a))
            net.nodes.setdefault(b, Node(b))
            key = (a, b) if a < b else (b, a)
            net.edges[key] = Edge(w, fy)
        return net


def g_index(counts: Sequence[int], k: float = 1) -> int:
    """Largest g with g**2 <= k * (sum of the top-g counts); counts sorted descending."""
    if k < 1:
        raise ConfigError(f"g-index scaling factor must be >= 1, got {k}")
    g = 0
    running = 0
    for i, c in enumerate(counts, start=1):
        running += c
        if i * i <= k * running:
            g = i
    return g


def g_index_select(counts: Mapping[str, int], k: float = 30) -> list[str]:
    """Ids of the top-g items; items tied with the g-th count are all kept.

    Zero-count items are never selected.
    """
    ranked = sorted((x for x in counts if counts[x] > 0), key=lambda x: (-counts[x], x))
    g = g_index([counts[x] for x in ranked], k)
    if g == 0:
        return []
    cutoff = counts[ranked[g - 1]]
    chosen = ranked[:g]
    chosen.extend(x for x in ranked[g:] if counts[x] == cutoff)
    return chosen


def make_slices(years: Iterable[int], length: int = 1) -> list[Slice]:
    years = sorted(set(years))
    if not years:
        return []
    if length < 1:
        raise ConfigError("slice length must be >= 1")
    return [(y, min(y + length - 1, years[-1])) for y in range(years[0], years[-1] + 1, length)]


def _slice_of(year: int, slices: Sequence[Slice]) -> Slice | None:
    for s in slices:
        if s[0] <= year <= s[1]:
            return s
    return None


def select_per_slice(records: Sequence[Record], k: float = 30, slice_length: int = 1,
                     slices: Sequence[Slice] | None = None) -> dict[Slice, list[str]]:
    """Per-slice g-index selection over in-slice citation counts."""
    if k < 1:
        raise ConfigError(f"g-index scaling factor must be >= 1, got {k}")
    if slices is None:
        slices = make_slices((r.year for r in records if r.year is not None), slice_length)
    counts: dict[Slice, Counter] = {s: Counter() for s in slices}
    for r in records:
        if r.year is None:
            continue
        s = _slice_of(r.year, slices)
        if s is not None:
            counts[s].update(set(r.ref_ids))
    return {s: g_index_select(counts[s], k) for s in slices}


def build_cocitation(records: Sequence[Record], selection: Mapping[Slice, Sequence[str]],
                     canon: Mapping[str, CanonicalRef] | None = None, k: int = 30) -> CoCitationNetwork:
    """Count co-citations among each record's references selected in its own slice."""
    slices = sorted(selection)
    chosen = {s: set(ids) for s, ids in selection.items()}
    net = CoCitationNetwork(slices=slices, selection_k=k)
    all_nodes = sorted(set().union(*chosen.values())) if chosen else []
    yearly: dict[str, Counter] = {n: Counter() for n in all_nodes}
    for r in records:
        if r.year is None:
            continue
        for ref in set(r.ref_ids):
            if ref in yearly:
                yearly[ref][r.year] += 1
    for n in all_nodes:
        c = canon.get(n) if canon else None
        net.nodes[n] = Node(
            n,
            label=c.label if c else n,
            year=c.year if c else None,
            total_citations=sum(yearly[n].values()),
            yearly_citations=dict(sorted(yearly[n].items())),
        )
    weights: dict[tuple[str, str], int] = defaultdict(int)
    first: dict[tuple[str, str], int] = {}
    for r in records:
        if r.year is None:
            continue
        s = _slice_of(r.year, slices)
        if s is None:
            continue
        cited = sorted(set(r.ref_ids) & chosen[s])
        for pair in combinations(cited, 2):
            weights[pair] += 1
            if pair not in first or r.year < first[pair]:
                first[pair] = r.year
    for pair in sorted(weights):
        net.edges[pair] = Edge(weights[pair], first[pair])
    return net


def normalize_weights(net: CoCitationNetwork, method: str = "cosine") -> CoCitationNetwork:
    """Rescale edge weights by endpoint citation counts (``cosine`` or ``jaccard``)."""
    out = CoCitationNetwork(dict(net.nodes), {}, list(net.slices), net.selection_k)
    for (a, b), e in net.edges.items():
        ca, cb = net.nodes[a].total_citations, net.nodes[b].total_citations
        if method == "cosine":
            denom = math.sqrt(ca * cb)
        elif method == "jaccard":
            denom = ca + cb - e.weight
        else:
            raise ConfigError(f"unknown normalization {method!r}")
        out.edges[(a, b)] = Edge(e.weight / denom if denom > 0 else 0.0, e.first_year)
    return out


def connected_components(net: CoCitationNetwork) -> list[list[str]]:
    """Components as sorted member lists, largest first."""
    adj = net.adjacency()
    seen: set[str] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            n = stack.pop()
            comp.append(n)
            for m in adj[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def largest_component_share(net: CoCitationNetwork) -> float:
    comps = connected_components(net)
    return len(comps[0]) / len(net.nodes) if comps else 0.0


def as_membership(partition: Mapping[str, int] | Iterable[Iterable[str]]) -> dict[str, int]:
    if isinstance(partition, Mapping):
        return dict(partition)
    return {n: i for i, block in enumerate(partition) for n in block}


def modularity(net: CoCitationNetwork, partition: Mapping[str, int] | Iterable[Iterable[str]]) -> float:
    """Weighted Newman modularity of ``partition`` (a node->cluster map or a list of blocks)."""
    member = as_membership(partition)
    missing = [n for n in net.nodes if n not in member]
    if missing:
        raise ValueError(f"partition does not cover {len(missing)} node(s), e.g. {missing[0]!r}")
    total = net.total_weight
    if total == 0:
        return 0.0
    inside: dict[int, float] = defaultdict(float)
    strength: dict[int, float] = defaultdict(float)
    for (a, b), e in net.edges.items():
        ca, cb = member[a], member[b]
        if ca == cb:
            inside[ca] += e.weight
        strength[ca] += e.weight
        strength[cb] += e.weight
    return sum(inside[c] / total - (strength[c] / (2 * total)) ** 2 for c in strength)


_GRAPHML_KEYS = [
    ("d0", "node", "label", "string"), ("d1", "node", "year", "int"), ("d2", "node", "total_citations", "int"),
    ("d3", "node", "burst", "boolean"), ("d4", "edge", "weight", "double"), ("d5", "edge", "first_year", "int"),
]


def write_graphml(net: CoCitationNetwork, path: str | Path, bursts: Mapping[str, Sequence] | None = None) -> None:
    """GraphML with node label/year/total_citations/burst and edge weight/first_year (-1 when unknown).

    Written directly rather than through networkx, whose writer dominates the
    pipeline runtime on large networks.
    """
    q = quoteattr
    out = ['<?xml version="1.0" encoding="utf-8"?>',
           '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
           'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
           'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
           'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">']
    out += [f'  <key id="{k}" for="{kind}" attr.name="{name}" attr.type="{t}" />' for k, kind, name, t in _GRAPHML_KEYS]
    out.append('  <graph edgedefault="undirected">')
    for n in sorted(net.nodes):
        v = net.nodes[n]
        burst = "true" if bursts and bursts.get(n) else "false"
        out.append(f'    <node id={q(n)}><data key="d0">{escape(v.label)}</data>'
                   f'<data key="d1">{v.year if v.year is not None else -1}</data>'
                   f'<data key="d2">{v.total_citations}</data><data key="d3">{burst}</data></node>')
    for (a, b) in sorted(net.edges):
        e = net.edges[(a, b)]
        out.append(f'    <edge source={q(a)} target={q(b)}><data key="d4">{float(e.weight)!r}</data>'
                   f'<data key="d5">{e.first_year if e.first_year is not None else -1}</data></edge>')
    out += ["  </graph>", "</graphml>", ""]
    Path(path).write_text("\n".join(out), encoding="utf-8")


def write_edge_list(net: CoCitationNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source", "target", "weight", "first_year"])
        for (a, b) in sorted(net.edges):
            e = net.edges[(a, b)]
            w.writerow([a, b, e.weight, "" if e.first_year is None else e.first_year])
