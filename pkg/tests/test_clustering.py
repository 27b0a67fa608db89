import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citefuse.clustering import (
    Cluster, ClusteringError, DrillDownError, Partition, analyze, cluster_network, drill_down, drill_path,
    label_llr, label_lsi, llr, silhouettes, title_terms,
)
from citefuse.clustering.analysis import cluster_stats, round_half_up
from citefuse.clustering.labels import lsi_dimensions
from citefuse.clustering.partition import _cnm_dense, greedy_modularity
from citefuse.network import CoCitationNetwork, Node, modularity

from .conftest import make_record

TRIANGLES = [("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")]


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partition(net):
    return max(set_partitions(sorted(net.nodes)), key=lambda p: modularity(net, p))


def canon(blocks):
    return sorted(sorted(b) for b in blocks)


def test_two_triangles():
    part = cluster_network(CoCitationNetwork.from_edges(TRIANGLES))
    assert canon(part.clusters) == [["a", "b", "c"], ["d", "e", "f"]]


def test_k5_is_one_cluster_like_brute_force():
    net = CoCitationNetwork.from_edges(itertools.combinations("abcde", 2))
    assert canon(best_partition(net)) == [list("abcde")]
    assert canon(greedy_modularity(net)) == [list("abcde")]


def test_barbell_recovers_two_blocks_like_brute_force():
    g = [(a, b) for a, b in itertools.combinations("abcd", 2)] + \
        [(a, b) for a, b in itertools.combinations("efgh", 2)] + [("d", "e")]
    net = CoCitationNetwork.from_edges(g)
    expected = [list("abcd"), list("efgh")]
    assert canon(best_partition(net)) == expected
    assert canon(greedy_modularity(net)) == expected


def test_empty_network_rejected():
    with pytest.raises(ClusteringError):
        cluster_network(CoCitationNetwork())


def test_small_blocks_become_noise():
    p = Partition([["a", "b", "c"], ["d"], ["e", "f"]], min_size=3)
    assert p.clusters == [["a", "b", "c"]]
    assert p.noise == [["e", "f"], ["d"]]


def _dense_cnm_reference(e):
    """Plain CNM: recompute every gain after every merge."""
    e = e.copy()
    a = e.sum(axis=1)
    members = [[i] for i in range(len(e))]
    while True:
        d = 2 * (e - np.outer(a, a))
        d[e <= 0] = -np.inf
        np.fill_diagonal(d, -np.inf)
        i, j = np.unravel_index(d.argmax(), d.shape)
        if not d[i, j] > 0:
            break
        keep, gone = min(i, j), max(i, j)
        e[keep] += e[gone]
        e[:, keep] += e[:, gone]
        e[gone] = 0
        e[:, gone] = 0
        a[keep] += a[gone]
        a[gone] = 0
        members[keep] += members[gone]
        members[gone] = []
    return canon(m for m in members if m)


def test_incremental_cnm_matches_plain_recomputation():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(2, 120)
        e = np.zeros((n, n))
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < 0.15:
                e[i, j] = e[j, i] = rng.randint(1, 4)
        if not e.any():
            continue
        e /= e.sum()
        assert canon(_cnm_dense(e.copy())) == _dense_cnm_reference(e)


def test_cnm_agrees_with_networkx_without_ties():
    import networkx as nx
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(5, 60)
        edges = [(f"n{i:02d}", f"n{j:02d}", rng.random() + 0.01)
                 for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.2]
        net = CoCitationNetwork.from_edges(edges, [f"n{i:02d}" for i in range(n)])
        if not net.edges:
            continue
        ref = nx.community.greedy_modularity_communities(net.to_networkx(), weight="weight")
        assert canon(greedy_modularity(net)) == canon(ref)


def profile_oracle(net, order):
    idx = {n: i for i, n in enumerate(order)}
    rows = []
    for n in order:
        row = [0.0] * len(order)
        for (a, b), e in net.edges.items():
            if a == n:
                row[idx[b]] = e.weight
            elif b == n:
                row[idx[a]] = e.weight
        row[idx[n]] = net.nodes[n].total_citations or (max(row) if any(row) else 1.0)
        rows.append(row)
    return rows


def silhouette_oracle(net, blocks):
    order = [n for b in blocks for n in b]
    prof = dict(zip(order, profile_oracle(net, order)))

    def dist(x, y):
        if x == y:
            return 0.0
        p, q = prof[x], prof[y]
        cos = sum(a * b for a, b in zip(p, q)) / math.sqrt(sum(a * a for a in p) * sum(b * b for b in q))
        d = 1 - cos
        return 0.0 if abs(d) < 1e-12 else min(max(d, 0.0), 2.0)

    out = {}
    for b in blocks:
        for x in b:
            if len(b) == 1:
                out[x] = 0.0
                continue
            a = sum(dist(x, y) for y in b if y != x) / (len(b) - 1)
            bb = min(sum(dist(x, y) for y in other) / len(other) for other in blocks if other is not b)
            out[x] = 0.0 if max(a, bb) == 0 else (bb - a) / max(a, bb)
    return out


def test_silhouette_perfect_separation():
    net = CoCitationNetwork.from_edges(TRIANGLES)
    s = silhouettes(net, [["a", "b", "c"], ["d", "e", "f"]])
    assert all(v == 1.0 for v in s.values())


def test_silhouette_equidistant_member_scores_zero():
    # x's profile is orthogonal to every other profile: a == b == 1
    net = CoCitationNetwork.from_edges([("a", "b"), ("c", "d")], ["x"])
    s = silhouettes(net, [["a", "b", "x"], ["c", "d"]])
    assert s["x"] == 0.0


def test_silhouette_four_node_oracle():
    rng = random.Random(12)
    nodes = list("pqrs")
    for _ in range(200):
        edges = [(a, b, rng.randint(1, 5)) for a, b in itertools.combinations(nodes, 2) if rng.random() < 0.7]
        net = CoCitationNetwork.from_edges(edges, nodes)
        for n in nodes:
            net.nodes[n].total_citations = rng.choice([0, rng.randint(1, 6)])
        cut = rng.randint(1, 3)
        shuffled = rng.sample(nodes, 4)
        blocks = [shuffled[:cut], shuffled[cut:]]
        got = silhouettes(net, blocks)
        want = silhouette_oracle(net, blocks)
        for n in nodes:
            assert abs(got[n] - want[n]) < 1e-12


def test_silhouette_needs_two_clusters():
    with pytest.raises(ClusteringError):
        silhouettes(CoCitationNetwork.from_edges(TRIANGLES), [list("abcdef")])


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(1, 9)), max_size=30),
       st.lists(st.integers(0, 3), min_size=10, max_size=10))
@settings(max_examples=200)
def test_silhouette_bounded(edges, labels):
    nodes = [f"n{i}" for i in range(10)]
    net = CoCitationNetwork.from_edges([(f"n{a}", f"n{b}", w) for a, b, w in edges if a != b], nodes)
    blocks = [[n for n, l in zip(nodes, labels) if l == c] for c in range(4)]
    blocks = [b for b in blocks if b]
    if len(blocks) < 2:
        return
    assert all(-1.0 <= v <= 1.0 for v in silhouettes(net, blocks).values())


def test_llr_values():
    assert llr(10, 0, 0, 10) == pytest.approx(2 * 20 * math.log(2), abs=1e-9)
    assert llr(10, 0, 0, 10) == pytest.approx(27.7259, abs=1e-3)
    assert abs(llr(5, 5, 5, 5)) < 1e-12
    assert abs(llr(3, 6, 7, 14)) < 1e-12


def test_label_llr_prefers_cluster_term():
    inside = [make_record(f"i{i}", title=f"Altmetrics of tweets {i}") for i in range(5)]
    outside = [make_record(f"o{i}", title=f"Impact factor of journals {i}") for i in range(5)]
    labels = label_llr(inside, inside + outside)
    assert labels[0][0] in {"altmetrics", "tweets", "altmetrics tweets"}
    assert label_llr([], inside) == []


def test_title_terms():
    assert title_terms("The h-index of journals") == ["h-index", "journals"]
    assert title_terms("bursty citation network") == ["bursty", "citation", "network", "bursty citation",
                                                      "citation network"]


def test_lsi_rank_one():
    docs = [make_record(f"d{i}", title="apple apple pie") for i in range(4)]
    dims = label_lsi(docs)
    assert dims[0][0] == "apple"
    assert dims[1] == []


def test_lsi_orthogonal_groups_against_dense_svd():
    titles = ["apple orchard harvest", "apple orchard", "apple harvest",
              "bridge river steel", "bridge steel", "bridge river crossing"]
    docs = [title_terms(t, bigrams=False) for t in titles]
    loadings, s, vocab = lsi_dimensions(docs)
    # oracle: build the smoothed tf-idf matrix by hand
    n = len(docs)
    m = np.zeros((len(vocab), n))
    for j, d in enumerate(docs):
        for t in d:
            m[vocab.index(t), j] += 1
    df = (m > 0).sum(axis=1)
    m = m * (np.log((1 + n) / (1 + df)) + 1)[:, None]
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    assert np.allclose(s, sv[:len(s)])
    for d in range(2):
        assert np.allclose(np.abs(loadings[:, d]), np.abs(u[:, d]))
    groups = {t: ("a" if t in "apple orchard harvest" else "b") for t in vocab}
    labels = label_lsi([make_record(f"d{i}", title=t) for i, t in enumerate(titles)], top=1)
    first, second = labels[0][0], labels[1][0]
    assert {groups[first.split()[0]], groups[second.split()[0]]} == {"a", "b"}


def _net_with_years(years):
    net = CoCitationNetwork()
    for i, y in enumerate(years):
        net.nodes[f"n{i}"] = Node(f"n{i}", year=y)
    return net


@pytest.mark.parametrize("years,mean,shown", [([1953, 1955, 1957], 1955, 1955), ([2006], 2006, 2006),
                                              ([1960, 1961], 1960.5, 1961)])
def test_mean_year(years, mean, shown):
    net = _net_with_years(years)
    _, _, m = cluster_stats(list(net.nodes), net)
    assert m == mean
    assert Cluster(0, list(net.nodes), mean_year=m).display_year == shown
    assert round_half_up(2.5) == 3


def _topic_records(n_topics=2, per_topic=30, seed=1):
    rng = random.Random(seed)
    recs = []
    for t in range(n_topics):
        pool = [f"T{t}R{i}" for i in range(8)]
        for i in range(per_topic):
            refs = rng.sample(pool, 5)
            r = make_record(f"t{t}-{i}", 2000 + i % 5, refs, title=f"topic{t} study {rng.choice('xyz')}")
            recs.append(r.copy(ref_ids=refs))
    return recs


def test_analyze_and_paths():
    a = analyze(_topic_records())
    assert [c.path for c in a.clusters] == ["#0", "#1"]
    assert {c.llr_label for c in a.clusters} == {"topic0", "topic1"}
    assert a.modularity == pytest.approx(modularity(a.network, a.partition.blocks))


def test_drill_down_whole_corpus_is_restriction_noop():
    recs = _topic_records(n_topics=1, per_topic=40)
    a = analyze(recs, min_size=2)
    sub = drill_down(a.clusters[0], recs, min_size=2)
    assert len(sub.records) == len(recs)
    assert all(c.path.startswith("#0#") for c in sub.clusters)


def test_drill_path_levels_and_errors():
    recs = _topic_records(n_topics=2, per_topic=40)
    a = analyze(recs)
    sub = drill_path(a, "#0")
    assert all(c.path.startswith("#0#") for c in sub.clusters)
    if sub.clusters:
        deeper = drill_path(a, "#0#0", min_records=2)
        assert all(c.path.startswith("#0#0#") for c in deeper.clusters)
    with pytest.raises(KeyError, match="valid paths: #0, #1"):
        drill_path(a, "#7")
    with pytest.raises(DrillDownError):
        drill_down(Cluster(0, ["x", "y"], path="#9"), recs)
    with pytest.raises(DrillDownError):
        drill_path(a, "#0", min_records=10_000)
