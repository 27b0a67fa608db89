import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citefuse.lexical import (
    TermKind, WordTreeError, build_hierarchy, build_word_tree, cooccurrence_zscore, hybrid_tree, keyword_frequencies,
    wordtree_document,
)
from citefuse.linkage import merge_source_records

from .conftest import make_record


def rec(i, keywords=(), categories=(), year=2005):
    return make_record(f"r{i}", year, author_keywords=list(keywords), subject_categories=list(categories))


def z_oracle(c, fa, fb, n):
    var = fa * fb * (n - fa) * (n - fb) / (n * n * (n - 1))
    return 0.0 if var <= 0 else (c - fa * fb / n) / math.sqrt(var)


def parent_oracle(docs):
    """Every parent by scanning all strictly more frequent co-occurring terms."""
    freq = {t: sum(t in d for d in docs) for d in docs for t in d}
    out = {}
    for t in freq:
        scored = []
        for u in freq:
            c = sum(t in d and u in d for d in docs)
            if freq[u] > freq[t] and c > 0:
                w = z_oracle(c, freq[t], freq[u], len(docs))
                if w > 0:
                    scored.append((-w, -freq[u], u))
        out[t] = min(scored)[2] if scored else None
    return out


def test_keyword_frequencies():
    recs = [rec(1, ["Bibliometrics", "HistCite"]), rec(2, ["bibliometrics", "histcite"]), rec(3)]
    assert keyword_frequencies(recs) == {("bibliometrics", 2005): 2, ("histcite", 2005): 2}
    with pytest.raises(ValueError):
        keyword_frequencies(recs, "XX")


def test_three_term_example():
    freq = {"A": 10, "B": 5, "C": 3}
    cooc = {("A", "B"): 4, ("B", "C"): 3, ("A", "C"): 1}
    parents = build_hierarchy(freq, cooc, 20)
    assert parents["A"] == (None, None)
    assert parents["B"][0] == "A"
    assert parents["C"][0] == "B"
    assert parents["C"][1] == pytest.approx(z_oracle(3, 3, 5, 20))
    assert build_hierarchy(freq, cooc, 20, weighting="raw")["C"] == ("B", 3.0)


def test_zscore_formula():
    assert cooccurrence_zscore(3, 3, 5, 20) == pytest.approx(z_oracle(3, 3, 5, 20))
    assert cooccurrence_zscore(1, 1, 1, 1) == 0.0


def test_parents_match_oracle():
    rng = random.Random(6)
    vocab = [f"k{i}" for i in range(9)]
    for _ in range(200):
        docs = [set(rng.sample(vocab, rng.randint(1, 4))) for _ in range(rng.randint(3, 25))]
        recs = [rec(i, sorted(d)) for i, d in enumerate(docs)]
        root = build_word_tree(recs)
        want = parent_oracle(docs)
        got = {c.term: (p.term if p.kind is not TermKind.ROOT else None) for p, c in root.edges()}
        for t, p in want.items():
            if t == root.term:
                continue
            if p is not None:
                assert got[t] == p
            else:
                assert got[t] is None or root.kind is not TermKind.ROOT and got[t] == root.term


def assert_valid_tree(root, n_terms):
    seen = [n.term for n in root.walk() if n.kind is not TermKind.ROOT]
    assert len(seen) == len(set(seen)) == n_terms
    for parent, child in root.edges():
        if parent.kind is not TermKind.ROOT:
            assert parent.frequency > child.frequency
    for node in root.walk():
        weights = [c.weight for c in node.children if c.weight is not None]
        assert all(w > 0 for w in weights)
        assert weights == sorted(weights, reverse=True)


@given(st.lists(st.sets(st.sampled_from("abcdefgh"), max_size=5), min_size=1, max_size=30))
@settings(max_examples=200)
def test_tree_invariants(docs):
    recs = [rec(i, sorted(d)) for i, d in enumerate(docs)]
    terms = set().union(*docs)
    if not terms:
        with pytest.raises(WordTreeError):
            build_word_tree(recs)
        return
    root = build_word_tree(recs)
    assert_valid_tree(root, len(terms))
    shuffled = random.Random(0).sample(recs, len(recs))
    assert build_word_tree(shuffled).to_dict() == root.to_dict()


def test_singleton_tree():
    root = build_word_tree([rec(1, ["histcite"]), rec(2, ["HistCite"])])
    assert (root.term, root.frequency, root.children) == ("histcite", 2, [])
    with pytest.raises(WordTreeError):
        build_word_tree([rec(1, ["histcite"])], min_frequency=2)


def test_threshold_monotone_on_bundled(bundled):
    wos, scopus, _ = bundled
    merged = merge_source_records(wos, scopus)
    t30, t40 = build_word_tree(merged, min_frequency=30), build_word_tree(merged, min_frequency=40)
    assert t40.terms() < t30.terms()
    assert t30.term == "citation analysis"
    for root in (t30, t40):
        for parent, child in root.edges():
            assert parent.frequency > child.frequency


def test_hybrid_examples():
    recs = [rec(i, ["k"] if i < 2 else [], ["X"]) for i in range(5)]
    root = hybrid_tree(recs, category_min=3, keyword_min=1)
    assert (root.term, root.kind) == ("x", TermKind.CATEGORY)
    assert [(c.term, c.kind) for c in root.children] == [("k", TermKind.KEYWORD)]
    assert hybrid_tree(recs, category_min=3, keyword_min=3).children == []
    two = [rec(i, [], ["Y"]) for i in range(2)]
    root = hybrid_tree(recs + two, category_min=3, keyword_min=1)
    assert "y" not in root.terms()


def test_hybrid_empty_vocabulary():
    with pytest.raises(WordTreeError):
        hybrid_tree([rec(1, ["k"], ["X"])], category_min=3, keyword_min=3)


def test_tied_top_terms_share_synthetic_root():
    recs = [rec(1, ["a"]), rec(2, ["b"])]
    root = build_word_tree(recs)
    assert root.kind is TermKind.ROOT
    assert sorted(c.term for c in root.children) == ["a", "b"]
    doc = wordtree_document(root)
    assert doc["schema"] == "wordtree/1"
    assert root.outline().splitlines()[1:] == ["  a (1)", "  b (1)"]
