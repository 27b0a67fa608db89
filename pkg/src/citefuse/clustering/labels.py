"""Cluster labels from the titles of citing records: log-likelihood ratio and LSI."""
from __future__ import annotations

import math
import re
from collections import Counter
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import svds

from ..ingest.model import Record

STOP_WORDS = frozenset("""
a about above after again against all also am an and any are as at be because been before being
below between both but by can could did do does doing down during each few for from further had
has have having he her here hers herself him himself his how i if in into is it its itself just
me more most my myself no nor not now of off on once only or other our ours ourselves out over own
same she should so some such than that the their theirs them themselves then there these they this
those through to too under until up upon very via was we were what when where which while who whom
why will with within without would you your yours yourself yourselves using based towards toward
new study analysis case approach among vs versus
""".split())

_WORD = re.compile(r"[a-z0-9][a-z0-9\-']*[a-z0-9]|[a-z]")


def title_terms(title: str, bigrams: bool = True) -> list[str]:
    """Stop-worded, case-folded unigrams and bigrams. Bigrams never span a stop word."""
    words = _WORD.findall(title.casefold())
    terms = [w for w in words if w not in STOP_WORDS and not w.isdigit()]
    if bigrams:
        for a, b in zip(words, words[1:]):
            if a in STOP_WORDS or b in STOP_WORDS or a.isdigit() or b.isdigit():
                continue
            terms.append(f"{a} {b}")
    return terms


def _xlogx_ratio(o: float, e: float) -> float:
    return o * math.log(o / e) if o > 0 else 0.0


def llr(a: int, b: int, c: int, d: int) -> float:
    """Dunning's G-squared for the 2x2 table ``[[a, b], [c, d]]``."""
    n = a + b + c + d
    if n == 0:
        return 0.0
    rows = (a + b, c + d)
    cols = (a + c, b + d)
    g = 0.0
    for o, r, col in ((a, 0, 0), (b, 0, 1), (c, 1, 0), (d, 1, 1)):
        e = rows[r] * cols[col] / n
        g += _xlogx_ratio(o, e)
    return max(2.0 * g, 0.0)


def label_llr(cluster_docs: Sequence[Record], background: Sequence[Record],
              top: int | None = None) -> list[tuple[str, float]]:
    """Rank title terms by association with the cluster's citing records.

    ``background`` is the wider set of citing records; those not in
    ``cluster_docs`` form the comparison group. Terms used relatively less
    inside the cluster than outside are dropped.
    """
    inside_ids = {r.id for r in cluster_docs}
    inside = [set(title_terms(r.title)) for r in cluster_docs if r.title]
    outside = [set(title_terms(r.title)) for r in background if r.title and r.id not in inside_ids]
    if not inside:
        return []
    n_in, n_out = len(inside), len(outside)
    df_in: Counter = Counter(t for terms in inside for t in terms)
    df_out: Counter = Counter(t for terms in outside for t in terms)
    scored = []
    for term, a in df_in.items():
        b = df_out.get(term, 0)
        if n_out and a / n_in < b / n_out:
            continue
        scored.append((term, llr(a, b, n_in - a, n_out - b)))
    scored.sort(key=lambda ts: (-round(ts[1], 9), -df_in[ts[0]], ts[0]))
    return scored[:top] if top else scored


def tfidf_matrix(docs: Sequence[Iterable[str]]) -> tuple[sparse.csr_matrix, list[str]]:
    """Term x document TF-IDF matrix with smoothed idf ``ln((1+N)/(1+df)) + 1``."""
    counts = [Counter(d) for d in docs]
    vocab = sorted(set().union(*counts)) if counts else []
    index = {t: i for i, t in enumerate(vocab)}
    rows, cols, vals = [], [], []
    for j, c in enumerate(counts):
        for t, n in c.items():
            rows.append(index[t])
            cols.append(j)
            vals.append(float(n))
    m = sparse.csr_matrix((vals, (rows, cols)), shape=(len(vocab), len(docs)))
    df = np.bincount(np.asarray(rows, dtype=int), minlength=len(vocab))
    idf = np.log((1 + len(docs)) / (1 + df)) + 1.0
    return sparse.csr_matrix(sparse.diags(idf) @ m), vocab


def lsi_dimensions(docs: Sequence[Iterable[str]], max_rank: int = 5,
                   dense_limit: int = 60) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Truncated SVD of the TF-IDF matrix: (term loadings, singular values, vocab).

    Singular values come back non-increasing; dimensions past the numerical
    rank are dropped.
    """
    m, vocab = tfidf_matrix(docs)
    if m.nnz == 0:
        return np.zeros((len(vocab), 0)), np.zeros(0), vocab
    if min(m.shape) <= dense_limit:
        u, s, _ = np.linalg.svd(m.toarray(), full_matrices=False)
    else:
        k = min(max_rank + 1, min(m.shape) - 1)
        v0 = np.ones(min(m.shape))
        u, s, _ = svds(m, k=k, v0=v0)
        order = np.argsort(-s, kind="stable")
        u, s = u[:, order], s[order]
    tol = s[0] * max(m.shape) * np.finfo(float).eps
    rank = int((s > tol).sum())
    r = min(max_rank, rank)
    return u[:, :r], s[:r], vocab


def label_lsi(cluster_docs: Sequence[Record], dimensions: int = 2, top: int = 3) -> list[list[str]]:
    """Top-|loading| title terms for the leading LSI dimensions (empty lists past the rank)."""
    docs = [title_terms(r.title) for r in cluster_docs if r.title]
    loadings, _, vocab = lsi_dimensions(docs)
    out: list[list[str]] = []
    for d in range(dimensions):
        if d >= loadings.shape[1]:
            out.append([])
            continue
        col = np.abs(loadings[:, d])
        order = sorted(range(len(vocab)), key=lambda i: (-round(float(col[i]), 12), vocab[i]))
        out.append([vocab[i] for i in order[:top] if col[i] > 1e-12])
    return out
