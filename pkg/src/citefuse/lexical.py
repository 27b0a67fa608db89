"""Keyword statistics and co-occurrence word trees."""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .ingest.model import Record


class TermKind(str, enum.Enum):
    KEYWORD = "KEYWORD"
    CATEGORY = "CATEGORY"
    ROOT = "ROOT"


class WordTreeError(ValueError):
    pass


FIELDS = {"DE": "author_keywords", "WC": "subject_categories"}


def fold_term(term: str) -> str:
    return " ".join(term.casefold().split())


def record_terms(record: Record, field: str = "DE") -> set[str]:
    try:
        values = getattr(record, FIELDS[field])
    except KeyError:
        raise ValueError(f"unknown field {field!r}; expected one of {sorted(FIELDS)}") from None
    return {t for t in (fold_term(v) for v in values) if t}


def keyword_frequencies(records: Iterable[Record], field: str = "DE") -> Counter:
    """Counts per (folded term, year); a term counts once per record. Undated records are skipped."""
    out: Counter = Counter()
    for r in records:
        if r.year is None:
            continue
        for t in record_terms(r, field):
            out[(t, r.year)] += 1
    return out


def term_totals(records: Iterable[Record], field: str = "DE") -> Counter:
    out: Counter = Counter()
    for r in records:
        out.update(record_terms(r, field))
    return out


@dataclass
class WordTreeNode:
    term: str
    kind: TermKind
    frequency: int
    weight: float | None = None
    children: list["WordTreeNode"] = field(default_factory=list)

    def walk(self) -> Iterable["WordTreeNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def edges(self) -> Iterable[tuple["WordTreeNode", "WordTreeNode"]]:
        for c in self.children:
            yield self, c
            yield from c.edges()

    def terms(self) -> set[str]:
        return {n.term for n in self.walk() if n.kind is not TermKind.ROOT}

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "kind": self.kind.value,
            "frequency": self.frequency,
            "weight": None if self.weight is None else round(self.weight, 6),
            "children": [c.to_dict() for c in self.children],
        }

    def outline(self, indent: str = "  ") -> str:
        lines = []

        def visit(node: "WordTreeNode", depth: int) -> None:
            lines.append(f"{indent * depth}{node.term} ({node.frequency})")
            for c in node.children:
                visit(c, depth + 1)

        visit(self, 0)
        return "\n".join(lines) + "\n"


def cooccurrence_zscore(c: int, fa: int, fb: int, n: int) -> float:
    """Z-score of a co-occurrence count against random (hypergeometric) placement."""
    if n < 2:
        return 0.0
    mean = fa * fb / n
    var = fa * (fb / n) * (1 - fb / n) * (n - fa) / (n - 1)
    if var <= 0:
        return 0.0
    return (c - mean) / math.sqrt(var)


def build_hierarchy(freq: Mapping[Hashable, int], cooc: Mapping[tuple, int], n_docs: int,
                    weighting: str = "zscore",
                    name: Callable[[Hashable], str] = str) -> dict[Hashable, tuple[Hashable | None, float | None]]:
    """Parent of every term: the strictly more frequent co-occurring term with the largest weight.

    Ties go to the more frequent candidate, then the lexicographically smaller
    name. Terms with no positive-weight candidate map to ``(None, None)``.
    """
    def pair(a, b) -> int:
        return cooc.get((a, b), 0) or cooc.get((b, a), 0)

    neighbours: dict[Hashable, list[Hashable]] = {t: [] for t in freq}
    for (a, b), c in cooc.items():
        if c > 0 and a in freq and b in freq and a != b:
            neighbours[a].append(b)
            neighbours[b].append(a)
    parents = {}
    for t in sorted(freq, key=lambda x: (-freq[x], name(x))):
        best = None
        for u in set(neighbours[t]):
            if freq[u] <= freq[t]:
                continue
            c = pair(t, u)
            if weighting == "zscore":
                w = cooccurrence_zscore(c, freq[t], freq[u], n_docs)
            elif weighting == "raw":
                w = float(c)
            else:
                raise ValueError(f"unknown weighting {weighting!r}")
            if w <= 0:
                continue
            key = (-w, -freq[u], name(u))
            if best is None or key < best[0]:
                best = (key, u, w)
        parents[t] = (best[1], best[2]) if best else (None, None)
    return parents


def _assemble(freq: Mapping[Hashable, int], parents: Mapping, kind_of: Callable, name: Callable,
              n_docs: int) -> WordTreeNode:
    ordered = sorted(freq, key=lambda x: (-freq[x], name(x)))
    top = freq[ordered[0]]
    tied_top = [t for t in ordered if freq[t] == top]
    nodes = {t: WordTreeNode(name(t), kind_of(t), freq[t]) for t in ordered}
    if len(tied_top) == 1:
        root = nodes[ordered[0]]
        root_key = ordered[0]
    else:
        root = WordTreeNode("*", TermKind.ROOT, max(n_docs, top))
        root_key = None
    for t in ordered:
        if t == root_key:
            continue
        parent, weight = parents[t]
        node = nodes[t]
        node.weight = weight
        (nodes[parent] if parent is not None else root).children.append(node)
    for n in root.walk():
        n.children.sort(key=lambda c: (c.weight is None, -(c.weight or 0.0), -c.frequency, c.term))
    return root


def _docs_and_counts(docs: Sequence[set], vocab: set) -> tuple[Counter, Counter]:
    freq: Counter = Counter()
    cooc: Counter = Counter()
    for d in docs:
        present = sorted((t for t in d if t in vocab), key=repr)
        freq.update(present)
        cooc.update(combinations(present, 2))
    return freq, cooc


def build_word_tree(records: Iterable[Record], field: str = "DE", min_frequency: int = 1,
                    weighting: str = "zscore") -> WordTreeNode:
    """Word tree over terms whose record frequency reaches ``min_frequency``."""
    docs = [record_terms(r, field) for r in records]
    docs = [d for d in docs if d]
    totals = Counter(t for d in docs for t in d)
    vocab = {t for t, n in totals.items() if n >= min_frequency}
    if not vocab:
        raise WordTreeError(f"no {field} term reaches frequency {min_frequency}")
    freq, cooc = _docs_and_counts(docs, vocab)
    parents = build_hierarchy(freq, cooc, len(docs), weighting)
    kind = TermKind.CATEGORY if field == "WC" else TermKind.KEYWORD
    return _assemble(freq, parents, lambda t: kind, str, len(docs))


def hybrid_tree(records: Iterable[Record], category_min: int = 3, keyword_min: int = 1,
                weighting: str = "zscore") -> WordTreeNode:
    """Word tree mixing subject categories and author keywords."""
    docs = []
    for r in records:
        d = {(TermKind.CATEGORY, t) for t in record_terms(r, "WC")}
        d |= {(TermKind.KEYWORD, t) for t in record_terms(r, "DE")}
        if d:
            docs.append(d)
    totals = Counter(t for d in docs for t in d)
    vocab = {t for t, n in totals.items()
             if n >= (category_min if t[0] is TermKind.CATEGORY else keyword_min)}
    if not vocab:
        raise WordTreeError("no category or keyword reaches its frequency threshold")
    freq, cooc = _docs_and_counts(docs, vocab)

    def name(t):
        return t[1]

    def order_name(t):
        return f"{t[1]}\x00{t[0].value}"

    parents = build_hierarchy(freq, cooc, len(docs), weighting, name=order_name)
    return _assemble(freq, parents, lambda t: t[0], name, len(docs))


def wordtree_document(root: WordTreeNode) -> dict:
    return {"schema": "wordtree/1", "root": root.to_dict()}
