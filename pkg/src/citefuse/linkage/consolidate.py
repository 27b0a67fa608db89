"""Consolidation of cited-reference variants into canonical references."""
from __future__ import annotations

import csv
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, repeat
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..ingest.model import CitedRef, Record, fold
from .merge import UnlinkableError, composite_key
from .similarity import IncomparableError, jaro_winkler, overall_similarity
from .unionfind import UnionFind

THRESHOLD = 0.80
SCHEMA = "canonref/1"

_FIELDS = ("author_surname", "author_initials", "year", "source_name", "title", "volume", "first_page", "doi")


@dataclass
class CanonicalRef:
    id: str
    author_surname: str | None
    author_initials: str | None
    year: int | None
    source_name: str | None
    title: str | None
    volume: str | None
    first_page: str | None
    doi: str | None
    variants: list[CitedRef] = field(default_factory=list)
    citing_ids: set[str] = field(default_factory=set)
    yearly_citations: dict[int, int] = field(default_factory=dict)
    n_citations: int = 0

    @property
    def author(self) -> str:
        return f"{self.author_surname or ''} {self.author_initials or ''}".strip()

    @property
    def label(self) -> str:
        """WoS-style one-line description, e.g. ``Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569``."""
        parts = [self.author] if self.author else []
        if self.year is not None:
            parts.append(str(self.year))
        if self.source_name:
            parts.append(self.source_name)
        if self.volume:
            parts.append(f"V{self.volume}")
        if self.first_page:
            parts.append(f"P{self.first_page}")
        return ", ".join(parts)

    @property
    def total_citations(self) -> int:
        return len(self.citing_ids)

    def as_cited_ref(self) -> CitedRef:
        return CitedRef(raw=self.label or self.variants[0].raw, **{f: getattr(self, f) for f in _FIELDS})

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "id": self.id,
            **{f: getattr(self, f) for f in _FIELDS},
            "label": self.label,
            "variants": [v.to_dict() for v in self.variants],
            "citing_ids": sorted(self.citing_ids),
            "yearly_citations": {str(y): n for y, n in sorted(self.yearly_citations.items())},
            "n_citations": self.n_citations,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CanonicalRef":
        return cls(
            id=data["id"],
            **{f: data.get(f) for f in _FIELDS},
            variants=[CitedRef.from_dict(v) for v in data.get("variants", [])],
            citing_ids=set(data.get("citing_ids", [])),
            yearly_citations={int(y): n for y, n in data.get("yearly_citations", {}).items()},
            n_citations=data.get("n_citations", 0),
        )


def _signature(ref: CitedRef) -> tuple:
    return (ref.author_key, ref.year, ref.source_key, (ref.volume or "").casefold(),
            (ref.first_page or "").casefold(), fold(ref.title))


def _pick(values: Iterable, weights: Iterable[int] | None = None) -> object | None:
    """Most frequent present value, then longest, then lexicographically smallest."""
    counts: Counter = Counter()
    for v, w in zip(values, weights if weights is not None else repeat(1)):
        if v not in (None, ""):
            counts[v] += w
    if not counts:
        return None
    return min(counts, key=lambda v: (-counts[v], -len(str(v)), str(v)))


@lru_cache(maxsize=1 << 18)
def _cached_jw(x: str, y: str) -> float:
    return jaro_winkler(x, y)


def _jw(x: str, y: str) -> float:
    return _cached_jw(x, y) if x <= y else _cached_jw(y, x)


def _link_block(members: Sequence[tuple], reps: Mapping[tuple, CitedRef], uf: UnionFind,
                threshold: float) -> None:
    for s1, s2 in combinations(members, 2):
        if uf.find(s1) == uf.find(s2):
            continue
        try:
            sim = overall_similarity(reps[s1], reps[s2], _jw)
        except IncomparableError:
            continue
        if sim > threshold:
            uf.union(s1, s2)


def link_variants(refs: Sequence[CitedRef], threshold: float = THRESHOLD) -> list[list[int]]:
    """Group reference indices into single-link components of similarity > ``threshold``.

    Candidates are blocked on (surname, first initial, year); references with no
    year are compared against every year block of their author. References
    without an author only merge with identical signatures.
    """
    sig_cache: dict[CitedRef, tuple] = {}
    sig_of = [sig_cache[r] if r in sig_cache else sig_cache.setdefault(r, _signature(r)) for r in refs]
    reps: dict[tuple, CitedRef] = {}
    for r, s in zip(refs, sig_of):
        reps.setdefault(s, r)
    uf = UnionFind(sorted(reps, key=repr))
    blocks: dict[tuple, dict[int | None, list[tuple]]] = defaultdict(lambda: defaultdict(list))
    for s, r in reps.items():
        try:
            key = composite_key(r)
        except UnlinkableError:
            continue
        blocks[(key.surname, key.first_initial)][key.year].append(s)
    for author_block in blocks.values():
        undated = sorted(author_block.get(None, []), key=repr)
        for year, members in author_block.items():
            if year is None:
                continue
            _link_block(sorted(members, key=repr) + undated, reps, uf, threshold)
        if undated and len(author_block) == 1:
            _link_block(undated, reps, uf, threshold)
    groups: dict[object, list[int]] = defaultdict(list)
    for i, s in enumerate(sig_of):
        groups[uf.find(s)].append(i)
    return list(groups.values())


def consolidate_refs(
    refs: Sequence[tuple[CitedRef, str]],
    years: Mapping[str, int | None] | None = None,
    threshold: float = THRESHOLD,
) -> list[CanonicalRef]:
    """Collapse (reference, citing record id) pairs into canonical references.

    Canonical ids are assigned after sorting the groups on their canonical
    fields, so the result does not depend on input order.
    """
    years = years or {}
    cited = [r for r, _ in refs]
    out = []
    for group in link_variants(cited, threshold):
        distinct = Counter(cited[i] for i in group)
        variants, weights = list(distinct), list(distinct.values())
        fields = {f: _pick([getattr(v, f) for v in variants], weights)
                  for f in _FIELDS if f not in ("author_surname", "author_initials")}
        surname = _pick([v.author_surname for v in variants], weights)
        same = [(v.author_initials, w) for v, w in zip(variants, weights) if v.author_surname == surname]
        initials = _pick([i for i, _ in same], [w for _, w in same]) or \
            _pick([v.author_initials for v in variants], weights)
        citing = {refs[i][1] for i in group}
        yearly = Counter(years[c] for c in citing if years.get(c) is not None)
        out.append(CanonicalRef(
            id="",
            author_surname=surname,
            author_initials=initials,
            variants=sorted(variants, key=lambda v: v.raw),
            citing_ids=citing,
            yearly_citations=dict(sorted(yearly.items())),
            n_citations=len(group),
            **fields,
        ))

    def sort_key(c: CanonicalRef) -> tuple:
        return (fold(c.author_surname), c.author_initials or "", c.year or 0, fold(c.source_name),
                c.volume or "", c.first_page or "", fold(c.title), [v.raw for v in c.variants])

    out.sort(key=sort_key)
    for n, c in enumerate(out):
        c.id = f"R{n:06d}"
    return out


def collect_refs(records: Iterable[Record]) -> list[tuple[CitedRef, str]]:
    return [(ref, r.id) for r in records for ref in r.cited_refs]


def attach_ref_ids(records: Sequence[Record], canon: Sequence[CanonicalRef]) -> list[Record]:
    """Copy records with ``ref_ids`` set to the distinct canonical ids they cite, in citation order."""
    lookup = {v.raw: c.id for c in canon for v in c.variants}
    out = []
    for r in records:
        seen: dict[str, None] = {}
        for ref in r.cited_refs:
            cid = lookup.get(ref.raw)
            if cid is not None:
                seen.setdefault(cid)
        out.append(r.copy(ref_ids=list(seen)))
    return out


def medoid_similarities(c: CanonicalRef) -> dict[str, float | None]:
    """Similarity of each variant to the group's medoid (highest mean similarity)."""
    distinct = {_signature(v): v for v in c.variants}
    reps = list(distinct.values())

    def sim(a: CitedRef, b: CitedRef) -> float | None:
        try:
            return overall_similarity(a, b, _jw)
        except IncomparableError:
            return None

    if len(reps) == 1:
        medoid = reps[0]
    else:
        def mean_sim(a: CitedRef) -> float:
            vals = [s for b in reps if b is not a and (s := sim(a, b)) is not None]
            return sum(vals) / len(vals) if vals else 0.0
        medoid = max(sorted(reps, key=lambda v: v.raw), key=mean_sim)
    return {v.raw: (1.0 if _signature(v) == _signature(medoid) else sim(v, medoid)) for v in c.variants}


def dump_canonrefs(canon: Iterable[CanonicalRef], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for c in canon:
            fh.write(json.dumps(c.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")


def load_canonrefs(path: str | Path) -> list[CanonicalRef]:
    with open(path, encoding="utf-8") as fh:
        return [CanonicalRef.from_dict(json.loads(line)) for line in fh if line.strip()]


def write_variant_map(canon: Iterable[CanonicalRef], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["variant_raw", "canonical_id", "similarity_to_medoid"])
        for c in canon:
            sims = medoid_similarities(c)
            for v in c.variants:
                s = sims[v.raw]
                w.writerow([v.raw, c.id, "" if s is None else f"{s:.6f}"])
