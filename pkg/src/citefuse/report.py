"""Rankings, tallies, cross-source comparison and dual-map overlay arcs."""
from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .ingest.model import Record, Source, fold
from .linkage.consolidate import CanonicalRef
from .linkage.similarity import jaro_winkler

UNKNOWN = "(unknown)"
JOURNAL_MATCH = 0.95


def rank_most_cited(records: Iterable[Record], n: int) -> list[Record]:
    """Records by the larger of their per-source citation counts; ties by year, then title."""
    ranked = sorted(records, key=lambda r: (-r.max_times_cited, r.year if r.year is not None else 10**6,
                                            r.title, r.id))
    return ranked[:max(n, 0)]


def rank_cited_refs(canon: Iterable[CanonicalRef], n: int) -> list[CanonicalRef]:
    """Canonical references by the number of distinct citing records."""
    ranked = sorted(canon, key=lambda c: (-len(c.citing_ids), c.id))
    return ranked[:max(n, 0)]


def tally(records: Iterable[Record], dimension: str = "doc_type") -> list[tuple[str, int]]:
    """Counts per document type or subject category, descending (ties alphabetical)."""
    counts: Counter = Counter()
    for r in records:
        if dimension == "doc_type":
            counts[r.doc_type or UNKNOWN] += 1
        elif dimension == "subject_category":
            cats = r.subject_categories or [UNKNOWN]
            counts.update(dict.fromkeys(cats, 1))
        else:
            raise ValueError(f"unknown tally dimension {dimension!r}")
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass
class BinSummary:
    low: int
    high: float
    count: int
    mean_wos: float
    mean_scopus: float


def bin_source_comparison(records: Iterable[Record], edges: Sequence[int]) -> list[BinSummary]:
    """Mean WoS and Scopus citation counts per half-open bin of the WoS count.

    Only records carrying both counts are used. The last bin is open-ended;
    records below the first edge fall in no bin.
    """
    edges = sorted(edges)
    bounds = list(zip(edges, list(edges[1:]) + [math.inf]))
    sums = [[0, 0, 0] for _ in bounds]
    for r in records:
        if Source.WOS.value not in r.times_cited or Source.SCOPUS.value not in r.times_cited:
            continue
        w, s = r.times_cited[Source.WOS.value], r.times_cited[Source.SCOPUS.value]
        for i, (lo, hi) in enumerate(bounds):
            if lo <= w < hi:
                sums[i][0] += 1
                sums[i][1] += w
                sums[i][2] += s
                break
    return [BinSummary(lo, hi, n, sw / n, ss / n)
            for (lo, hi), (n, sw, ss) in zip(bounds, sums) if n]


@dataclass
class BaseMap:
    regions: dict[str, str]
    coords: dict[str, tuple[float, float] | None] = field(default_factory=dict)
    _cache: dict[str, str | None] = field(default_factory=dict, repr=False)

    @classmethod
    def load(cls, path: str | Path) -> "BaseMap":
        """Read a ``journal,region[,x,y]`` CSV."""
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                rows = list(csv.DictReader(fh))
        except (OSError, UnicodeDecodeError, csv.Error) as exc:
            raise ValueError(f"cannot read base map {path}: {exc}") from exc
        if not rows or "journal" not in rows[0] or "region" not in rows[0]:
            raise ValueError(f"base map {path} needs 'journal' and 'region' columns")
        regions, coords = {}, {}
        for row in rows:
            key = fold(row["journal"])
            if not key:
                continue
            regions[key] = row["region"].strip()
            x, y = row.get("x"), row.get("y")
            coords[key] = (float(x), float(y)) if x not in (None, "") and y not in (None, "") else None
        return cls(regions, coords)

    def resolve(self, journal: str | None, threshold: float = JOURNAL_MATCH) -> str | None:
        """Region of a journal: exact folded match first, then best Jaro-Winkler match >= threshold."""
        key = fold(journal)
        if not key:
            return None
        if key in self.regions:
            return self.regions[key]
        if key in self._cache:
            return self._cache[key]
        best, best_sim = None, threshold
        for name in sorted(self.regions):
            sim = jaro_winkler(key, name)
            if sim >= best_sim and (best is None or sim > best_sim):
                best, best_sim = name, sim
        region = self.regions[best] if best is not None else None
        self._cache[key] = region
        return region


@dataclass
class DualMapArc:
    source_region: str
    target_region: str
    count: int
    z: float = 0.0


@dataclass
class DualMapResult:
    arcs: list[DualMapArc]
    resolved: int
    unresolved: int
    unresolved_citing: int = 0


def dualmap_arcs(records: Iterable[Record], base_map: BaseMap, bundle_threshold: float | None = 0.0,
                 match_threshold: float = JOURNAL_MATCH) -> DualMapResult:
    """Aggregate citation links between base-map regions.

    Every cited reference of a record whose venue resolves is either counted in
    an arc or in ``unresolved``. With ``bundle_threshold`` set, arcs whose
    z-score falls below it are dropped; ``None`` keeps every arc.
    """
    counts: Counter = Counter()
    unresolved = unresolved_citing = 0
    for r in records:
        src = base_map.resolve(r.venue, match_threshold)
        if src is None:
            unresolved_citing += 1
            continue
        for ref in r.cited_refs:
            dst = base_map.resolve(ref.source_name, match_threshold)
            if dst is None:
                unresolved += 1
            else:
                counts[(src, dst)] += 1
    arcs = [DualMapArc(s, t, n) for (s, t), n in sorted(counts.items())]
    if arcs:
        values = [a.count for a in arcs]
        mean = sum(values) / len(values)
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
        for a in arcs:
            a.z = (a.count - mean) / sd if sd > 0 else 0.0
    kept = arcs if bundle_threshold is None else [a for a in arcs if a.z >= bundle_threshold]
    return DualMapResult(kept, sum(counts.values()), unresolved, unresolved_citing)


def write_dualmap_csv(result: DualMapResult, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source_region", "target_region", "count", "z"])
        for a in result.arcs:
            w.writerow([a.source_region, a.target_region, a.count, f"{a.z:.6f}"])


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def most_cited_rows(records: Sequence[Record]) -> list[list]:
    return [[i + 1, r.max_times_cited, r.times_cited.get("WOS", ""), r.times_cited.get("SCOPUS", ""),
             r.first_author.label if r.first_author else "", r.year or "", r.title, r.venue]
            for i, r in enumerate(records)]


def cited_ref_rows(canon: Sequence[CanonicalRef], half_lives: Mapping[str, int | None] | None = None) -> list[list]:
    half_lives = half_lives or {}
    return [[i + 1, len(c.citing_ids), c.id, c.label,
             "" if half_lives.get(c.id) is None else half_lives[c.id]]
            for i, c in enumerate(canon)]
