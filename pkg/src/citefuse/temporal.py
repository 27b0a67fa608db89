"""Citation bursts, half-lives, timelines and keyword threads."""
from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .ingest.model import Record
from .network import CoCitationNetwork, g_index_select

BURST_SCALE = 2.0
BURST_GAMMA = 1.0
MAX_BURST_RATE = 0.9999


@dataclass(frozen=True)
class BurstInterval:
    entity: str
    strength: float
    begin: int
    end: int

    @property
    def duration(self) -> int:
        return self.end - self.begin + 1

    def to_dict(self) -> dict:
        return {"begin": self.begin, "end": self.end, "strength": round(self.strength, 6)}


@dataclass
class KeywordThread:
    keyword: str
    first: int
    last: int
    presence: dict[int, bool] = field(default_factory=dict)
    frequency: dict[int, int] = field(default_factory=dict)


def _fit_cost(r: float, d: float, p: float) -> float:
    """Negative log-likelihood of ``r`` hits out of ``d`` at rate ``p`` (binomial term omitted)."""
    cost = 0.0
    if r > 0:
        cost -= r * math.log(p)
    if d - r > 0:
        cost -= (d - r) * math.log(1.0 - p)
    return cost


def burst_model(series: Mapping[int, int], baseline: Mapping[int, int], scale: float = BURST_SCALE,
                gamma: float = BURST_GAMMA):
    """Per-year fit costs for the base and burst states plus the cost of entering a burst.

    Returns ``(years, base_costs, burst_costs, up_cost)`` or ``None`` when no
    burst state is possible (no events, or a base rate too high to exceed).
    """
    extra = set(series) - set(baseline)
    if extra:
        raise ValueError(f"series years outside the baseline: {sorted(extra)}")
    years = sorted(baseline)
    r = [series.get(y, 0) for y in years]
    d = [baseline[y] for y in years]
    total_r, total_d = sum(r), sum(d)
    if total_r <= 0 or total_d <= 0:
        return None
    p0 = total_r / total_d
    p1 = min(scale * p0, MAX_BURST_RATE)
    if p1 <= p0:
        return None
    base = [_fit_cost(ri, di, p0) for ri, di in zip(r, d)]
    burst = [_fit_cost(ri, di, p1) for ri, di in zip(r, d)]
    return years, base, burst, gamma * math.log(len(years))


def optimal_states(base: Sequence[float], burst: Sequence[float], up_cost: float) -> tuple[list[int], float]:
    """Viterbi over the two-state automaton, starting in the base state.

    Leaving a burst is free; entering one costs ``up_cost``.
    """
    n = len(base)
    if n == 0:
        return [], 0.0
    cost = [[0.0, 0.0] for _ in range(n)]
    back = [[0, 0] for _ in range(n)]
    cost[0] = [base[0], up_cost + burst[0]]
    for t in range(1, n):
        stay0, from1 = cost[t - 1][0], cost[t - 1][1]
        if from1 < stay0:
            cost[t][0], back[t][0] = from1 + base[t], 1
        else:
            cost[t][0], back[t][0] = stay0 + base[t], 0
        enter, stay1 = cost[t - 1][0] + up_cost, cost[t - 1][1]
        if enter < stay1:
            cost[t][1], back[t][1] = enter + burst[t], 0
        else:
            cost[t][1], back[t][1] = stay1 + burst[t], 1
    q = 0 if cost[-1][0] <= cost[-1][1] else 1
    total = cost[-1][q]
    states = [0] * n
    for t in range(n - 1, -1, -1):
        states[t] = q
        q = back[t][q]
    return states, total


def detect_bursts(series: Mapping[int, int], baseline: Mapping[int, int], entity: str = "",
                  scale: float = BURST_SCALE, gamma: float = BURST_GAMMA,
                  min_duration: int = 1) -> list[BurstInterval]:
    """Burst intervals of a yearly count series against yearly totals.

    Strength of an interval is the summed cost advantage of the burst state
    over the base state across its years.
    """
    if not series:
        return []
    model = burst_model(series, baseline, scale, gamma)
    if model is None:
        return []
    years, base, burst, up = model
    states, _ = optimal_states(base, burst, up)
    out = []
    t = 0
    while t < len(states):
        if states[t] == 1:
            start = t
            while t + 1 < len(states) and states[t + 1] == 1:
                t += 1
            strength = sum(base[i] - burst[i] for i in range(start, t + 1))
            out.append(BurstInterval(entity, strength, years[start], years[t]))
        t += 1
    return filter_bursts(out, min_duration)


def filter_bursts(bursts: Iterable[BurstInterval], min_duration: int) -> list[BurstInterval]:
    return [b for b in bursts if b.duration >= min_duration]


def yearly_totals(records: Iterable[Record]) -> dict[int, int]:
    """Citation instances per citing year over the whole corpus."""
    totals: Counter = Counter()
    for r in records:
        if r.year is not None:
            totals[r.year] += len(set(r.ref_ids))
    return dict(sorted(totals.items()))


def reference_bursts(net: CoCitationNetwork, records: Sequence[Record], min_duration: int = 1,
                     scale: float = BURST_SCALE, gamma: float = BURST_GAMMA) -> dict[str, list[BurstInterval]]:
    """Bursts of every network node, keyed by node id (nodes without bursts omitted)."""
    totals = yearly_totals(records)
    if totals:
        totals = {y: totals.get(y, 0) for y in range(min(totals), max(totals) + 1)}
    out = {}
    for n in sorted(net.nodes):
        series = {y: c for y, c in net.nodes[n].yearly_citations.items() if y in totals}
        found = detect_bursts(series, totals, n, scale, gamma, min_duration)
        if found:
            out[n] = found
    return out


def write_bursts_csv(bursts: Mapping[str, Sequence[BurstInterval]], net: CoCitationNetwork, path: str | Path) -> None:
    rows = [(b, net.nodes[n]) for n, bs in bursts.items() for b in bs]
    rows.sort(key=lambda x: (x[0].begin, -x[0].strength, x[0].entity))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["reference", "year", "strength", "begin", "end"])
        for b, node in rows:
            w.writerow([node.label, "" if node.year is None else node.year, f"{b.strength:.4f}", b.begin, b.end])


def half_life_counts(pub_year: int | None, yearly: Mapping[int, int]) -> int:
    """Years after publication until at least half of the observed citations accumulate.

    Citations dated before publication count toward the publication year.
    """
    if pub_year is None:
        raise ValueError("half-life needs a publication year")
    total = sum(c for c in yearly.values() if c > 0)
    if total <= 0:
        raise ValueError("half-life is undefined without dated citations")
    by_offset: Counter = Counter()
    for y, c in yearly.items():
        by_offset[max(0, y - pub_year)] += c
    running = 0
    for h in range(max(by_offset) + 1):
        running += by_offset.get(h, 0)
        if 2 * running >= total:
            return h
    return max(by_offset)


def half_life(ref) -> int:
    """Half-life of a canonical reference (or network node) over citations in the loaded corpus."""
    return half_life_counts(ref.year, ref.yearly_citations)


def timeline_export(clusters, net: CoCitationNetwork,
                    bursts: Mapping[str, Sequence[BurstInterval]] | None = None) -> dict:
    """Timeline dataset: one row per cluster, member entries, and first-year edge colors."""
    bursts = bursts or {}
    rows = []
    clustered: set[str] = set()
    for c in sorted(clusters, key=lambda c: c.id):
        members = []
        for m in sorted(c.members, key=lambda m: (net.nodes[m].year or 0, m)):
            node = net.nodes[m]
            members.append({
                "id": m,
                "label": node.label,
                "year": node.year,
                "citations": node.total_citations,
                "bursts": [b.to_dict() for b in bursts.get(m, [])],
            })
        clustered.update(c.members)
        rows.append({"cluster": c.id, "path": c.path, "label": c.llr_label, "size": c.size, "members": members})
    edges = [
        {"source": a, "target": b, "weight": e.weight, "first_year": e.first_year}
        for (a, b), e in sorted(net.edges.items()) if a in clustered and b in clustered
    ]
    return {
        "schema": "timeline/1",
        "citation_scope": "citations counted within the loaded corpus only",
        "rows": rows,
        "edges": edges,
    }


def write_json(data: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        # compact separators keep json on its C encoder; indentation is several times slower
        fh.write(json.dumps(data, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
        fh.write("\n")


def alluvial_threads(records: Iterable[Record], k: float = 30, field: str = "DE") -> list[KeywordThread]:
    """Per-year g-index keyword selection, stitched into one thread per keyword."""
    from .lexical import keyword_frequencies

    freq = keyword_frequencies(records, field)
    by_year: dict[int, dict[str, int]] = {}
    for (term, year), n in freq.items():
        by_year.setdefault(year, {})[term] = n
    selected: dict[str, list[int]] = {}
    for year in sorted(by_year):
        for term in g_index_select(by_year[year], k):
            selected.setdefault(term, []).append(year)
    threads = []
    for term in sorted(selected):
        years = selected[term]
        first, last = min(years), max(years)
        chosen = set(years)
        threads.append(KeywordThread(
            keyword=term,
            first=first,
            last=last,
            presence={y: y in chosen for y in range(first, last + 1)},
            frequency={y: by_year[y][term] for y in sorted(chosen)},
        ))
    return threads


def write_alluvial_csv(threads: Sequence[KeywordThread], records: Iterable[Record], path: str | Path,
                       field: str = "DE") -> None:
    from .lexical import keyword_frequencies

    per_term: dict[str, dict[int, int]] = {}
    for (term, year), n in keyword_frequencies(records, field).items():
        per_term.setdefault(term, {})[year] = n
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["keyword", "year", "frequency", "selected"])
        for t in threads:
            for y, n in sorted(per_term.get(t.keyword, {}).items()):
                w.writerow([t.keyword, y, n, int(t.presence.get(y, False))])
