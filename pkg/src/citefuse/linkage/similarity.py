"""Jaro, Jaro-Winkler and the five-field reference similarity."""
from __future__ import annotations

from ..ingest.model import CitedRef

PREFIX_SCALE = 0.1
MAX_PREFIX = 4


class IncomparableError(ValueError):
    """Two references share fewer than two comparable fields."""


def jaro(s1: str, s2: str) -> float:
    if s1 == s2:
        return 1.0
    n1, n2 = len(s1), len(s2)
    if not n1 or not n2:
        return 0.0
    window = max(max(n1, n2) // 2 - 1, 0)
    taken = [False] * n2
    matched1 = []
    for i, ch in enumerate(s1):
        lo = max(0, i - window)
        hi = min(n2, i + window + 1)
        for j in range(lo, hi):
            if not taken[j] and s2[j] == ch:
                taken[j] = True
                matched1.append(ch)
                break
    m = len(matched1)
    if not m:
        return 0.0
    matched2 = [s2[j] for j in range(n2) if taken[j]]
    half_transpositions = sum(a != b for a, b in zip(matched1, matched2))
    t = half_transpositions / 2
    return (m / n1 + m / n2 + (m - t) / m) / 3


def common_prefix(s1: str, s2: str, limit: int = MAX_PREFIX) -> int:
    n = 0
    for a, b in zip(s1[:limit], s2[:limit]):
        if a != b:
            break
        n += 1
    return n


def jaro_winkler(s1: str, s2: str, scale: float = PREFIX_SCALE) -> float:
    """Jaro similarity boosted by the shared prefix (at most four characters)."""
    dj = jaro(s1, s2)
    return dj + common_prefix(s1, s2) * scale * (1.0 - dj)


def field_scores(a: CitedRef, b: CitedRef, _jw=jaro_winkler) -> list[float]:
    """Per-field scores over the fields present on both sides.

    Author and source names are scored with Jaro-Winkler on folded text;
    year, volume and first page score 1.0 on exact match and 0.0 otherwise.
    Fields missing on either side are left out.
    """
    scores = []
    ka, kb = a.author_key, b.author_key
    if ka and kb:
        scores.append(_jw(ka, kb))
    if a.year is not None and b.year is not None:
        scores.append(1.0 if a.year == b.year else 0.0)
    sa, sb = a.source_key, b.source_key
    if sa and sb:
        scores.append(_jw(sa, sb))
    for x, y in ((a.volume, b.volume), (a.first_page, b.first_page)):
        if x and y:
            scores.append(1.0 if x.casefold() == y.casefold() else 0.0)
    return scores


def overall_similarity(a: CitedRef, b: CitedRef, _jw=jaro_winkler) -> float:
    scores = field_scores(a, b, _jw)
    if len(scores) < 2:
        raise IncomparableError(f"only {len(scores)} comparable field(s): {a.raw!r} / {b.raw!r}")
    return sum(scores) / len(scores)
