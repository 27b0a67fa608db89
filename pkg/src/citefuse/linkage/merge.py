"""Composite keys and the cross-database merge of source records."""
from __future__ import annotations

from collections import defaultdict, deque
from typing import NamedTuple

from ..ingest.model import CitedRef, Record, Source, fold
from ..ingest.normalize import normalize_page, normalize_volume


class UnlinkableError(ValueError):
    """The item has no author surname to key on."""


class CompositeKey(NamedTuple):
    surname: str
    first_initial: str
    year: int | None
    volume: str | None
    first_page: str | None


def _norm(text: str | None) -> str | None:
    return text.casefold() if text else None


def composite_key(item: CitedRef | Record) -> CompositeKey:
    if isinstance(item, Record):
        author = item.first_author
        surname = author.surname if author else ""
        initials = author.initials if author else ""
    else:
        surname = item.author_surname or ""
        initials = item.author_initials or ""
    surname = fold(surname)
    if not surname:
        raise UnlinkableError(f"no author surname on {getattr(item, 'id', None) or getattr(item, 'raw', item)!r}")
    letters = [c for c in initials if c.isalpha()]
    return CompositeKey(
        surname=surname,
        first_initial=letters[0].casefold() if letters else "",
        year=item.year,
        volume=_norm(normalize_volume(item.volume)),
        first_page=_norm(normalize_page(item.first_page)),
    )


def _merge_pair(wos: Record, scopus: Record) -> Record:
    """WoS values win; Scopus only fills fields WoS leaves empty."""
    fill = {}
    for name in ("year", "title", "venue", "volume", "issue", "first_page", "doi", "doc_type"):
        if getattr(wos, name) in (None, ""):
            fill[name] = getattr(scopus, name)
    for name in ("authors", "author_keywords", "subject_categories", "cited_refs"):
        if not getattr(wos, name):
            fill[name] = list(getattr(scopus, name))
    times = dict(scopus.times_cited)
    times.update(wos.times_cited)
    extra = dict(wos.extra)
    extra["SCOPUS_ID"] = scopus.id
    return wos.copy(source=Source.MERGED, times_cited=times, extra=extra, **fill)


def merge_source_records(wos: list[Record], scopus: list[Record]) -> list[Record]:
    """Unify records that share a composite key across the two databases.

    Each Scopus record merges with at most one WoS record (first unmatched WoS
    record with the same key, in input order). Unlinkable records pass through.
    """
    by_key: dict[CompositeKey, deque[int]] = defaultdict(deque)
    for i, r in enumerate(wos):
        try:
            by_key[composite_key(r)].append(i)
        except UnlinkableError:
            continue
    partner: dict[int, Record] = {}
    leftover: list[Record] = []
    for r in scopus:
        try:
            queue = by_key.get(composite_key(r))
        except UnlinkableError:
            queue = None
        if queue:
            partner[queue.popleft()] = r
        else:
            leftover.append(r)
    merged = [_merge_pair(r, partner[i]) if i in partner else r for i, r in enumerate(wos)]
    return merged + leftover
