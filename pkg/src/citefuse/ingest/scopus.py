"""Scopus CSV exports."""
from __future__ import annotations

import csv
import hashlib
import io
import re
from functools import lru_cache
from typing import IO, Iterable

from .model import CitedRef, ParseError, Record, Source, valid_year
from .normalize import normalize_page, normalize_record, normalize_volume, split_author
from .wos import _read

REQUIRED_COLUMNS = ("Authors", "Title", "Year", "Source title", "References")
COLUMNS = (
    "Authors", "Title", "Year", "Source title", "Volume", "Issue", "Page start",
    "Page end", "Cited by", "DOI", "Author Keywords", "Document Type", "References", "EID",
)

_INITIALS = re.compile(r"^(?:[A-Z][a-z]?\.\s?-?)+$")
_YEAR_PAREN = re.compile(r"\((\d{4})\)")
_PAGES = re.compile(r"^pp?\.\s*(\S.*)$")
_VOLUME_ISSUE = re.compile(r"^(\d+[A-Za-z]?)(?:\s*\(([^)]*)\))?$")
_AUTHOR_SPLIT = re.compile(r"(?<=\.),\s+")


def _split_authors(text: str) -> list:
    text = text.strip()
    if not text or text.startswith("[No author"):
        return []
    parts = text.split(";") if ";" in text else _AUTHOR_SPLIT.split(text)
    return [a for a in (split_author(p) for p in parts) if a]


def _tail_fields(tokens: list[str]) -> tuple[list[str], str | None, str | None]:
    """Strip trailing page and volume tokens; return (remaining, volume, page)."""
    volume = page = None
    if tokens and (m := _PAGES.match(tokens[-1])):
        page = m.group(1)
        tokens = tokens[:-1]
    if tokens and (m := _VOLUME_ISSUE.match(tokens[-1])):
        volume = m.group(1)
        tokens = tokens[:-1]
    return tokens, volume, page


@lru_cache(maxsize=1 << 17)
def parse_reference(raw: str) -> CitedRef:
    """Parse one Scopus reference, e.g. ``"Hirsch, J.E., An index ... (2005) Proceedings ..., 102 (46), pp. 16569-16572"``.

    Fragments that do not fit the layout come back with only ``raw`` set.
    """
    text = raw.strip()
    tokens = [t.strip() for t in text.split(", ")]
    surname = initials = None
    i = 0
    while i + 1 < len(tokens) and _INITIALS.match(tokens[i + 1]) and "(" not in tokens[i]:
        if surname is None:
            surname, initials = tokens[i], tokens[i + 1]
        i += 2
    rest = ", ".join(tokens[i:])
    if surname is None:
        return CitedRef(raw=text)
    author = split_author(f"{surname}, {initials}")

    year = title = source = None
    years = list(_YEAR_PAREN.finditer(rest))
    if years:
        m = years[-1]
        year = valid_year(m.group(1))
        title = rest[: m.start()].strip(" ,") or None
        tail, volume, page = _tail_fields([t.strip() for t in rest[m.end():].split(", ") if t.strip()])
        source = ", ".join(tail) or None
    else:
        tail, volume, page = _tail_fields([t.strip() for t in rest.split(", ") if t.strip()])
        if volume is not None and len(tail) >= 2:
            title, source = ", ".join(tail[:-1]), tail[-1]
        elif tail:
            title = ", ".join(tail)
    return CitedRef(
        raw=text,
        author_surname=author.surname if author else None,
        author_initials=(author.initials or None) if author else None,
        year=year,
        source_name=source,
        title=title,
        volume=normalize_volume(volume),
        first_page=normalize_page(page),
    )


def parse_scopus(stream: IO[str] | IO[bytes] | str | bytes) -> list[Record]:
    """Parse a Scopus CSV export (header row required)."""
    text = _read(stream)
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"Scopus export is missing required columns: {', '.join(missing)}")
    reader.fieldnames = header
    records = []
    for row in reader:
        def get(col: str) -> str:
            return (row.get(col) or "").strip()

        cited = get("Cited by")
        refs = [parse_reference(r) for r in get("References").split("; ") if r.strip()]
        rid = get("EID") or "SCOPUS:anon-" + hashlib.sha1(
            "\x1f".join(get(c) for c in header).encode()
        ).hexdigest()[:12]
        record = Record(
            id=rid,
            source=Source.SCOPUS,
            authors=_split_authors(get("Authors")),
            year=valid_year(get("Year")),
            title=get("Title"),
            venue=get("Source title"),
            volume=get("Volume") or None,
            issue=get("Issue") or None,
            first_page=get("Page start") or None,
            doi=get("DOI") or None,
            doc_type=get("Document Type"),
            author_keywords=[k.strip() for k in get("Author Keywords").split(";") if k.strip()],
            times_cited={Source.SCOPUS.value: int(cited)} if cited.isdigit() else {},
            cited_refs=refs,
            extra={c: get(c) for c in header if c not in COLUMNS and get(c)},
        )
        records.append(normalize_record(record))
    return records


def format_reference(ref: CitedRef) -> str:
    """Render a reference in Scopus layout (inverse of :func:`parse_reference`)."""
    segments = []
    if ref.author_surname:
        initials = _dotted(ref.author_initials or "")
        segments.append(f"{ref.author_surname}, {initials}" if initials else ref.author_surname)
    tail = [t for t in (ref.source_name, ref.volume) if t]
    if ref.first_page:
        tail.append(f"pp. {ref.first_page}")
    tail_text = ", ".join(tail)
    if ref.year is not None:
        middle = f"{ref.title} ({ref.year})" if ref.title else f"({ref.year})"
        segments.append(f"{middle} {tail_text}".strip())
    else:
        segments.extend(t for t in (ref.title, tail_text) if t)
    return ", ".join(segments)


def _dotted(initials: str) -> str:
    return "".join(f"{c}." for c in initials)


def write_scopus(records: Iterable[Record]) -> str:
    """Serialize records as a Scopus CSV (inverse of :func:`parse_scopus`)."""
    buf = io.StringIO()
    records = list(records)
    extra_cols = sorted({c for r in records for c in r.extra} - set(COLUMNS))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(COLUMNS) + extra_cols)
    for r in records:
        writer.writerow([
            "; ".join(f"{a.surname}, {_dotted(a.initials)}".rstrip(", ") for a in r.authors),
            r.title,
            r.year if r.year is not None else "",
            r.venue,
            r.volume or "",
            r.issue or "",
            r.first_page or "",
            "",
            r.times_cited.get(Source.SCOPUS.value, ""),
            r.doi or "",
            "; ".join(r.author_keywords),
            r.doc_type,
            "; ".join(c.raw for c in r.cited_refs),
            r.id,
        ] + [r.extra.get(c, "") for c in extra_cols])
    return buf.getvalue()
