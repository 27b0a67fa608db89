"""Web of Science field-tagged (plain text) and tab-delimited exports."""
from __future__ import annotations

import csv
import hashlib
import io
import logging
import re
from functools import lru_cache
from typing import IO, Iterable

from .model import Author, CitedRef, ParseError, Record, Source, valid_year
from .normalize import initials_of, normalize_page, normalize_record, normalize_volume, split_author

log = logging.getLogger(__name__)

KNOWN_TAGS = {"PT", "AU", "TI", "SO", "DE", "WC", "CR", "TC", "VL", "IS", "BP", "PY", "DT", "DI", "UT"}
_LIST_TAGS = {"AU", "AF", "CR", "C1", "C3", "RP", "EM"}
_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]) ?(.*)$")
_YEAR = re.compile(r"^\d{4}$")
_VOLUME = re.compile(r"^V[A-Z]{0,2}\d\S*$")
_PAGE = re.compile(r"^P[A-Z]{0,2}\d\S*$")
_DOI_TAIL = re.compile(r",\s*DOI\s+(.*)$")
_DOI_VALUE = re.compile(r"10\.\d{4,9}/[^\s,\]\[]+")


def decode_bytes(data: bytes) -> tuple[str, int]:
    """Decode UTF-8 line by line, falling back to Latin-1 for invalid lines.

    Returns the text and the number of lines that needed the fallback.
    """
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    out = []
    fallbacks = 0
    for line in data.splitlines(keepends=True):
        try:
            out.append(line.decode("utf-8"))
        except UnicodeDecodeError:
            out.append(line.decode("latin-1"))
            fallbacks += 1
    if fallbacks:
        log.warning("%d line(s) decoded as Latin-1", fallbacks)
    return "".join(out), fallbacks


def _read(stream: IO[str] | IO[bytes] | str | bytes) -> str:
    if isinstance(stream, bytes):
        return decode_bytes(stream)[0]
    if isinstance(stream, str):
        return stream
    data = stream.read()
    if isinstance(data, bytes):
        return decode_bytes(data)[0]
    return data.lstrip("﻿")


@lru_cache(maxsize=1 << 17)
def parse_cr(raw: str) -> CitedRef:
    """Parse one WoS ``CR`` entry such as
    ``"Hirsch JE, 2005, P NATL ACAD SCI USA, V102, P16569, DOI 10.1073/pnas.0507655102"``.
    """
    text = raw.strip()
    doi = None
    m = _DOI_TAIL.search(text)
    if m:
        found = _DOI_VALUE.search(m.group(1))
        doi = found.group(0) if found else None
        text = text[: m.start()]
    tokens = [t.strip() for t in text.split(", ")]
    year = volume = page = None
    author = None
    middle: list[str] = []
    for i, tok in enumerate(tokens):
        if not tok:
            continue
        if year is None and _YEAR.match(tok):
            year = valid_year(tok)
        elif _VOLUME.match(tok) and volume is None and i > 0:
            volume = tok
        elif _PAGE.match(tok) and page is None and i > 0:
            page = tok[1:]
        elif i == 0:
            author = tok
        else:
            middle.append(tok)
    surname = initials = None
    if author and not author.startswith("["):
        parsed = split_author(author)
        if parsed:
            surname, initials = parsed.surname, parsed.initials or None
    return CitedRef(
        raw=raw.strip(),
        author_surname=surname,
        author_initials=initials,
        year=year,
        source_name=", ".join(middle) or None,
        volume=normalize_volume(volume),
        first_page=normalize_page(page),
        doi=doi,
    )


def _record_from_fields(tags: dict[str, list[str]], block_text: str) -> Record:
    def joined(tag: str) -> str:
        return " ".join(tags.get(tag, [])).strip()

    def split_semicolon(tag: str) -> list[str]:
        return [p.strip() for p in joined(tag).split(";") if p.strip()]

    authors = [a for a in (split_author(x) for x in tags.get("AU", [])) if a]
    rid = joined("UT") or "WOS:anon-" + hashlib.sha1(block_text.encode()).hexdigest()[:12]
    tc = joined("TC")
    record = Record(
        id=rid,
        source=Source.WOS,
        authors=authors,
        year=valid_year(joined("PY")),
        title=joined("TI"),
        venue=joined("SO"),
        volume=joined("VL") or None,
        issue=joined("IS") or None,
        first_page=joined("BP") or None,
        doi=joined("DI") or None,
        doc_type=joined("DT"),
        author_keywords=split_semicolon("DE"),
        subject_categories=split_semicolon("WC"),
        times_cited={Source.WOS.value: int(tc)} if tc.isdigit() else {},
        cited_refs=[parse_cr(c) for c in tags.get("CR", []) if c.strip()],
        extra={t: "\n".join(v) for t, v in tags.items() if t not in KNOWN_TAGS},
    )
    return normalize_record(record)


def _parse_tagged(text: str) -> list[Record]:
    records: list[Record] = []
    tags: dict[str, list[str]] = {}
    current: str | None = None
    block_start: int | None = None
    block_lines: list[str] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        line_offset = offset
        offset += len(line.encode("utf-8"))
        body = line.rstrip("\r\n")
        if not body.strip():
            continue
        if body[:1] in (" ", "\t"):
            if current is None:
                raise ParseError(f"continuation line outside a field at byte offset {line_offset}")
            tags[current].append(body.strip())
            block_lines.append(body)
            continue
        m = _TAG_LINE.match(body)
        if not m:
            raise ParseError(f"unrecognized line at byte offset {line_offset}: {body[:40]!r}")
        tag, value = m.group(1), m.group(2).strip()
        if tag in ("FN", "VR", "EF") and block_start is None:
            continue
        if tag == "ER":
            if block_start is None:
                raise ParseError(f"ER without a record at byte offset {line_offset}")
            records.append(_record_from_fields(tags, "\n".join(block_lines)))
            tags, current, block_start, block_lines = {}, None, None, []
            continue
        if block_start is None:
            block_start = line_offset
        current = tag
        tags.setdefault(tag, [])
        if value:
            tags[tag].append(value)
        block_lines.append(body)
    if block_start is not None:
        raise ParseError(f"record starting at byte offset {block_start} has no ER terminator")
    return records


def _parse_tab_delimited(text: str) -> list[Record]:
    reader = csv.reader(io.StringIO(text), delimiter="\t", quoting=csv.QUOTE_NONE)
    header = [h.strip() for h in next(reader)]
    records = []
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        tags: dict[str, list[str]] = {}
        for tag, value in zip(header, row):
            value = value.strip()
            if not tag or not value:
                continue
            if tag in _LIST_TAGS:
                tags[tag] = [v.strip() for v in value.split("; ") if v.strip()]
            else:
                tags[tag] = [value]
        records.append(_record_from_fields(tags, "\t".join(row)))
    return records


def parse_wos(stream: IO[str] | IO[bytes] | str | bytes) -> list[Record]:
    """Parse a Web of Science export in field-tagged or tab-delimited form."""
    text = _read(stream)
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    if "\t" in first and first.split("\t", 1)[0].strip() in ("PT", "FN"):
        return _parse_tab_delimited(text)
    return _parse_tagged(text)


def format_cr(ref: CitedRef) -> str:
    parts = []
    if ref.author_surname:
        parts.append(f"{ref.author_surname} {ref.author_initials or ''}".strip())
    if ref.year is not None:
        parts.append(str(ref.year))
    if ref.source_name:
        parts.append(ref.source_name)
    if ref.volume:
        parts.append(f"V{ref.volume}")
    if ref.first_page:
        parts.append(f"P{ref.first_page}")
    if ref.doi:
        parts.append(f"DOI {ref.doi}")
    return ", ".join(parts)


def write_wos(records: Iterable[Record]) -> str:
    """Serialize records as a field-tagged export (inverse of :func:`parse_wos`)."""
    out = ["FN Clarivate Analytics Web of Science", "VR 1.0"]

    def emit(tag: str, values: list[str]) -> None:
        values = [v for v in values if v]
        if not values:
            return
        out.append(f"{tag} {values[0]}")
        out.extend(f"   {v}" for v in values[1:])

    for r in records:
        emit("PT", ["J"])
        emit("AU", [f"{a.surname}, {a.initials}".rstrip(", ") for a in r.authors])
        emit("TI", [r.title])
        emit("SO", [r.venue])
        emit("DT", [r.doc_type])
        emit("DE", ["; ".join(r.author_keywords)])
        emit("WC", ["; ".join(r.subject_categories)])
        emit("CR", [c.raw for c in r.cited_refs])
        if Source.WOS.value in r.times_cited:
            emit("TC", [str(r.times_cited[Source.WOS.value])])
        emit("PY", [str(r.year) if r.year is not None else ""])
        emit("VL", [r.volume or ""])
        emit("IS", [r.issue or ""])
        emit("BP", [r.first_page or ""])
        emit("DI", [r.doi or ""])
        for tag, value in r.extra.items():
            emit(tag, value.split("\n"))
        emit("UT", [r.id])
        out.append("ER")
        out.append("")
    out.append("EF")
    return "\n".join(out) + "\n"


__all__ = ["parse_wos", "parse_cr", "write_wos", "format_cr", "decode_bytes", "initials_of"]
