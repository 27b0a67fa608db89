"""Canonical forms for pages, volumes and author names."""
from __future__ import annotations

import re
from dataclasses import replace

from .model import Author, CitedRef, Record

_PAGE_PREFIX = re.compile(r"^(?:pp?\.?\s*)", re.IGNORECASE)
_RANGE = re.compile(r"\s*[-\u2013\u2014].*$")
_VOLUME_PREFIX = re.compile(r"^V(?=\S)")
_INITIAL_TOKEN = re.compile(r"^(?:[A-Z]\.?-?)+$|^[A-Z]{1,4}$")


def normalize_page(page: str | None) -> str | None:
    """``"pp. 16569-16572"`` -> ``"16569"``. Pages stay text (``"S12"``, ``"e0084133"``)."""
    if page is None:
        return None
    text = _PAGE_PREFIX.sub("", page.strip())
    text = _RANGE.sub("", text).strip()
    return text or None


def normalize_volume(volume: str | None) -> str | None:
    if volume is None:
        return None
    text = _VOLUME_PREFIX.sub("", volume.strip()).strip()
    return text or None


def initials_of(text: str) -> str:
    return "".join(ch for ch in text if ch.isalpha()).upper()


def split_author(text: str) -> Author | None:
    """Parse one author name in any of the export spellings.

    Handles ``"Garfield, E"``, ``"Hirsch J. E."``, ``"Hirsch, J.E."`` and
    ``"van Raan AFJ"``.
    """
    text = " ".join(text.strip().split())
    if not text:
        return None
    if "," in text:
        surname, _, rest = text.partition(",")
        surname = surname.strip()
        if surname:
            return Author(surname, initials_of(rest))
        text = rest.strip()
    tokens = text.split(" ")
    cut = len(tokens)
    while cut > 1 and _INITIAL_TOKEN.match(tokens[cut - 1]):
        cut -= 1
    surname = " ".join(tokens[:cut]).strip(" .")
    if not surname:
        return None
    return Author(surname, initials_of("".join(tokens[cut:])))


def normalize_ref(ref: CitedRef) -> CitedRef:
    initials = initials_of(ref.author_initials) if ref.author_initials else ref.author_initials
    return replace(
        ref,
        author_initials=initials or None,
        volume=normalize_volume(ref.volume),
        first_page=normalize_page(ref.first_page),
        source_name=" ".join(ref.source_name.split()) if ref.source_name else ref.source_name,
    )


def normalize_record(record: Record) -> Record:
    """Return a copy with normalized volume/page fields on the record and its references.

    Idempotent. Folded comparison forms are exposed as ``surname_key`` /
    ``venue_key`` on the record and ``author_key`` / ``source_key`` on references.
    """
    return record.copy(
        volume=normalize_volume(record.volume),
        first_page=normalize_page(record.first_page),
        authors=[Author(a.surname.strip(), initials_of(a.initials)) for a in record.authors],
        cited_refs=[normalize_ref(r) for r in record.cited_refs],
    )
