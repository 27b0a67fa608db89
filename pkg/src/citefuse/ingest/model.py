"""Record and cited-reference types shared by every stage of the pipeline."""
from __future__ import annotations

import datetime
from functools import lru_cache
import enum
import re
from dataclasses import dataclass, field, fields, replace
from typing import Any

SCHEMA = "record/1"

_PUNCT = re.compile(r"[^\w]+", re.UNICODE)


class Source(str, enum.Enum):
    WOS = "WOS"
    SCOPUS = "SCOPUS"
    MERGED = "MERGED"


class ParseError(ValueError):
    """Raised when an export file cannot be parsed."""


@lru_cache(maxsize=1 << 18)
def fold(text: str | None) -> str:
    """Case-fold and collapse punctuation/whitespace to single spaces."""
    if not text:
        return ""
    return " ".join(_PUNCT.sub(" ", text.casefold()).split())


def max_year() -> int:
    return datetime.date.today().year + 1


def valid_year(value: Any) -> int | None:
    try:
        year = int(str(value).strip())
    except (TypeError, ValueError):
        return None
    if 1800 <= year <= max_year():
        return year
    return None


@dataclass(frozen=True)
class Author:
    surname: str
    initials: str = ""

    @property
    def label(self) -> str:
        return f"{self.surname} {self.initials}".strip()


@dataclass(frozen=True)
class CitedRef:
    raw: str
    author_surname: str | None = None
    author_initials: str | None = None
    year: int | None = None
    source_name: str | None = None
    title: str | None = None
    volume: str | None = None
    first_page: str | None = None
    doi: str | None = None

    @property
    def author_key(self) -> str:
        """Author name as compared by the similarity measure: ``"surname initials"``."""
        if not self.author_surname:
            return ""
        return fold(f"{self.author_surname} {self.author_initials or ''}")

    @property
    def source_key(self) -> str:
        return fold(self.source_name)

    def to_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in _REF_FIELDS}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CitedRef":
        return cls(*[data.get(name) for name in _REF_FIELDS])


_REF_FIELDS = tuple(f.name for f in fields(CitedRef))


@dataclass
class Record:
    id: str
    source: Source
    authors: list[Author] = field(default_factory=list)
    year: int | None = None
    title: str = ""
    venue: str = ""
    volume: str | None = None
    issue: str | None = None
    first_page: str | None = None
    doi: str | None = None
    doc_type: str = ""
    author_keywords: list[str] = field(default_factory=list)
    subject_categories: list[str] = field(default_factory=list)
    times_cited: dict[str, int] = field(default_factory=dict)
    cited_refs: list[CitedRef] = field(default_factory=list)
    extra: dict[str, str] = field(default_factory=dict)
    ref_ids: list[str] = field(default_factory=list)

    @property
    def first_author(self) -> Author | None:
        return self.authors[0] if self.authors else None

    @property
    def linkable(self) -> bool:
        """Records lacking both an author and a year cannot be keyed."""
        return bool(self.authors) or self.year is not None

    @property
    def surname_key(self) -> str:
        a = self.first_author
        return fold(a.surname) if a else ""

    @property
    def venue_key(self) -> str:
        return fold(self.venue)

    @property
    def max_times_cited(self) -> int:
        return max(self.times_cited.values(), default=0)

    def copy(self, **changes: Any) -> "Record":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "id": self.id,
            "source": self.source.value,
            "authors": [[a.surname, a.initials] for a in self.authors],
            "year": self.year,
            "title": self.title,
            "venue": self.venue,
            "volume": self.volume,
            "issue": self.issue,
            "first_page": self.first_page,
            "doi": self.doi,
            "doc_type": self.doc_type,
            "author_keywords": list(self.author_keywords),
            "subject_categories": list(self.subject_categories),
            "times_cited": dict(sorted(self.times_cited.items())),
            "cited_refs": [r.to_dict() for r in self.cited_refs],
            "extra": dict(self.extra),
            "ref_ids": list(self.ref_ids),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Record":
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ParseError(f"unsupported record schema {schema!r}")
        return cls(
            id=data["id"],
            source=Source(data["source"]),
            authors=[Author(s, i) for s, i in data.get("authors", [])],
            year=data.get("year"),
            title=data.get("title", ""),
            venue=data.get("venue", ""),
            volume=data.get("volume"),
            issue=data.get("issue"),
            first_page=data.get("first_page"),
            doi=data.get("doi"),
            doc_type=data.get("doc_type", ""),
            author_keywords=list(data.get("author_keywords", [])),
            subject_categories=list(data.get("subject_categories", [])),
            times_cited={k: int(v) for k, v in data.get("times_cited", {}).items()},
            cited_refs=[CitedRef.from_dict(r) for r in data.get("cited_refs", [])],
            extra=dict(data.get("extra", {})),
            ref_ids=list(data.get("ref_ids", [])),
        )
