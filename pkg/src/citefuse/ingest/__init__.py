"""Parsing of Web of Science and Scopus exports into :class:`Record` objects."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable

from .model import Author, CitedRef, ParseError, Record, Source, fold
from .normalize import normalize_page, normalize_record, normalize_volume, split_author
from .scopus import format_reference, parse_reference, parse_scopus, write_scopus
from .store import dump_records, load_records
from .wos import format_cr, parse_cr, parse_wos, write_wos


def parse_path(path: str | Path) -> list[Record]:
    """Dispatch on extension: ``.csv`` is Scopus, anything else Web of Science."""
    data = Path(path).read_bytes()
    if str(path).lower().endswith(".csv"):
        return parse_scopus(data)
    return parse_wos(data)


def parse_files(paths: Iterable[str | Path], threads: int = 1) -> list[Record]:
    """Parse several exports; output follows lexicographic path order."""
    ordered = sorted(str(p) for p in paths)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chunks = list(pool.map(parse_path, ordered))
    return [r for chunk in chunks for r in chunk]


__all__ = [
    "Author", "CitedRef", "ParseError", "Record", "Source", "fold",
    "normalize_page", "normalize_record", "normalize_volume", "split_author",
    "parse_wos", "parse_cr", "write_wos", "format_cr",
    "parse_scopus", "parse_reference", "write_scopus", "format_reference",
    "dump_records", "load_records", "parse_path", "parse_files",
]
