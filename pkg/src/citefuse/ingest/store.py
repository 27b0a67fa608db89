"""JSON-lines record store."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .model import Record


def dump_records(records: Iterable[Record], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
            n += 1
    return n


def load_records(path: str | Path) -> list[Record]:
    with open(path, encoding="utf-8") as fh:
        return [Record.from_dict(json.loads(line)) for line in fh if line.strip()]
