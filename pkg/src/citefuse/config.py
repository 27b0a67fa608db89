"""Flat ``key = value`` configuration with every analysis threshold overridable."""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path


@dataclass
class Config:
    similarity_threshold: float = 0.80
    g_index_k: float = 30
    slice_length: int = 1
    min_cluster_size: int = 3
    burst_scale: float = 2.0
    burst_gamma: float = 1.0
    burst_min_duration: int = 1
    wordtree_min_freq: int = 1
    wordtree_field: str = "DE"
    wordtree_weighting: str = "zscore"
    category_min: int = 3
    keyword_min: int = 1
    alluvial_k: float = 30
    dualmap_bundle: bool = True
    dualmap_bundle_threshold: float = 0.0
    dualmap_match_threshold: float = 0.95
    drill_min_records: int = 10
    drill_max_depth: int = 3
    report_top: int = 10
    bins: list[int] = field(default_factory=lambda: [5, 10, 20, 30])
    threads: int = 1
    seed: int = 0

    @classmethod
    def from_text(cls, text: str) -> "Config":
        cfg = cls()
        kinds = {f.name: f for f in fields(cls)}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in kinds:
                raise ValueError(f"config line {lineno}: unknown or malformed setting {line!r}")
            setattr(cfg, key, _coerce(getattr(cfg, key), value, key))
        return cfg

    @classmethod
    def load(cls, path: str | Path | None) -> "Config":
        if path is None:
            return cls()
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = ",".join(str(x) for x in v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"


def _coerce(current, value: str, key: str):
    try:
        if isinstance(current, bool):
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
        if isinstance(current, list):
            return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"bad value for {key}: {value!r}") from None
    return value
