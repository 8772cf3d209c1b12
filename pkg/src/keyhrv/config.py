"""Analysis parameters and the flat ``key = value`` config file format."""
from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .keydyn import TOP10_BIGRAMS


@dataclass(frozen=True)
class AnalysisConfig:
    """Every tunable of an analysis run. Defaults follow the published protocol."""

    bigrams: tuple[str, ...] = TOP10_BIGRAMS
    cutoff_ms: int = 1000
    window_ms: int = 300_000
    step_ms: int = 150_000
    gap_threshold_ms: int = 300_000
    malik_tolerance: float = 0.2
    min_intervals: int = 30
    excluded_bigrams: tuple[str, ...] = ()
    output_dir: str = "out"
    rr_start_ms: int = 0
    rr_min_ms: float = 300.0
    rr_max_ms: float = 2000.0
    include_short: bool = True
    pass_through: bool = False
    strict_keymap: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bigrams", tuple(b.upper() for b in self.bigrams))
        object.__setattr__(self, "excluded_bigrams", tuple(b.upper() for b in self.excluded_bigrams))
        if not self.window_ms > self.step_ms > 0:
            raise ValueError("window_ms/step_ms: need window_ms > step_ms > 0")
        if not 0 < self.malik_tolerance < 1:
            raise ValueError("malik_tolerance: must lie in (0, 1)")
        if self.cutoff_ms <= 0:
            raise ValueError("cutoff_ms: must be positive")
        if self.gap_threshold_ms <= 0:
            raise ValueError("gap_threshold_ms: must be positive")
        if self.min_intervals < 2:
            raise ValueError("min_intervals: must be at least 2")
        if not 0 < self.rr_min_ms < self.rr_max_ms:
            raise ValueError("rr_min_ms/rr_max_ms: need 0 < rr_min_ms < rr_max_ms")
        if not self.bigrams:
            raise ValueError("bigrams: must not be empty")
        unknown = set(self.excluded_bigrams) - set(self.bigrams)
        if unknown:
            raise ValueError(f"excluded_bigrams: not in bigram set: {sorted(unknown)}")
        if not self.active_bigrams:
            raise ValueError("excluded_bigrams: empty bigram set")

    @property
    def active_bigrams(self) -> tuple[str, ...]:
        return tuple(b for b in self.bigrams if b not in self.excluded_bigrams)

    def with_overrides(self, overrides: Mapping[str, Any]) -> "AnalysisConfig":
        return replace(self, **coerce(overrides))

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


_FIELD_TYPES = {f.name: f.type for f in fields(AnalysisConfig)}


def _to_bool(raw: str) -> bool:
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def coerce(values: Mapping[str, Any]) -> dict[str, Any]:
    """Convert string values to the field types of :class:`AnalysisConfig`."""
    out = {}
    for key, raw in values.items():
        if key not in _FIELD_TYPES:
            raise ValueError(f"{key}: unknown config key")
        if not isinstance(raw, str):
            out[key] = raw
            continue
        kind = _FIELD_TYPES[key]
        try:
            if kind.startswith("tuple"):
                out[key] = tuple(v.strip() for v in raw.split(",") if v.strip())
            elif kind == "int":
                out[key] = int(raw)
            elif kind == "float":
                out[key] = float(raw)
            elif kind == "bool":
                out[key] = _to_bool(raw)
            else:
                out[key] = raw.strip()
        except ValueError as err:
            raise ValueError(f"{key}: {err}") from None
    return out


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8")
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string("[analysis]\n" + text, source=str(path))
    return dict(cp["analysis"])


def load_config(path: str | os.PathLike | None = None, **overrides) -> AnalysisConfig:
    values = read_config_file(path) if path is not None else {}
    values.update(overrides)
    return AnalysisConfig(**coerce(values))
