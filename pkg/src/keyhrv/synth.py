"""
Synthetic typing and heartbeat sessions with a shared stress signal.

Stress is piecewise constant on 5-minute blocks. Under stress, bigram
latencies stretch by ``1 + coupling_latency * stress`` and the spread of RR
intervals shrinks by ``1 - coupling_hrv * stress``, so an analysis run on the
output has a known ground truth.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping

import numpy as np

from .ingest import RR_PLAUSIBLE_MS, KeyEvent, RrSeries, default_keymap, format_keymap, format_keystrokes, format_rr

BLOCK_MS = 300_000

# Relative frequencies from Norvig's English letter-pair counts (percent).
NORVIG_FREQ = {"TH": 3.56, "HE": 3.07, "IN": 2.43, "ER": 2.05, "AN": 1.99,
               "RE": 1.85, "ON": 1.76, "AT": 1.49, "EN": 1.45, "ND": 1.35}
# Baseline bigram timings of a moderately fast typist (ms).
TYPICAL_LATENCY_MS = {"TH": 124.0, "HE": 118.7, "IN": 141.3, "ER": 130.3, "AN": 122.9,
                      "RE": 51.8, "ON": 82.0, "AT": 112.1, "EN": 76.0, "ND": 131.9}


class SpecError(ValueError):
    """Invalid session parameter; ``field`` names the offending key."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


def _norvig() -> dict[str, float]:
    total = sum(NORVIG_FREQ.values())
    return {b: v / total for b, v in NORVIG_FREQ.items()}


@dataclass(frozen=True)
class SessionSpec:
    """Parameters of one synthetic recording.

    ``stress_signal`` lists stress levels for consecutive 5-minute blocks and
    is repeated cyclically over the session, so ``(0, 1)`` alternates.
    """

    duration_ms: int = 3_600_000
    bigram_frequencies: dict[str, float] = field(default_factory=_norvig)
    base_latency_ms: dict[str, float] = field(default_factory=lambda: dict(TYPICAL_LATENCY_MS))
    latency_jitter_ms: float = 30.0
    base_rr_ms: float = 800.0
    base_sdnn_ms: float = 50.0
    stress_signal: tuple[float, ...] = (0.0,)
    coupling_latency: float = 0.0
    coupling_hrv: float = 0.0
    rng_seed: int = 0
    start_ms: int = 1_600_000_000_000
    pair_interval_ms: float = 2000.0

    def __post_init__(self):
        object.__setattr__(self, "stress_signal", tuple(float(s) for s in self.stress_signal))
        if self.duration_ms < BLOCK_MS:
            raise SpecError("duration_ms", f"must be at least {BLOCK_MS}")
        freqs = self.bigram_frequencies
        if not freqs:
            raise SpecError("bigram_frequencies", "must not be empty")
        for b, f in freqs.items():
            if len(b) != 2 or not b.isalpha() or not b.isupper():
                raise SpecError("bigram_frequencies", f"{b!r} is not an uppercase letter pair")
            if f < 0:
                raise SpecError("bigram_frequencies", f"negative frequency for {b}")
        if abs(sum(freqs.values()) - 1.0) > 1e-6:
            raise SpecError("bigram_frequencies", f"must sum to 1, got {sum(freqs.values()):.6g}")
        missing = set(freqs) - set(self.base_latency_ms)
        if missing:
            raise SpecError("base_latency_ms", f"no latency for {sorted(missing)}")
        if any(v <= 0 for v in self.base_latency_ms.values()):
            raise SpecError("base_latency_ms", "latencies must be positive")
        if self.latency_jitter_ms < 0:
            raise SpecError("latency_jitter_ms", "must be non-negative")
        lo, hi = RR_PLAUSIBLE_MS
        if not lo <= self.base_rr_ms <= hi:
            raise SpecError("base_rr_ms", f"must lie in [{lo:g}, {hi:g}]")
        if self.base_sdnn_ms < 0:
            raise SpecError("base_sdnn_ms", "must be non-negative")
        if not self.stress_signal or any(not 0 <= s <= 1 for s in self.stress_signal):
            raise SpecError("stress_signal", "levels must lie in [0, 1]")
        if self.coupling_latency < 0:
            raise SpecError("coupling_latency", "must be non-negative")
        if not 0 <= self.coupling_hrv <= 1:
            raise SpecError("coupling_hrv", "must lie in [0, 1]")
        if self.start_ms <= 0:
            raise SpecError("start_ms", "must be positive")
        if self.pair_interval_ms <= 0:
            raise SpecError("pair_interval_ms", "must be positive")

    def stress_at(self, t_ms: float) -> float:
        """Stress level at ``t_ms`` milliseconds after session start."""
        block = int(t_ms // BLOCK_MS)
        return self.stress_signal[block % len(self.stress_signal)]

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "SessionSpec":
        """Build from flat string key/values (``TH:0.3,HE:0.7`` for maps, ``0,1`` for the signal)."""
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in known:
                raise SpecError(key, "unknown parameter")
            raw = raw.strip()
            try:
                if key in ("bigram_frequencies", "base_latency_ms"):
                    kwargs[key] = _parse_map(raw)
                elif key == "stress_signal":
                    kwargs[key] = tuple(float(v) for v in raw.split(","))
                elif key in ("duration_ms", "rng_seed", "start_ms"):
                    kwargs[key] = int(raw)
                else:
                    kwargs[key] = float(raw)
            except ValueError as err:
                raise SpecError(key, f"cannot parse {raw!r} ({err})") from None
        return cls(**kwargs)


def _parse_map(raw: str) -> dict[str, float]:
    out = {}
    for item in raw.split(","):
        name, sep, value = item.partition(":")
        if not sep:
            raise ValueError(f"expected BIGRAM:value, got {item!r}")
        out[name.strip().upper()] = float(value)
    return out


def load_session_spec(path: str | os.PathLike) -> SessionSpec:
    """Read a flat ``key = value`` spec file (no section header needed)."""
    text = Path(path).read_text(encoding="utf-8")
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string("[session]\n" + text)
    return SessionSpec.from_mapping(dict(cp["session"]))


@dataclass(frozen=True)
class SyntheticSession:
    events: list[KeyEvent]
    rr: RrSeries
    ground_truth: list[tuple[int, float]]
    start_ms: int


def _truncated_normal(rng: np.random.Generator, mean: float, sd: float, lo: float, hi: float) -> float:
    if sd == 0:
        return mean
    while True:
        v = rng.normal(mean, sd)
        if lo < v <= hi:
            return v


def generate(spec: SessionSpec) -> SyntheticSession:
    """Draw a keystroke stream, an RR series and per-block stress ground truth.

    Each typed bigram is followed by a space, so consecutive bigrams never
    form spurious letter pairs.
    """
    rng = np.random.default_rng(spec.rng_seed)
    names = list(spec.bigram_frequencies)
    probs = np.array([spec.bigram_frequencies[b] for b in names])
    probs = probs / probs.sum()

    events = []
    t = 0.0
    while True:
        b = names[rng.choice(len(names), p=probs)]
        scale = 1.0 + spec.coupling_latency * spec.stress_at(t)
        latency = _truncated_normal(rng, spec.base_latency_ms[b] * scale, spec.latency_jitter_ms, 0.0, np.inf)
        lat = max(1, int(round(latency)))
        space_gap = int(rng.integers(80, 250))
        if t + lat + space_gap > spec.duration_ms:
            break
        t0 = spec.start_ms + int(t)
        events.append(KeyEvent(t0, b[0]))
        events.append(KeyEvent(t0 + lat, b[1]))
        events.append(KeyEvent(t0 + lat + space_gap, "SPACE"))
        t = int(t) + lat + space_gap + spec.pair_interval_ms * rng.uniform(0.5, 1.5)

    lo, hi = RR_PLAUSIBLE_MS
    intervals = []
    elapsed = 0.0
    while True:
        sd = spec.base_sdnn_ms * (1.0 - spec.coupling_hrv * spec.stress_at(elapsed))
        rr = _truncated_normal(rng, spec.base_rr_ms, sd, lo, hi)
        if elapsed + rr > spec.duration_ms:
            break
        intervals.append(rr)
        elapsed += rr
    rr_series = RrSeries.from_intervals(intervals, spec.start_ms)

    truth = [(spec.start_ms + k * BLOCK_MS, spec.stress_at(k * BLOCK_MS))
             for k in range(-(-spec.duration_ms // BLOCK_MS))]
    return SyntheticSession(events, rr_series, truth, spec.start_ms)


def write_session(session: SyntheticSession, outdir: str | os.PathLike) -> dict[str, Path]:
    """Write the session in the canonical ingest formats.

    Returns the paths written, keyed by role. ``session.cfg`` carries the RR
    anchor time so the directory can be analysed as-is.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    keymap = default_keymap()
    paths = {
        "keystrokes": out / "keystrokes.csv",
        "keymap": out / "keymap.csv",
        "rr": out / "rr.txt",
        "ground_truth": out / "ground_truth.csv",
        "config": out / "session.cfg",
    }
    paths["keystrokes"].write_text(format_keystrokes(session.events, keymap), encoding="utf-8")
    paths["keymap"].write_text(format_keymap(keymap), encoding="utf-8")
    paths["rr"].write_text(format_rr(session.rr), encoding="utf-8")
    truth = "window_start_ms,stress\n" + "".join(f"{t},{s!r}\n" for t, s in session.ground_truth)
    paths["ground_truth"].write_text(truth, encoding="utf-8")
    paths["config"].write_text(f"rr_start_ms = {session.start_ms}\n", encoding="utf-8")
    return paths
