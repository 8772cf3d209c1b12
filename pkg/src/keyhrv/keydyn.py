"""
Keystroke timing features: typing episodes, bigram latencies, windowed means,
per-user baselines and window-vs-baseline deviation ratios.

Latency is measured press-to-press: the time from the key-down of the first
letter of a bigram to the key-down of the second.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ingest import KeyEvent

#: Norvig's ten most frequent English letter bigrams, in rank order.
TOP10_BIGRAMS = ("TH", "HE", "IN", "ER", "AN", "RE", "ON", "AT", "EN", "ND")

DEFAULT_CUTOFF_MS = 1000
DEFAULT_WINDOW_MS = 300_000
DEFAULT_STEP_MS = 150_000
DEFAULT_GAP_MS = 300_000


def default_bigram_set() -> list[str]:
    return list(TOP10_BIGRAMS)


@dataclass(frozen=True)
class TypingEpisode:
    id: int
    events: tuple[KeyEvent, ...]

    @property
    def start_ms(self) -> int:
        return self.events[0].timestamp_ms

    @property
    def end_ms(self) -> int:
        return self.events[-1].timestamp_ms

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class BigramInstance:
    bigram: str
    latency_ms: float
    onset_ms: int


@dataclass(frozen=True)
class LatencyWindow:
    """Mean bigram latencies for the instances whose onset falls in a window.

    ``short`` marks a window that covers a whole episode shorter than the
    nominal window length.
    """

    episode_id: int
    start_ms: int
    duration_ms: int
    per_bigram_mean: dict[str, float]
    per_bigram_count: dict[str, int]
    short: bool = False

    @property
    def n_instances(self) -> int:
        return sum(self.per_bigram_count.values())

    @property
    def n_bigrams(self) -> int:
        return len(self.per_bigram_mean)


@dataclass(frozen=True)
class BigramBaseline:
    per_bigram_mean: dict[str, float]
    per_bigram_count: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_means(cls, means: Mapping[str, float]) -> "BigramBaseline":
        """Build a baseline from already-aggregated per-bigram means."""
        return cls(dict(means), {})

    @property
    def grand_mean(self) -> float:
        if not self.per_bigram_mean:
            raise ValueError("empty baseline")
        return float(np.mean(list(self.per_bigram_mean.values())))


@dataclass(frozen=True)
class KeystrokeDeviation:
    episode_id: int
    start_ms: int
    duration_ms: int
    deviation: float
    n_bigrams: int


def segment_episodes(events: Sequence[KeyEvent], gap_threshold_ms: int = DEFAULT_GAP_MS) -> list[TypingEpisode]:
    """Split a time-sorted event stream wherever the inter-event gap reaches the threshold."""
    if gap_threshold_ms <= 0:
        raise ValueError("gap_threshold_ms must be positive")
    episodes = []
    current: list[KeyEvent] = []
    prev_ts = None
    for ev in events:
        if prev_ts is not None and ev.timestamp_ms < prev_ts:
            raise ValueError("events must be sorted by timestamp")
        if current and ev.timestamp_ms - prev_ts >= gap_threshold_ms:
            episodes.append(TypingEpisode(len(episodes), tuple(current)))
            current = []
        current.append(ev)
        prev_ts = ev.timestamp_ms
    if current:
        episodes.append(TypingEpisode(len(episodes), tuple(current)))
    return episodes


def extract_bigram_instances(episode: TypingEpisode, bigrams: Iterable[str] = TOP10_BIGRAMS,
                             cutoff_ms: int = DEFAULT_CUTOFF_MS,
                             pass_through: bool = False) -> list[BigramInstance]:
    """Find bigram occurrences typed within ``cutoff_ms`` of each other.

    By default any non-letter key (space, backspace, punctuation) between two
    letters breaks the pair. With ``pass_through=True`` non-letter keys are
    skipped and the surrounding letters count as adjacent.
    """
    if cutoff_ms <= 0:
        raise ValueError("cutoff_ms must be positive")
    wanted = set(bigrams)
    out = []
    prev = None
    for ev in episode.events:
        if not ev.is_letter:
            if not pass_through:
                prev = None
            continue
        if prev is not None:
            bigram = prev.symbol + ev.symbol
            latency = ev.timestamp_ms - prev.timestamp_ms
            if bigram in wanted and 0 < latency <= cutoff_ms:
                out.append(BigramInstance(bigram, float(latency), prev.timestamp_ms))
        prev = ev
    return out


def window_offsets(duration_ms: int, window_ms: int = DEFAULT_WINDOW_MS,
                   step_ms: int = DEFAULT_STEP_MS) -> list[tuple[int, int]]:
    """(offset, length) pairs of the sliding windows that fit in an episode.

    An episode shorter than one window gets a single window spanning it.
    """
    if not window_ms > step_ms > 0:
        raise ValueError("need window_ms > step_ms > 0")
    if duration_ms < window_ms:
        return [(0, duration_ms)]
    count = (duration_ms - window_ms) // step_ms + 1
    return [(k * step_ms, window_ms) for k in range(count)]


def _mean_by_bigram(instances: Iterable[BigramInstance]) -> tuple[dict[str, float], dict[str, int]]:
    sums: dict[str, float] = defaultdict(float)
    counts: dict[str, int] = defaultdict(int)
    for inst in instances:
        sums[inst.bigram] += inst.latency_ms
        counts[inst.bigram] += 1
    means = {b: sums[b] / counts[b] for b in sums}
    return means, dict(counts)


def _ordered(d: Mapping, order: Sequence[str]) -> dict:
    rank = {b: i for i, b in enumerate(order)}
    return {k: d[k] for k in sorted(d, key=lambda b: (rank.get(b, len(rank)), b))}


def window_latency_stats(episode: TypingEpisode, bigrams: Sequence[str] = TOP10_BIGRAMS,
                         window_ms: int = DEFAULT_WINDOW_MS, step_ms: int = DEFAULT_STEP_MS,
                         cutoff_ms: int = DEFAULT_CUTOFF_MS, include_short: bool = True,
                         pass_through: bool = False) -> list[LatencyWindow]:
    """Per-window mean latency of each bigram, windows anchored at the episode start.

    Windows without any bigram instance are omitted.
    """
    instances = extract_bigram_instances(episode, bigrams, cutoff_ms, pass_through)
    onsets = np.array([inst.onset_ms for inst in instances], dtype=np.int64)
    bigrams = list(bigrams)
    windows = []
    for offset, length in window_offsets(episode.duration_ms, window_ms, step_ms):
        short = length < window_ms
        if short and not include_short:
            continue
        start = episode.start_ms + offset
        lo, hi = np.searchsorted(onsets, [start, start + length], side="left")
        if hi <= lo:
            continue
        means, counts = _mean_by_bigram(instances[lo:hi])
        windows.append(LatencyWindow(episode.id, start, length, _ordered(means, bigrams),
                                     _ordered(counts, bigrams), short))
    return windows


def bigram_baseline(instances: Iterable[BigramInstance],
                    bigrams: Sequence[str] | None = None) -> BigramBaseline:
    """Whole-recording mean latency per bigram."""
    if bigrams is not None:
        wanted = set(bigrams)
        instances = [i for i in instances if i.bigram in wanted]
    means, counts = _mean_by_bigram(instances)
    if not means:
        raise ValueError("empty baseline")
    order = list(bigrams) if bigrams is not None else list(TOP10_BIGRAMS)
    return BigramBaseline(_ordered(means, order), _ordered(counts, order))


def keystroke_deviation(window: LatencyWindow, baseline: BigramBaseline) -> KeystrokeDeviation:
    """Average relative difference of window means from baseline means over shared bigrams."""
    shared = [b for b in window.per_bigram_mean if b in baseline.per_bigram_mean]
    if not shared:
        raise ValueError("no overlap between window and baseline bigrams")
    ratios = [(window.per_bigram_mean[b] - baseline.per_bigram_mean[b]) / baseline.per_bigram_mean[b]
              for b in shared]
    return KeystrokeDeviation(window.episode_id, window.start_ms, window.duration_ms,
                              float(np.mean(ratios)), len(shared))


def _drop_keys(d: Mapping, excluded: set) -> dict:
    return {k: v for k, v in d.items() if k not in excluded}


def exclude_bigrams(obj, excluded: Iterable[str], bigrams: Sequence[str] = TOP10_BIGRAMS):
    """Remove ``excluded`` bigrams from a baseline, a window, or a list of windows.

    Windows left with no bigram are dropped from lists; a single window that
    becomes empty raises.
    """
    excluded = set(excluded)
    unknown = excluded - set(bigrams)
    if unknown:
        raise ValueError(f"excluded bigrams not in bigram set: {sorted(unknown)}")
    if excluded and excluded >= set(bigrams):
        raise ValueError("empty bigram set")
    if not excluded:
        return obj
    if isinstance(obj, BigramBaseline):
        means = _drop_keys(obj.per_bigram_mean, excluded)
        if not means:
            raise ValueError("empty baseline")
        return BigramBaseline(means, _drop_keys(obj.per_bigram_count, excluded))
    if isinstance(obj, LatencyWindow):
        means = _drop_keys(obj.per_bigram_mean, excluded)
        if not means:
            raise ValueError("window has no remaining bigrams")
        return replace(obj, per_bigram_mean=means,
                       per_bigram_count=_drop_keys(obj.per_bigram_count, excluded))
    out = []
    for w in obj:
        means = _drop_keys(w.per_bigram_mean, excluded)
        if means:
            out.append(replace(w, per_bigram_mean=means,
                               per_bigram_count=_drop_keys(w.per_bigram_count, excluded)))
    return out
