"""
Pairing of keystroke and HRV windows, correlation coefficients, empirical
latency CDFs and bigram coverage statistics.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .hrv import HrvBaseline, HrvWindow
from .keydyn import BigramInstance, KeystrokeDeviation, LatencyWindow

MIN_CORRELATION_N = 3
LOW_CONFIDENCE_N = 10


@dataclass(frozen=True)
class PairedSample:
    start_ms: int
    keystroke_deviation: float
    sdnn_ms: float
    hrv_deviation: float


@dataclass(frozen=True)
class Alignment:
    pairs: list[PairedSample]
    unmatched_keystroke: int
    unmatched_hrv: int


@dataclass(frozen=True)
class Coverage:
    n_windows: int
    n_nonempty: int
    pct_nonempty: float
    mean_distinct_bigrams: float


@dataclass(frozen=True)
class CorrelationReport:
    n: int
    pearson_r: float | None
    spearman_rho: float | None
    coverage: Coverage
    excluded_bigrams: tuple[str, ...] = ()

    @property
    def low_confidence(self) -> bool:
        return self.n < LOW_CONFIDENCE_N


def align(deviations: Sequence[KeystrokeDeviation], hrv_windows: Sequence[HrvWindow],
          baseline: HrvBaseline) -> Alignment:
    """Inner-join keystroke deviations and HRV windows on (start, length)."""
    by_key = {}
    for w in hrv_windows:
        key = (w.start_ms, w.end_ms - w.start_ms)
        if key in by_key:
            raise ValueError(f"duplicate HRV window at {w.start_ms}")
        by_key[key] = w
    pairs = []
    seen = set()
    for d in deviations:
        key = (d.start_ms, d.duration_ms)
        if key in seen:
            raise ValueError(f"duplicate keystroke window at {d.start_ms}")
        seen.add(key)
        w = by_key.get(key)
        if w is None:
            continue
        hrv_dev = (w.sdnn_ms - baseline.mean_sdnn_ms) / baseline.mean_sdnn_ms
        pairs.append(PairedSample(d.start_ms, d.deviation, w.sdnn_ms, hrv_dev))
    pairs.sort(key=lambda p: p.start_ms)
    return Alignment(pairs, len(deviations) - len(pairs), len(hrv_windows) - len(pairs))


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    if len(x) < MIN_CORRELATION_N:
        raise ValueError(f"need at least {MIN_CORRELATION_N} samples, got {len(x)}")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    x, y = _check_pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        raise ValueError("degenerate input: zero variance")
    r = np.dot(dx, dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average-tie ranks."""
    x, y = _check_pair(x, y)
    return pearson(rankdata(x), rankdata(y))


def latency_cdf(instances: Iterable[BigramInstance], bigram: str) -> list[tuple[float, float]]:
    """Empirical CDF of one bigram's latencies as (latency, cumulative fraction) steps."""
    values = np.sort([i.latency_ms for i in instances if i.bigram == bigram])
    if len(values) == 0:
        raise ValueError(f"no instances of {bigram}")
    uniq, counts = np.unique(values, return_counts=True)
    frac = np.cumsum(counts) / len(values)
    frac[-1] = 1.0
    return list(zip(uniq.tolist(), frac.tolist()))


def coverage_summary(latency_windows: Sequence[LatencyWindow], all_window_count: int,
                     bigrams: Iterable[str] | None = None) -> Coverage:
    """Share of windows containing any tracked bigram, and distinct bigrams per such window."""
    if all_window_count <= 0:
        raise ValueError("all_window_count must be positive")
    wanted = None if bigrams is None else set(bigrams)
    distinct = []
    for w in latency_windows:
        present = w.per_bigram_mean.keys() if wanted is None else wanted & w.per_bigram_mean.keys()
        if present:
            distinct.append(len(present))
    if len(distinct) > all_window_count:
        raise ValueError("more non-empty windows than windows in total")
    mean_distinct = float(np.mean(distinct)) if distinct else 0.0
    return Coverage(all_window_count, len(distinct), 100.0 * len(distinct) / all_window_count,
                    mean_distinct)


def correlation_report(alignment: Alignment, coverage: Coverage,
                       excluded: Iterable[str] = ()) -> CorrelationReport:
    """Correlate keystroke deviation with window SDNN.

    Coefficients are ``None`` when fewer than three pairs exist or either
    side is constant.
    """
    x = [p.keystroke_deviation for p in alignment.pairs]
    y = [p.sdnn_ms for p in alignment.pairs]
    try:
        r, rho = pearson(x, y), spearman(x, y)
    except ValueError:
        r = rho = None
    return CorrelationReport(len(alignment.pairs), r, rho, coverage, tuple(sorted(excluded)))
