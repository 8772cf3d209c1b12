"""
Time-domain heart rate variability.

RR intervals are cleaned of ectopic beats with Malik's 20 % rule and the
surviving NN intervals are summarised per window as SDNN and RMSSD.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ingest import RrSeries

DEFAULT_TOLERANCE = 0.2
DEFAULT_MIN_INTERVALS = 30


@dataclass(frozen=True)
class NnSeries:
    end_ms: np.ndarray
    nn_ms: np.ndarray
    rejected_count: int = 0

    def __len__(self) -> int:
        return len(self.nn_ms)

    def as_rr(self) -> RrSeries:
        return RrSeries(self.end_ms, self.nn_ms)


@dataclass(frozen=True)
class HrvWindow:
    start_ms: int
    end_ms: int
    sdnn_ms: float
    rmssd_ms: float
    n_intervals: int


@dataclass(frozen=True)
class HrvBaseline:
    mean_sdnn_ms: float
    n_windows: int


def filter_ectopic_malik(rr: RrSeries, tolerance: float = DEFAULT_TOLERANCE) -> NnSeries:
    """Drop intervals deviating more than ``tolerance`` from the last accepted one.

    The first interval is always accepted. Comparing against the last
    *accepted* interval (rather than the raw predecessor) stops a single
    ectopic beat from rejecting the normal beat that follows it.
    """
    if not 0 < tolerance < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    values = rr.rr_ms
    if len(values) == 0:
        raise ValueError("empty series")
    keep = np.zeros(len(values), dtype=bool)
    keep[0] = True
    last = values[0]
    for i in range(1, len(values)):
        r = values[i]
        if abs(r - last) <= tolerance * last:
            keep[i] = True
            last = r
    return NnSeries(rr.end_ms[keep], values[keep], int(len(values) - keep.sum()))


def _as_intervals(nn) -> np.ndarray:
    x = np.asarray(nn, dtype=np.float64)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("insufficient intervals: need at least 2")
    return x


def sdnn(nn: Sequence[float]) -> float:
    """Population standard deviation (divide by N) of NN intervals, in ms."""
    # shifting by the first value keeps a constant series exactly at zero
    d = _as_intervals(nn)
    d = d - d[0]
    return float(np.sqrt(np.mean((d - d.mean()) ** 2)))


def rmssd(nn: Sequence[float]) -> float:
    """Root mean square of successive NN differences, in ms."""
    x = _as_intervals(nn)
    return float(np.sqrt(np.mean(np.diff(x) ** 2)))


def sliding_anchors(start_ms: int, end_ms: int, window_ms: int = 300_000,
                    step_ms: int = 150_000) -> list[int]:
    """Window starts on a regular grid covering [start_ms, end_ms]."""
    if not window_ms > step_ms > 0:
        raise ValueError("need window_ms > step_ms > 0")
    if end_ms - start_ms < window_ms:
        return []
    count = (end_ms - start_ms - window_ms) // step_ms + 1
    return [start_ms + k * step_ms for k in range(count)]


def window_hrv(nn: NnSeries, anchors: Iterable[int], window_ms: int = 300_000,
               min_intervals: int = DEFAULT_MIN_INTERVALS,
               durations: Iterable[int] | None = None) -> list[HrvWindow]:
    """SDNN and RMSSD for each window ``[anchor, anchor + window_ms)``.

    Intervals are assigned by the timestamp of their closing beat. Windows
    holding fewer than ``min_intervals`` intervals are left out. ``durations``
    overrides the window length per anchor, e.g. for short typing episodes.
    """
    if window_ms <= 0:
        raise ValueError("window_ms must be positive")
    anchors = list(anchors)
    lengths = [window_ms] * len(anchors) if durations is None else list(durations)
    if len(lengths) != len(anchors):
        raise ValueError("durations must match anchors in length")
    need = max(min_intervals, 2)
    out = []
    for start, length in zip(anchors, lengths):
        lo, hi = np.searchsorted(nn.end_ms, [start, start + length], side="left")
        if hi - lo < need:
            continue
        seg = nn.nn_ms[lo:hi]
        out.append(HrvWindow(int(start), int(start + length), sdnn(seg), rmssd(seg), int(hi - lo)))
    return out


def hrv_baseline(windows: Sequence[HrvWindow]) -> HrvBaseline:
    if not windows:
        raise ValueError("no valid HRV windows for baseline")
    return HrvBaseline(float(np.mean([w.sdnn_ms for w in windows])), len(windows))
