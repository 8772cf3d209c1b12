"""
End-to-end analysis of one user's recording.

The HRV baseline averages SDNN over every typing window with enough beats,
whether or not a tracked bigram was typed in it. Only windows that contain
a tracked bigram are paired with HRV.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import correlate, hrv, keydyn
from .config import AnalysisConfig
from .ingest import KeyEvent, RrSeries


@dataclass(frozen=True)
class KeystrokeAnalysis:
    episodes: list[keydyn.TypingEpisode]
    instances: list[keydyn.BigramInstance]
    windows: list[keydyn.LatencyWindow]
    anchors: list[tuple[int, int]]
    baseline: keydyn.BigramBaseline
    deviations: list[keydyn.KeystrokeDeviation]

    @property
    def n_windows_total(self) -> int:
        return len(self.anchors)


@dataclass(frozen=True)
class AnalysisResult:
    keystrokes: KeystrokeAnalysis
    nn: hrv.NnSeries
    hrv_windows: list[hrv.HrvWindow]
    hrv_baseline: hrv.HrvBaseline
    alignment: correlate.Alignment
    report: correlate.CorrelationReport


def analyze_keystrokes(events: Sequence[KeyEvent], config: AnalysisConfig = AnalysisConfig()) -> KeystrokeAnalysis:
    bigrams = config.active_bigrams
    episodes = keydyn.segment_episodes(events, config.gap_threshold_ms)
    instances, windows, anchors = [], [], []
    for ep in episodes:
        instances.extend(keydyn.extract_bigram_instances(ep, bigrams, config.cutoff_ms, config.pass_through))
        windows.extend(keydyn.window_latency_stats(ep, bigrams, config.window_ms, config.step_ms,
                                                   config.cutoff_ms, config.include_short,
                                                   config.pass_through))
        for offset, length in keydyn.window_offsets(ep.duration_ms, config.window_ms, config.step_ms):
            if length < config.window_ms and not config.include_short:
                continue
            anchors.append((ep.start_ms + offset, length))
    baseline = keydyn.bigram_baseline(instances, bigrams)
    deviations = [keydyn.keystroke_deviation(w, baseline) for w in windows]
    return KeystrokeAnalysis(episodes, instances, windows, anchors, baseline, deviations)


def analyze(events: Sequence[KeyEvent], rr: RrSeries,
            config: AnalysisConfig = AnalysisConfig()) -> AnalysisResult:
    ks = analyze_keystrokes(events, config)
    nn = hrv.filter_ectopic_malik(rr, config.malik_tolerance)
    hrv_windows = hrv.window_hrv(nn, [a for a, _ in ks.anchors], config.window_ms,
                                 config.min_intervals, durations=[d for _, d in ks.anchors])
    base = hrv.hrv_baseline(hrv_windows)
    alignment = correlate.align(ks.deviations, hrv_windows, base)
    coverage = correlate.coverage_summary(ks.windows, ks.n_windows_total, config.active_bigrams)
    report = correlate.correlation_report(alignment, coverage, config.excluded_bigrams)
    return AnalysisResult(ks, nn, hrv_windows, base, alignment, report)
