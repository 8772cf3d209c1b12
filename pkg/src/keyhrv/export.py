"""CSV and JSON writers for analysis outputs. All output is byte-deterministic."""
from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Iterable, Sequence

from .correlate import CorrelationReport, PairedSample
from .hrv import HrvBaseline, HrvWindow
from .keydyn import BigramBaseline, LatencyWindow


def _write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_baseline(path, baseline: BigramBaseline) -> Path:
    return _write_csv(path, ["bigram", "baseline_ms"], baseline.per_bigram_mean.items())


def write_windows(path, windows: Iterable[LatencyWindow]) -> Path:
    rows = ((w.episode_id, w.start_ms, b, m, w.per_bigram_count[b])
            for w in windows for b, m in w.per_bigram_mean.items())
    return _write_csv(path, ["episode_id", "start_ms", "bigram", "mean_latency_ms", "n"], rows)


def write_hrv_windows(path, windows: Iterable[HrvWindow]) -> Path:
    rows = ((w.start_ms, w.sdnn_ms, w.rmssd_ms, w.n_intervals) for w in windows)
    return _write_csv(path, ["start_ms", "sdnn_ms", "rmssd_ms", "n_intervals"], rows)


def write_scatter(path, pairs: Iterable[PairedSample]) -> Path:
    rows = ((p.start_ms, p.keystroke_deviation, p.sdnn_ms, p.hrv_deviation) for p in pairs)
    return _write_csv(path, ["start_ms", "keystroke_deviation", "sdnn_ms", "hrv_deviation"], rows)


def report_dict(report: CorrelationReport, **extra) -> dict:
    """Report fields in their fixed output order, followed by ``extra``."""
    cov = report.coverage
    out = {
        "n": report.n,
        "pearson_r": report.pearson_r,
        "spearman_rho": report.spearman_rho,
        "low_confidence": report.low_confidence,
        "n_windows": cov.n_windows,
        "n_windows_nonempty": cov.n_nonempty,
        "pct_windows_nonempty": cov.pct_nonempty,
        "mean_distinct_bigrams": cov.mean_distinct_bigrams,
        "excluded_bigrams": list(report.excluded_bigrams),
    }
    out.update(extra)
    return out


def write_json(path, data: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path


def hrv_baseline_dict(base: HrvBaseline) -> dict:
    return {"mean_sdnn_ms": base.mean_sdnn_ms, "n_windows": base.n_windows}
