"""Keystroke bigram timing and heart rate variability analysis."""
from .config import AnalysisConfig, load_config
from .correlate import (Alignment, CorrelationReport, Coverage, PairedSample, align, coverage_summary,
                        latency_cdf, pearson, spearman)
from .hrv import (HrvBaseline, HrvWindow, NnSeries, filter_ectopic_malik, hrv_baseline, rmssd, sdnn,
                  window_hrv)
from .ingest import KeyEvent, ParseError, RrSeries, parse_keymap, parse_keystrokes, parse_rr
from .keydyn import (TOP10_BIGRAMS, BigramBaseline, BigramInstance, LatencyWindow, TypingEpisode,
                     bigram_baseline, default_bigram_set, exclude_bigrams, extract_bigram_instances,
                     keystroke_deviation, segment_episodes, window_latency_stats)
from .pipeline import analyze
from .synth import SessionSpec, generate

__version__ = "0.1.0"
