"""
Bigram latencies from a keystroke log
=====================================

Walk through the keystroke half of the analysis: parse a log, cut it into
typing episodes, pull out top-10 bigram latencies and summarise them in
overlapping 5-minute windows.
"""
import numpy as np

from keyhrv import keydyn
from keyhrv.correlate import latency_cdf
from keyhrv.ingest import default_keymap, format_keystrokes, parse_keystrokes
from keyhrv.synth import SessionSpec, generate

###############################################################################
# A log in the canonical ``timestamp_ms,keycode`` format. We let the
# generator type for 40 minutes and serialise it, as a capture tool would.
session = generate(SessionSpec(duration_ms=40 * 60_000, rng_seed=1))
log = format_keystrokes(session.events, default_keymap())
print(log[:80])

events = parse_keystrokes(log, default_keymap())
print(len(events), "key presses")

###############################################################################
# Episodes are split on 5 minutes of inactivity; this session is one burst.
episodes = keydyn.segment_episodes(events)
ep = episodes[0]
print(len(episodes), "episode(s), first lasts", ep.duration_ms / 60_000, "min")

###############################################################################
# Latency is key-down to key-down, kept only when under one second.
instances = keydyn.extract_bigram_instances(ep)
for bigram in ("TH", "ER"):
    lat = [i.latency_ms for i in instances if i.bigram == bigram]
    print(f"{bigram}: {len(lat)} instances, mean {np.mean(lat):.1f} ms")

###############################################################################
# Windows start every 2.5 minutes and last 5. An episode just short of 40
# minutes holds 14 of them; the partial tail is not windowed.
windows = keydyn.window_latency_stats(ep)
print(len(windows), "windows; first window ER mean:",
      round(windows[0].per_bigram_mean["ER"], 1), "ms")

###############################################################################
# The whole-recording baseline, and how far each window drifts from it.
baseline = keydyn.bigram_baseline(instances)
print("grand mean", round(baseline.grand_mean, 1), "ms")
devs = [keydyn.keystroke_deviation(w, baseline).deviation for w in windows]
print("window deviations:", np.round(devs, 3))

###############################################################################
# Plot-ready empirical CDF for one bigram.
cdf = latency_cdf(instances, "TH")
print("TH CDF (first points):", cdf[:3], "...", cdf[-1])
