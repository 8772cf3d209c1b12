"""
Short-term HRV from RR intervals
================================

Clean an RR recording of ectopic beats and compute SDNN and RMSSD over
overlapping 5-minute windows.
"""
import numpy as np

from keyhrv.hrv import filter_ectopic_malik, hrv_baseline, sliding_anchors, window_hrv
from keyhrv.ingest import parse_rr

###############################################################################
# Thirty minutes of beats around 850 ms, with a handful of premature beats
# (short interval followed by a compensatory long one).
rng = np.random.default_rng(0)
rr = rng.normal(850, 45, 2100)
for k in rng.choice(len(rr) - 1, 12, replace=False):
    rr[k], rr[k + 1] = 0.6 * rr[k], 1.4 * rr[k + 1]
text = "\n".join(f"{v:.1f}" for v in rr)

series = parse_rr(text, start_ms=0)
print(len(series), "intervals, first samples:", series.samples[:3])

###############################################################################
# Malik's rule: accept an interval only within 20 % of the last accepted one.
nn = filter_ectopic_malik(series)
print("rejected", nn.rejected_count, "intervals")

###############################################################################
# Windows on a 2.5 minute grid; each needs at least 30 beats to count.
anchors = sliding_anchors(0, int(nn.end_ms[-1]))
windows = window_hrv(nn, anchors)
for w in windows[:4]:
    print(f"{w.start_ms / 60_000:5.1f} min  SDNN {w.sdnn_ms:6.1f}  RMSSD {w.rmssd_ms:6.1f}  n={w.n_intervals}")

###############################################################################
# The per-user baseline is the mean window SDNN.
print("baseline SDNN", round(hrv_baseline(windows).mean_sdnn_ms, 1), "ms")
