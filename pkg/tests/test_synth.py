import numpy as np
import pytest

from keyhrv.hrv import sdnn
from keyhrv.ingest import default_keymap, load_keystrokes, load_rr
from keyhrv.keydyn import extract_bigram_instances, segment_episodes
from keyhrv.synth import BLOCK_MS, SessionSpec, SpecError, generate, load_session_spec, write_session

HOUR = 3_600_000


def instances(session):
    out = []
    for ep in segment_episodes(session.events):
        out.extend(extract_bigram_instances(ep, session_bigrams))
    return out


session_bigrams = ("TH", "HE", "IN", "ER", "AN", "RE", "ON", "AT", "EN", "ND")


def test_same_seed_identical(tmp_path):
    spec = SessionSpec(duration_ms=HOUR, stress_signal=(0, 1), coupling_latency=0.3, rng_seed=11)
    a, b = generate(spec), generate(spec)
    assert a.events == b.events and a.rr == b.rr and a.ground_truth == b.ground_truth
    pa, pb = write_session(a, tmp_path / "a"), write_session(b, tmp_path / "b")
    for key in pa:
        assert pa[key].read_bytes() == pb[key].read_bytes()
    assert generate(SessionSpec(duration_ms=HOUR, rng_seed=12)).events != a.events


def test_decoupled_zero_jitter_latencies_equal_base():
    spec = SessionSpec(duration_ms=BLOCK_MS * 2, latency_jitter_ms=0.0, stress_signal=(0, 1),
                       base_latency_ms={b: 100.0 + 10 * k for k, b in enumerate(session_bigrams)})
    for inst in instances(generate(spec)):
        assert inst.latency_ms == spec.base_latency_ms[inst.bigram]


def test_decoupled_rr_spread_is_constant_sigma():
    spec = SessionSpec(duration_ms=4 * BLOCK_MS, base_sdnn_ms=40.0, stress_signal=(0, 1), rng_seed=3)
    rr = generate(spec).rr
    for k in range(4):
        lo, hi = spec.start_ms + k * BLOCK_MS, spec.start_ms + (k + 1) * BLOCK_MS
        block = rr.rr_ms[(rr.end_ms >= lo) & (rr.end_ms < hi)]
        assert sdnn(block) == pytest.approx(40.0, rel=0.15)


def test_stress_stretches_latency_by_coupling():
    # ~10^4 instances per regime; compare regime means
    means = []
    for stress in (0.0, 1.0):
        spec = SessionSpec(duration_ms=3 * HOUR, stress_signal=(stress,), coupling_latency=0.5,
                           pair_interval_ms=500.0, rng_seed=5)
        inst = instances(generate(spec))
        assert len(inst) >= 10_000
        means.append(np.mean([i.latency_ms for i in inst]))
    assert means[1] / means[0] == pytest.approx(1.5, rel=0.02)


def test_stress_suppresses_rr_variability():
    spec = SessionSpec(duration_ms=2 * BLOCK_MS, stress_signal=(0, 1), coupling_hrv=0.5,
                       base_sdnn_ms=60.0, rng_seed=2)
    rr = generate(spec).rr
    split = spec.start_ms + BLOCK_MS
    calm, stressed = rr.rr_ms[rr.end_ms < split], rr.rr_ms[rr.end_ms >= split]
    assert sdnn(stressed) / sdnn(calm) == pytest.approx(0.5, rel=0.2)


def test_ground_truth_blocks():
    spec = SessionSpec(duration_ms=int(3.5 * BLOCK_MS), stress_signal=(0.0, 1.0, 0.5))
    truth = generate(spec).ground_truth
    assert truth == [(spec.start_ms + k * BLOCK_MS, s) for k, s in enumerate([0.0, 1.0, 0.5, 0.0])]


def test_rr_in_band_and_events_sorted():
    s = generate(SessionSpec(duration_ms=HOUR, base_sdnn_ms=400.0, rng_seed=9))
    assert s.rr.rr_ms.min() > 300 and s.rr.rr_ms.max() <= 2000
    ts = [e.timestamp_ms for e in s.events]
    assert ts == sorted(ts) and ts[-1] - ts[0] <= HOUR


@pytest.mark.parametrize("kwargs, field", [
    (dict(bigram_frequencies={"TH": 0.5, "HE": 0.4}), "bigram_frequencies"),
    (dict(duration_ms=1000), "duration_ms"),
    (dict(coupling_latency=-1), "coupling_latency"),
    (dict(stress_signal=(2,)), "stress_signal"),
    (dict(base_latency_ms={"TH": 100.0}), "base_latency_ms"),
    (dict(base_rr_ms=100.0), "base_rr_ms"),
])
def test_invalid_spec_names_field(kwargs, field):
    with pytest.raises(SpecError) as err:
        SessionSpec(**kwargs)
    assert err.value.field == field and field in str(err.value)


def test_spec_file_and_reingest(tmp_path):
    path = tmp_path / "spec.cfg"
    path.write_text("# minimal\nduration_ms = 600000\nrng_seed = 4\nstress_signal = 0, 1\n"
                    "bigram_frequencies = TH:0.6, ER:0.4\nbase_latency_ms = TH:120, ER:90\n")
    spec = load_session_spec(path)
    assert spec.stress_signal == (0.0, 1.0) and spec.bigram_frequencies == {"TH": 0.6, "ER": 0.4}
    session = generate(spec)
    paths = write_session(session, tmp_path / "out")
    assert load_keystrokes(paths["keystrokes"], default_keymap(), strict=True) == session.events
    assert load_rr(paths["rr"], spec.start_ms) == session.rr
    assert paths["ground_truth"].read_text().splitlines()[0] == "window_start_ms,stress"


def test_spec_file_unknown_key(tmp_path):
    path = tmp_path / "spec.cfg"
    path.write_text("durationms = 5\n")
    with pytest.raises(SpecError, match="durationms"):
        load_session_spec(path)
