import numpy as np
import pytest
from hypothesis import given, strategies as st

from keyhrv.hrv import (HrvWindow, NnSeries, filter_ectopic_malik, hrv_baseline, rmssd, sdnn,
                        sliding_anchors, window_hrv)
from keyhrv.ingest import RrSeries

from oracles import malik_reference, successive_rms, two_pass_std

rr_lists = st.lists(st.floats(300, 2000, allow_nan=False), min_size=1, max_size=300)


class TestMalik:
    def test_all_within_tolerance(self):
        nn = filter_ectopic_malik(RrSeries.from_intervals([800, 810, 805]))
        assert nn.nn_ms.tolist() == [800, 810, 805] and nn.rejected_count == 0

    def test_single_ectopic(self):
        nn = filter_ectopic_malik(RrSeries.from_intervals([800, 810, 1200, 805]))
        assert nn.nn_ms.tolist() == [800, 810, 805]
        assert nn.rejected_count == 1
        # timestamps of surviving beats are kept, not recomputed
        assert nn.end_ms.tolist() == [800, 1610, 3615]

    def test_constant(self):
        nn = filter_ectopic_malik(RrSeries.from_intervals([700.0] * 50))
        assert nn.nn_ms.tolist() == [700.0] * 50

    def test_compares_against_last_accepted(self):
        # 1000 is rejected; 640 is within 20% of 800 but not of 1000
        nn = filter_ectopic_malik(RrSeries.from_intervals([800, 1000, 640]), 0.2)
        assert nn.nn_ms.tolist() == [800, 640]

    def test_errors(self):
        with pytest.raises(ValueError, match="empty"):
            filter_ectopic_malik(RrSeries.from_intervals([]))
        with pytest.raises(ValueError):
            filter_ectopic_malik(RrSeries.from_intervals([800]), 1.5)

    @given(rr_lists)
    def test_matches_reference_and_invariants(self, values):
        nn = filter_ectopic_malik(RrSeries.from_intervals(values))
        assert nn.nn_ms.tolist() == malik_reference(values)
        assert nn.rejected_count == len(values) - len(nn)
        a = nn.nn_ms
        assert np.all(np.abs(np.diff(a)) <= 0.2 * a[:-1])

    @given(rr_lists)
    def test_idempotent(self, values):
        once = filter_ectopic_malik(RrSeries.from_intervals(values))
        twice = filter_ectopic_malik(once.as_rr())
        assert twice.rejected_count == 0
        assert np.array_equal(twice.nn_ms, once.nn_ms) and np.array_equal(twice.end_ms, once.end_ms)


class TestMetrics:
    def test_sdnn_examples(self):
        assert sdnn([800, 800, 800]) == 0
        assert sdnn([800, 850, 900]) == pytest.approx(np.sqrt(5000 / 3))
        assert sdnn([800, 850, 900]) == pytest.approx(40.82, abs=0.005)

    def test_rmssd_examples(self):
        assert rmssd([800, 800, 800]) == 0
        assert rmssd([800, 850]) == 50
        assert rmssd([800, 850, 900]) == pytest.approx(50)

    @pytest.mark.parametrize("f", [sdnn, rmssd])
    def test_insufficient(self, f):
        with pytest.raises(ValueError, match="insufficient"):
            f([800])

    @given(st.lists(st.floats(300, 2000), min_size=2, max_size=100), st.floats(0.1, 10))
    def test_homogeneity_and_oracle(self, xs, k):
        scaled = [x * k for x in xs]
        assert sdnn(scaled) == pytest.approx(k * sdnn(xs), rel=1e-9, abs=1e-9)
        assert rmssd(scaled) == pytest.approx(k * rmssd(xs), rel=1e-9, abs=1e-9)
        assert sdnn(xs) == pytest.approx(two_pass_std(xs), rel=1e-9, abs=1e-9)
        assert rmssd(xs) == pytest.approx(successive_rms(xs), rel=1e-9, abs=1e-9)
        assert sdnn(xs) >= 0 and rmssd(xs) >= 0

    def test_rmssd_zero_only_for_constant_difference(self):
        assert rmssd([800, 800, 800, 800]) == 0
        assert rmssd([800, 810, 820]) > 0  # constant nonzero step still has differences
        assert sdnn([800, 810, 820]) > 0


def nn_from(values, start=0):
    rr = RrSeries.from_intervals(values, start)
    return NnSeries(rr.end_ms, rr.rr_ms)


class TestWindowing:
    def test_constant_beats(self):
        nn = nn_from([1000.0] * 400)
        (w,) = window_hrv(nn, [0], 300_000, 30)
        assert w.sdnn_ms == 0 and w.rmssd_ms == 0
        # beats ending at 1000..299000 ms
        assert w.n_intervals == 299
        assert (w.start_ms, w.end_ms) == (0, 300_000)

    def test_gap_window_excluded(self):
        nn = NnSeries(np.array([1000, 2000, 3000, 900_000]), np.array([1000.0, 1000.0, 1000.0, 1000.0]))
        assert window_hrv(nn, [0], 300_000, 30) == []
        assert len(window_hrv(nn, [0], 300_000, 3)) == 1

    def test_fifteen_minute_anchors(self):
        nn = nn_from([800.0, 820.0] * 600)
        anchors = sliding_anchors(0, 900_000)
        assert anchors == [0, 150_000, 300_000, 450_000, 600_000]
        wins = window_hrv(nn, anchors)
        assert len(wins) == 5
        assert all(w.sdnn_ms == pytest.approx(10.0, abs=0.05) for w in wins)

    def test_per_anchor_durations(self):
        nn = nn_from([1000.0] * 400)
        (w,) = window_hrv(nn, [0], 300_000, 30, durations=[60_000])
        assert w.end_ms == 60_000 and w.n_intervals == 59

    def test_window_contents_match_oracle(self):
        rng = np.random.default_rng(1)
        values = rng.normal(800, 40, 2000)
        nn = nn_from(values, 10_000)
        for w in window_hrv(nn, sliding_anchors(10_000, int(nn.end_ms[-1]))):
            inside = [v for e, v in zip(nn.end_ms, nn.nn_ms) if w.start_ms <= e < w.end_ms]
            assert w.n_intervals == len(inside)
            assert w.sdnn_ms == pytest.approx(two_pass_std(inside), rel=1e-9)


class TestBaseline:
    def test_mean(self):
        wins = [HrvWindow(0, 1, s, 0, 30) for s in (100.0, 110.0, 120.0)]
        assert hrv_baseline(wins).mean_sdnn_ms == pytest.approx(110.0)

    def test_single(self):
        assert hrv_baseline([HrvWindow(0, 1, 42.0, 0, 30)]).mean_sdnn_ms == 42.0

    def test_empty(self):
        with pytest.raises(ValueError):
            hrv_baseline([])


@given(st.floats(300, 2000), st.integers(2, 500))
def test_constant_series_exactly_zero(value, n):
    assert sdnn([value] * n) == 0.0
    assert rmssd([value] * n) == 0.0
