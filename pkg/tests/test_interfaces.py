"""Interface-diversity tests: trace IO, synthesis, first-arrival combining."""

import math
import os

import numpy as np
import pytest

from urllc_sim.interfaces import (
    LOSS_SENTINEL,
    InterfaceTrace,
    PdConfig,
    SynthTraceModel,
    TraceFormatError,
    align_traces,
    load_trace,
    pd_latency,
    reliability_curve,
    save_trace,
    synth_trace,
)
from urllc_sim.reliability import DROP, reliability_at

DATA_DIR = os.path.join(os.path.dirname(__file__), "data", "traces")


def make_trace(name, latencies, times=None):
    latencies = np.asarray(latencies, dtype=float)
    if times is None:
        times = np.arange(len(latencies), dtype=float)
    return InterfaceTrace(name=name, send_times=np.asarray(times, dtype=float),
                          latencies_ms=latencies)


class TestLoadTrace:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "t.csv"
        save_trace(make_trace("t", [5.0, LOSS_SENTINEL, 12.5]), str(path))
        trace = load_trace(str(path), name="t")
        assert len(trace) == 3
        assert trace.loss_count == 1
        assert trace.latencies_ms[2] == 12.5

    def test_two_row_file(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("send_time_s,latency_ms\n0.0,5.0\n1.0,6.0\n")
        assert len(load_trace(str(path))) == 2

    def test_loss_sentinel_row(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("send_time_s,latency_ms\n0.0,-1\n")
        assert load_trace(str(path)).loss_count == 1

    def test_duplicate_send_time_rejected_with_line(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("send_time_s,latency_ms\n0.0,5.0\n0.0,6.0\n")
        with pytest.raises(TraceFormatError, match=":3:"):
            load_trace(str(path))

    def test_bad_header(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("time,lat\n0.0,5.0\n")
        with pytest.raises(TraceFormatError, match=":1:"):
            load_trace(str(path))

    def test_invalid_latency(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("send_time_s,latency_ms\n0.0,-3.0\n")
        with pytest.raises(TraceFormatError, match=":2:"):
            load_trace(str(path))

    def test_checked_in_sample_set(self):
        for name in ("lte", "hspa", "wifi"):
            trace = load_trace(os.path.join(DATA_DIR, f"{name}.csv"), name=name)
            assert len(trace) == 1000


class TestSynthTrace:
    def test_deterministic(self):
        model = SynthTraceModel(base_median_ms=10.0, spike_prob=0.1, loss_prob=0.01)
        a = synth_trace(model, 100.0, 2.0, seed=3)
        b = synth_trace(model, 100.0, 2.0, seed=3)
        assert np.array_equal(a.latencies_ms, b.latencies_ms)

    def test_zero_spike_weight_ignores_spike_params(self):
        base = dict(base_median_ms=10.0, base_sigma=0.2, spike_prob=0.0, loss_prob=0.0)
        a = synth_trace(SynthTraceModel(spike_min_ms=50.0, **base), 200.0, 1.0, seed=4)
        b = synth_trace(SynthTraceModel(spike_min_ms=900.0, **base), 200.0, 1.0, seed=4)
        assert np.array_equal(a.latencies_ms, b.latencies_ms)

    def test_median_tracks_base_median(self):
        model = SynthTraceModel(base_median_ms=20.0, base_sigma=0.3, spike_prob=0.05,
                                spike_min_ms=200.0, loss_prob=0.0)
        trace = synth_trace(model, 100_000.0, 1.0, seed=5)
        median = float(np.median(trace.latencies_ms))
        assert abs(median - 20.0) / 20.0 < 0.1

    def test_regular_grid(self):
        trace = synth_trace(SynthTraceModel(base_median_ms=5.0), 10.0, 4.0, seed=6)
        assert len(trace) == 40
        assert np.allclose(np.diff(trace.send_times), 0.25)


class TestPdLatency:
    def test_single_interface_identity(self):
        trace = make_trace("a", [5.0, LOSS_SENTINEL, 7.0])
        samples = pd_latency([trace], PdConfig(("a",)))
        assert samples[0] == 5.0
        assert samples[1] is DROP
        assert samples[2] == 7.0

    def test_first_arrival_wins(self):
        a = make_trace("a", [5.0, LOSS_SENTINEL, LOSS_SENTINEL])
        b = make_trace("b", [12.0, 12.0, LOSS_SENTINEL])
        samples = pd_latency([a, b], PdConfig(("a", "b")))
        assert samples[0] == 5.0
        assert samples[1] == 12.0
        assert samples[2] is DROP

    def test_empty_config_rejected(self):
        with pytest.raises(ValueError):
            PdConfig(())

    def test_mismatched_grids_rejected(self):
        a = make_trace("a", [5.0], times=[0.0])
        b = make_trace("b", [6.0], times=[0.5])
        with pytest.raises(ValueError, match="grid"):
            pd_latency([a, b], PdConfig(("a", "b")))

    def test_unknown_interface_rejected(self):
        a = make_trace("a", [5.0])
        with pytest.raises(ValueError, match="unknown"):
            pd_latency([a], PdConfig(("zz",)))

    def test_drop_count_exact(self):
        a = make_trace("a", [LOSS_SENTINEL, 4.0, LOSS_SENTINEL, LOSS_SENTINEL])
        b = make_trace("b", [LOSS_SENTINEL, LOSS_SENTINEL, 9.0, LOSS_SENTINEL])
        samples = pd_latency([a, b], PdConfig(("a", "b")))
        both_lost = sum(
            1
            for la, lb in zip(a.latencies_ms, b.latencies_ms)
            if la == LOSS_SENTINEL and lb == LOSS_SENTINEL
        )
        assert sum(1 for s in samples if s is DROP) == both_lost == 2


class TestReliabilityCurve:
    def test_step_at_constant_latency(self):
        cdf, points = reliability_curve([10.0, 10.0, 10.0], grid_ms=[5.0, 10.0, 20.0])
        assert [r for _, r in points] == [0.0, 1.0, 1.0]

    def test_beyond_max_sample_no_drops(self):
        cdf, points = reliability_curve([3.0, 8.0], grid_ms=[100.0])
        assert points[0][1] == 1.0

    def test_dominance_over_components(self):
        # combined config is at least as reliable as each member, exactly,
        # at every grid point (min <= each component)
        traces = [
            load_trace(os.path.join(DATA_DIR, f"{n}.csv"), name=n)
            for n in ("lte", "hspa", "wifi")
        ]
        grid = np.geomspace(1.0, 500.0, 40)
        combined_cdf, _ = reliability_curve(
            pd_latency(traces, PdConfig(("lte", "hspa", "wifi"))), grid_ms=grid
        )
        for name in ("lte", "hspa", "wifi"):
            single_cdf, _ = reliability_curve(
                pd_latency(traces, PdConfig((name,))), grid_ms=grid
            )
            for t in grid / 1e3:
                assert reliability_at(combined_cdf, t) >= reliability_at(single_cdf, t)

    def test_adding_interface_never_lowers_reliability(self):
        traces = [
            load_trace(os.path.join(DATA_DIR, f"{n}.csv"), name=n)
            for n in ("lte", "wifi")
        ]
        grid = np.geomspace(1.0, 500.0, 25)
        lte_cdf, _ = reliability_curve(
            pd_latency(traces, PdConfig(("lte",))), grid_ms=grid
        )
        both_cdf, _ = reliability_curve(
            pd_latency(traces, PdConfig(("lte", "wifi"))), grid_ms=grid
        )
        for t in grid / 1e3:
            assert reliability_at(both_cdf, t) >= reliability_at(lte_cdf, t)


class TestAlign:
    def test_nearest_neighbour_within_tolerance(self):
        a = make_trace("a", [1.0, 2.0, 3.0], times=[0.0, 1.0, 2.0])
        b = make_trace("b", [5.0, 6.0, 7.0], times=[0.01, 1.02, 1.99])
        aligned = align_traces([a, b], tolerance_s=0.05)
        assert np.array_equal(aligned[0].send_times, aligned[1].send_times)
        assert aligned[1].latencies_ms.tolist() == [5.0, 6.0, 7.0]

    def test_unmatched_events_dropped_with_warning(self):
        a = make_trace("a", [1.0, 2.0, 3.0], times=[0.0, 1.0, 5.0])
        b = make_trace("b", [5.0, 6.0], times=[0.02, 1.01])
        with pytest.warns(UserWarning, match="dropped 1"):
            aligned = align_traces([a, b], tolerance_s=0.1)
        assert len(aligned[0]) == 2
