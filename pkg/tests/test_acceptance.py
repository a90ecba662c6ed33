"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Tolerances are pinned here, not configurable.
"""

import functools
import itertools
import json
import math
import os
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import spearmanr

from urllc_sim import runner
from urllc_sim.access import ReceiverModel, resolve_frame, run_grant_free
from urllc_sim.fbl import awgn_capacity, error_prob, max_coding_rate, min_blocklength
from urllc_sim.frames import MessageSpec, plan_joint, plan_separate, tradeoff_curve
from urllc_sim.interfaces import (
    PdConfig,
    SynthTraceModel,
    load_trace,
    pd_latency,
    reliability_curve,
    synth_trace,
)
from urllc_sim.minislot import urllc_latency_cdf
from urllc_sim.reliability import (
    ProtocolChain,
    StageModel,
    chain_success,
    packet_success,
    reliability_at,
)
from urllc_sim.simo import ser_gain_heatmap
from urllc_sim.topology import latency_vs_density

from test_access import grid_from_patterns, oracle_resolve
from test_minislot import assert_no_forbidden_overlap

DATA_DIR = os.path.join(os.path.dirname(__file__), "data", "traces")


def criterion(label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE] FAIL {label} ({time.perf_counter() - start:.1f}s)")
                raise
            print(f"[ACCEPTANCE] PASS {label} ({time.perf_counter() - start:.1f}s)")

        return wrapper

    return decorate


@criterion("eq1-eq2-success-algebra")
def test_success_probability_algebra():
    # exact rational products
    q = Fraction(99, 100)
    assert packet_success(StageModel(q, q, q)) == Fraction(970299, 1_000_000)
    r = Fraction(999, 1000)
    assert chain_success(ProtocolChain([r, r, r])) == Fraction(997_002_999, 10**9)
    # float path agrees to double precision
    assert packet_success(StageModel(0.99, 0.99, 0.99)) == pytest.approx(
        0.970299, abs=1e-12
    )
    # appending a step never increases the chain success
    rng = np.random.default_rng(5)
    for _ in range(200):
        steps = rng.random(int(rng.integers(1, 6))).tolist()
        chain = ProtocolChain(steps)
        assert chain_success(chain.append(float(rng.random()))) <= chain_success(chain)


@criterion("fbl-limits-and-round-trip")
def test_fbl_limits():
    # epsilon = 0.5: Qinv is exactly 0, so the back-off vanishes
    for n in (2, 100, 10**5):
        for snr in (0.1, 1.0, 10.0):
            assert max_coding_rate(n, 0.5, snr) == awgn_capacity(snr) + math.log2(n) / (
                2 * n
            )
    # capacity limit at n = 1e7 (the 1e-3 band requires low snr at this n,
    # see decisions ledger; higher snr values are checked in test_fbl at 1e8)
    assert abs(max_coding_rate(10**7, 1e-5, 0.1) - awgn_capacity(0.1)) < 1e-3
    # min_blocklength / error_prob round trip on 100 random code specs
    rng = np.random.default_rng(42)
    for _ in range(100):
        k = int(rng.integers(1, 2048))
        eps = float(10 ** rng.uniform(-8, -0.1))
        snr = float(10 ** rng.uniform(-1, 1.5))
        n = min_blocklength(k, eps, snr)
        assert error_prob(n, k, snr) <= eps
        if n > 1:
            assert error_prob(n - 1, k, snr) > eps


@criterion("frame-designer-joint-vs-separate")
def test_frame_designer():
    for b_bits in (64, 128, 256, 512, 1024):
        for eps in (1e-3, 1e-5):
            for snr in (0.5, 1.0, 4.0):
                for n_messages in (2, 4):
                    messages = [
                        MessageSpec(f"d{i}", b_bits, eps) for i in range(n_messages)
                    ]
                    joint = plan_joint(messages, snr)
                    separate = plan_separate(messages, snr)
                    assert joint.total_cu < separate.total_cu, (b_bits, eps, snr)
    # trade-off extremes reproduce the two plans exactly
    messages = [MessageSpec(f"d{i}", 256, 1e-5) for i in range(4)]
    partitions = [[[0], [1], [2], [3]], [[0, 1], [2, 3]], [[0, 1, 2, 3]]]
    points = tradeoff_curve(messages, 1.0, partitions)
    by_ngroups = {len(plan.grouping): plan for plan, _, _ in points}
    separate = plan_separate(messages, 1.0)
    joint = plan_joint(messages, 1.0)
    assert by_ngroups[4].total_cu == separate.total_cu
    assert by_ngroups[4].per_device_energy_cu == separate.per_device_energy_cu
    assert by_ngroups[1].total_cu == joint.total_cu
    assert by_ngroups[1].per_device_energy_cu == joint.per_device_energy_cu


@criterion("slotted-aloha-1/e-throughput")
def test_slotted_aloha_oracle():
    # K = 1, MPR = 1, no SIC, offered load G = 1 over 1e5 slots
    n_frames, frame_len = 2000, 50
    result = run_grant_free(
        n_devices=1000,
        activation_prob=0.05,
        k_replicas=1,
        receiver=ReceiverModel(mpr_gamma=1, sic_enabled=False),
        frame_len=frame_len,
        n_frames=n_frames,
        seed=20240601,
    )
    n_slots = n_frames * frame_len
    target = math.exp(-1)
    tolerance = 3 * math.sqrt(target * (1 - target) / n_slots)
    assert abs(result.throughput_per_slot - target) < tolerance


@criterion("sic-brute-force-equivalence")
def test_sic_fixed_point_census():
    # every configuration with <= 4 devices, <= 4 slots, k <= 2, p = 1
    checked = 0
    for frame_len in (1, 2, 3, 4):
        patterns = [
            frozenset(c)
            for k in (1, 2)
            if k <= frame_len
            for c in itertools.combinations(range(frame_len), k)
        ]
        for n_devices in (1, 2, 3, 4):
            for combo in itertools.product(patterns, repeat=n_devices):
                for gamma in (1, 2, 4):
                    for sic in (False, True):
                        for combining in (False, True):
                            grid = grid_from_patterns(combo, frame_len)
                            receiver = ReceiverModel(
                                mpr_gamma=gamma,
                                sic_enabled=sic,
                                combining_enabled=combining,
                                per_replica_success=1.0,
                            )
                            out = resolve_frame(grid, receiver, 0)
                            expected, enablers = oracle_resolve(
                                combo, frame_len, gamma, sic, combining
                            )
                            got = {d for d in range(n_devices) if out.decoded[d]}
                            assert got == expected, (combo, gamma, sic, combining)
                            for d in expected:
                                assert out.enable_slot[d] == enablers[d], (
                                    combo,
                                    gamma,
                                    sic,
                                    combining,
                                )
                            assert out.iterations <= out.n_transmissions + 1
                            checked += 1
    # pattern census: sum over S of sum_D (C(S,1) + C(S,2))^D, 12 receivers
    expected_counts = sum(
        sum((s + s * (s - 1) // 2) ** d for d in (1, 2, 3, 4)) for s in (1, 2, 3, 4)
    )
    assert checked == expected_counts * 12


@criterion("simo-heatmap-sign-structure")
def test_simo_sign_structure():
    grid = ser_gain_heatmap(
        snr_grid_db=[0.0, 10.0],
        sigma_grid=[0.0, 0.9],
        m_antennas=128,
        constellation_size=2,
        trials=100_000,
        seed=314,
    )
    # coherent combining never loses with a perfect estimate
    assert grid.gain_log10[0, 0] <= 0  # snr = 0 dB, sigma = 0
    assert grid.gain_log10[1, 0] <= 0  # snr = 10 dB, sigma = 0
    # high mobility at high snr: ED at least an order of magnitude better
    assert grid.gain_log10[1, 1] >= 1  # snr = 10 dB, sigma = 0.9


@criterion("packet-duplication-dominance")
def test_pd_dominance():
    grid_ms = np.geomspace(0.5, 1000.0, 60)

    def check(traces):
        names = tuple(t.name for t in traces)
        combined_cdf, _ = reliability_curve(
            pd_latency(traces, PdConfig(names)), grid_ms=grid_ms
        )
        for name in names:
            single_cdf, _ = reliability_curve(
                pd_latency(traces, PdConfig((name,))), grid_ms=grid_ms
            )
            for t in grid_ms / 1e3:
                assert reliability_at(combined_cdf, t) >= reliability_at(
                    single_cdf, t
                ), (name, t)

    # synthetic trace set
    models = {
        "fast": SynthTraceModel(base_median_ms=8.0, base_sigma=0.5, spike_prob=0.1,
                                spike_min_ms=90.0, loss_prob=0.02),
        "steady": SynthTraceModel(base_median_ms=30.0, base_sigma=0.2,
                                  spike_prob=0.01, loss_prob=0.002),
        "slow": SynthTraceModel(base_median_ms=60.0, base_sigma=0.3,
                                spike_prob=0.05, loss_prob=0.01),
    }
    check([
        synth_trace(model, 2000.0, 1.0, seed=9000 + i, name=name)
        for i, (name, model) in enumerate(models.items())
    ])
    # checked-in 1000-event sample set
    check([
        load_trace(os.path.join(DATA_DIR, f"{name}.csv"), name=name)
        for name in ("lte", "hspa", "wifi")
    ])


@criterion("minislot-placement-and-tail-latency")
def test_minislot():
    # ~9.3% utilization of the symbol grid, size-1 arrivals, > 1e5 of them
    rate, n_slots = 0.08, 180_000
    cdf, sched = urllc_latency_cdf(
        rate=rate, size_dist=1, n_slots=n_slots, seed=60486,
        control_prefix=1, symbol_duration=1.0,
    )
    assert len(sched.arrivals) >= 100_000
    assert_no_forbidden_overlap(sched)
    delivered = cdf.sorted_samples
    p99 = float(np.quantile(delivered, 0.99))
    assert p99 <= 7.0  # within one slot
    assert sched.embb_loss_fraction == pytest.approx(
        sched.preempted_symbols / sched.total_preemptable_symbols
    )


@criterion("densification-trend-and-cooperation")
def test_densification():
    grid = [0.02, 0.05, 0.1, 0.2, 0.4]
    kwargs = dict(lambda_users=0.01, replications=400, seed=777)
    baseline = latency_vs_density(100.0, grid, mode="baseline", **kwargs)
    cooperation = latency_vs_density(100.0, grid, mode="cooperation", **kwargs)
    rho, p_value = spearmanr(grid, [p.mean_latency_s for p in baseline])
    assert rho <= 0
    assert p_value < 0.05  # 95% confidence on the monotone trend
    for b, c in zip(baseline, cooperation):
        assert c.mean_latency_s <= b.mean_latency_s, b.lambda_bs


@criterion("determinism-all-scenarios")
def test_determinism_everywhere(tmp_path):
    configs = {
        "latency_cdf": {"n_samples": 2000},
        "frame_tradeoff": {"n_messages": 4},
        "simo_heatmap": {
            "snr_db_grid": [0.0, 10.0], "sigma_grid": [0.0, 0.9],
            "m_antennas": 32, "trials": 5000,
        },
        "pd_interfaces": {
            "interfaces": [
                {"name": "a", "base_median_ms": 10.0, "loss_prob": 0.01},
                {"name": "b", "base_median_ms": 30.0, "loss_prob": 0.01},
            ],
            "duration_s": 300.0,
        },
        "densification": {"replications": 20, "lambda_bs_grid": [0.05, 0.2],
                          "area_side": 40.0},
        "grant_free": {"n_devices": 50, "n_frames": 150, "frame_len": 12},
        "coordinated": {"n_devices": 20, "n_frames": 150, "frame_len": 12},
        "grant_based": {"n_trials": 5000},
        "minislot": {"n_slots": 800},
    }
    assert sorted(configs) == sorted(runner.SCENARIO_IDS)
    for scenario, params in configs.items():
        config = {"scenario": scenario, "master_seed": 99, "params": params}
        digests = []
        for tag, jobs in (("r1", 1), ("r2", 1), ("j4", 4)):
            manifest = runner.run(
                config, str(tmp_path / f"{scenario}_{tag}"), jobs=jobs
            )
            digests.append(manifest["files"])
        assert digests[0] == digests[1], f"{scenario}: rerun differs"
        assert digests[0] == digests[2], f"{scenario}: --jobs 4 differs"
