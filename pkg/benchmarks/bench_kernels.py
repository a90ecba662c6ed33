#!/usr/bin/env python3
"""Benchmark the hot kernels: numba @njit vs the pure-numpy fallback.

Each workload runs in a subprocess so URLLC_SIM_NUMBA is honoured at import
time; compile time is excluded by a warm-up call inside the child.  Outputs
are hashed to confirm the two paths are bit-exact.

Usage: python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

CHILD = r"""
import hashlib, json, sys, time
import numpy as np
from urllc_sim.access import ReceiverModel, run_grant_free
from urllc_sim.minislot import urllc_latency_cdf
from urllc_sim._accel import NUMBA_ENABLED

def bench(label, fn, warmup=True):
    if warmup:
        fn()
    t0 = time.perf_counter()
    digest = fn()
    return {"label": label, "seconds": time.perf_counter() - t0, "digest": digest}

def grant_free():
    result = run_grant_free(
        n_devices=500, activation_prob=0.1, k_replicas=2,
        receiver=ReceiverModel(mpr_gamma=1, sic_enabled=True, per_replica_success=0.9),
        frame_len=30, n_frames=2000, seed=42,
    )
    return hashlib.sha256(result.ev_latency_slots.tobytes()).hexdigest()[:16]

def minislot():
    _, sched = urllc_latency_cdf(rate=0.25, size_dist={1: 0.6, 3: 0.3, 6: 0.1},
                                 n_slots=120_000, seed=7)
    return hashlib.sha256(sched.start_symbol.tobytes()).hexdigest()[:16]

rows = [
    bench("grant_free 2000 frames x 500 devices (SIC)", grant_free),
    bench("minislot ~30k arrivals on 120k slots", minislot),
]
print(json.dumps({"numba": NUMBA_ENABLED, "rows": rows}))
"""


def run_mode(numba_flag: str) -> dict:
    env = dict(os.environ, URLLC_SIM_NUMBA=numba_flag)
    proc = subprocess.run(
        [sys.executable, "-c", CHILD], env=env, capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise SystemExit(f"benchmark child failed:\n{proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    numba = run_mode("1")
    numpy_only = run_mode("0")
    mode_names = ("numba @njit" if numba["numba"] else "numpy (numba unavailable)",
                  "numpy fallback")
    print(f"{'workload':<45} {mode_names[0]:>14} {mode_names[1]:>16} {'speedup':>9}")
    for fast, slow in zip(numba["rows"], numpy_only["rows"]):
        match = "" if fast["digest"] == slow["digest"] else "  OUTPUT MISMATCH!"
        speedup = slow["seconds"] / fast["seconds"]
        print(
            f"{fast['label']:<45} {fast['seconds']:>12.3f}s {slow['seconds']:>14.3f}s "
            f"{speedup:>8.1f}x{match}"
        )


if __name__ == "__main__":
    main()
