"""Packet duplication across communication interfaces, replayed from latency traces.

Duplicates of a packet are sent over several interfaces at once and the
experienced latency is the first arrival's, so the combined trace is the
per-event minimum over the selected interfaces; an event drops only when
every selected interface lost it.  Real measurement traces load from CSV
(`send_time_s,latency_ms`, -1 marking a loss); synthetic traces come from
a seeded lognormal + heavy-tail-spike mixture.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .reliability import DROP, LatencyCdf, cdf_from_samples, reliability_at
from .seeding import rng_for

LOSS_SENTINEL = -1.0

TRACE_HEADER = ["send_time_s", "latency_ms"]


class TraceFormatError(ValueError):
    """Raised with a line number when a trace file violates the schema."""


@dataclass(frozen=True)
class InterfaceTrace:
    """Time-ordered packet latencies of one interface; -1 entries are losses."""

    name: str
    send_times: np.ndarray
    latencies_ms: np.ndarray

    def __post_init__(self) -> None:
        if self.send_times.shape != self.latencies_ms.shape:
            raise ValueError("send_times and latencies must align")
        if self.send_times.size and np.any(np.diff(self.send_times) <= 0):
            raise ValueError("send_times must be strictly increasing")
        bad = (self.latencies_ms <= 0) & (self.latencies_ms != LOSS_SENTINEL)
        if np.any(bad):
            raise ValueError("latencies must be > 0 or the -1 loss sentinel")

    def __len__(self) -> int:
        return int(self.send_times.size)

    @property
    def loss_count(self) -> int:
        return int(np.count_nonzero(self.latencies_ms == LOSS_SENTINEL))


@dataclass(frozen=True)
class PdConfig:
    """The subset of interfaces a packet is duplicated over."""

    interfaces: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.interfaces:
            raise ValueError("a duplication config needs at least one interface")
        if len(set(self.interfaces)) != len(self.interfaces):
            raise ValueError("duplicate interface names in config")

    @property
    def label(self) -> str:
        return "+".join(self.interfaces)


@dataclass(frozen=True)
class SynthTraceModel:
    """Lognormal base latency with a heavy-tailed (Pareto) spike component."""

    base_median_ms: float
    base_sigma: float = 0.25
    spike_prob: float = 0.0
    spike_min_ms: float = 100.0
    spike_alpha: float = 1.5
    loss_prob: float = 0.0

    def __post_init__(self) -> None:
        if self.base_median_ms <= 0 or self.base_sigma < 0:
            raise ValueError("base component parameters out of range")
        if not (0.0 <= self.spike_prob <= 1.0) or not (0.0 <= self.loss_prob < 1.0):
            raise ValueError("mixture probabilities out of range")
        if self.spike_min_ms <= 0 or self.spike_alpha <= 0:
            raise ValueError("spike component parameters out of range")


def load_trace(path: str, name: str | None = None) -> InterfaceTrace:
    """Load and validate one trace CSV; errors carry the offending line number."""
    send_times: list[float] = []
    latencies: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TraceFormatError(f"{path}:1: empty trace file") from None
        if [c.strip() for c in header] != TRACE_HEADER:
            raise TraceFormatError(
                f"{path}:1: expected header {','.join(TRACE_HEADER)!r}, "
                f"got {','.join(header)!r}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise TraceFormatError(f"{path}:{line_no}: expected 2 columns")
            try:
                t = float(row[0])
                latency = float(row[1])
            except ValueError:
                raise TraceFormatError(
                    f"{path}:{line_no}: non-numeric value"
                ) from None
            if send_times and t <= send_times[-1]:
                raise TraceFormatError(
                    f"{path}:{line_no}: send_time {t} not strictly increasing"
                )
            if latency <= 0 and latency != LOSS_SENTINEL:
                raise TraceFormatError(
                    f"{path}:{line_no}: latency must be > 0 or -1 (loss)"
                )
            send_times.append(t)
            latencies.append(latency)
    if not send_times:
        raise TraceFormatError(f"{path}:1: trace has no events")
    return InterfaceTrace(
        name=name or path,
        send_times=np.asarray(send_times),
        latencies_ms=np.asarray(latencies),
    )


def save_trace(trace: InterfaceTrace, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for t, latency in zip(trace.send_times, trace.latencies_ms):
            writer.writerow([repr(float(t)), repr(float(latency))])


def synth_trace(
    model: SynthTraceModel,
    duration_s: float,
    rate_hz: float,
    seed: int,
    name: str = "synthetic",
) -> InterfaceTrace:
    """Seeded synthetic trace on a regular send grid (duration * rate events)."""
    n = int(duration_s * rate_hz)
    if n < 1:
        raise ValueError("duration * rate must yield at least one event")
    rng = rng_for(seed, "trace", name)
    send_times = np.arange(n, dtype=float) / rate_hz
    base = model.base_median_ms * np.exp(model.base_sigma * rng.standard_normal(n))
    spike = model.spike_min_ms * (1.0 / rng.random(n)) ** (1.0 / model.spike_alpha)
    is_spike = rng.random(n) < model.spike_prob
    lost = rng.random(n) < model.loss_prob
    latency = np.where(is_spike, spike, base)
    latency = np.where(lost, LOSS_SENTINEL, latency)
    return InterfaceTrace(name=name, send_times=send_times, latencies_ms=latency)


def align_traces(
    traces: Sequence[InterfaceTrace], tolerance_s: float = 0.05
) -> list[InterfaceTrace]:
    """Nearest-neighbour match onto the first trace's send grid.

    Events without a match inside the tolerance window are dropped with a
    warning.  Synthetic traces share grids by construction and pass through
    unchanged.
    """
    if not traces:
        raise ValueError("need at least one trace")
    reference = traces[0]
    keep_mask = np.ones(len(reference), dtype=bool)
    matched_latencies = []
    for trace in traces[1:]:
        idx = np.searchsorted(trace.send_times, reference.send_times)
        idx_lo = np.clip(idx - 1, 0, len(trace) - 1)
        idx_hi = np.clip(idx, 0, len(trace) - 1)
        d_lo = np.abs(trace.send_times[idx_lo] - reference.send_times)
        d_hi = np.abs(trace.send_times[idx_hi] - reference.send_times)
        best = np.where(d_lo <= d_hi, idx_lo, idx_hi)
        dist = np.minimum(d_lo, d_hi)
        ok = dist <= tolerance_s
        keep_mask &= ok
        matched_latencies.append((trace, best))
    n_dropped = int(np.count_nonzero(~keep_mask))
    if n_dropped:
        warnings.warn(
            f"align_traces dropped {n_dropped} unmatched events "
            f"(tolerance {tolerance_s}s)",
            stacklevel=2,
        )
    grid = reference.send_times[keep_mask]
    aligned = [
        InterfaceTrace(
            name=reference.name,
            send_times=grid,
            latencies_ms=reference.latencies_ms[keep_mask],
        )
    ]
    for trace, best in matched_latencies:
        aligned.append(
            InterfaceTrace(
                name=trace.name,
                send_times=grid,
                latencies_ms=trace.latencies_ms[best][keep_mask],
            )
        )
    return aligned


def pd_latency(
    traces: Sequence[InterfaceTrace], config: PdConfig
) -> list["float | object"]:
    """Per-event first-arrival latency (ms) over the selected interfaces.

    DROP marks events where every selected interface lost the packet.
    Traces must share an identical send grid (align_traces for real ones).
    """
    by_name = {t.name: t for t in traces}
    missing = [n for n in config.interfaces if n not in by_name]
    if missing:
        raise ValueError(f"config references unknown interfaces: {missing}")
    selected = [by_name[n] for n in config.interfaces]
    grid = selected[0].send_times
    for trace in selected[1:]:
        if not np.array_equal(trace.send_times, grid):
            raise ValueError(
                "traces must share the send_time grid; align_traces first"
            )
    stack = np.stack([t.latencies_ms for t in selected])
    lost = stack == LOSS_SENTINEL
    stack = np.where(lost, np.inf, stack)
    combined = stack.min(axis=0)
    return [DROP if math.isinf(v) else float(v) for v in combined]


def reliability_curve(
    samples_ms: Sequence, n_points: int = 50, grid_ms: Sequence[float] | None = None
) -> tuple[LatencyCdf, list[tuple[float, float]]]:
    """(cdf, [(deadline_s, reliability)]) on a log-spaced latency grid."""
    if len(samples_ms) == 0:
        raise ValueError("no samples")
    seconds = [s if s is DROP else float(s) / 1e3 for s in samples_ms]
    cdf = cdf_from_samples(seconds)
    if grid_ms is not None:
        grid_s = np.asarray(grid_ms, dtype=float) / 1e3
    elif cdf.sorted_samples.size:
        grid_s = np.geomspace(
            max(cdf.sorted_samples[0], 1e-6), cdf.sorted_samples[-1], n_points
        )
    else:
        grid_s = np.array([0.0])
    return cdf, [(float(t), reliability_at(cdf, t)) for t in grid_s]
