"""Preemptive downlink mini-slot scheduling inside 7-symbol slots.

Urgent arrivals claim 1-6 contiguous symbols by puncturing eMBB data that
occupies every preemptable symbol; the first control_prefix symbols of
each slot hold control/pilots and can never be punctured.  A placement
starts at the earliest symbol boundary strictly after the arrival instant.
The eMBB cost is simply the punctured symbol count: no eMBB queueing or
retransmission is modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._minislot_kernels import place_arrivals_kernel
from .reliability import DROP, LatencyCdf, cdf_from_samples
from .seeding import rng_for

SLOT_SYMBOLS = 7
MAX_MINISLOT_SYMBOLS = 6


@dataclass(frozen=True)
class RadioTimeline:
    """A horizon of consecutive 7-symbol slots."""

    n_slots: int
    control_prefix: int = 1
    symbol_duration: float = 1.0

    def __post_init__(self) -> None:
        if self.n_slots < 1:
            raise ValueError("n_slots must be >= 1")
        if not (1 <= self.control_prefix <= SLOT_SYMBOLS - 1):
            raise ValueError(
                f"control_prefix must be in [1, {SLOT_SYMBOLS - 1}], "
                f"got {self.control_prefix}"
            )
        if self.symbol_duration <= 0:
            raise ValueError("symbol_duration must be > 0")

    @property
    def n_symbols(self) -> int:
        return self.n_slots * SLOT_SYMBOLS

    def preemptable_mask(self) -> np.ndarray:
        sym = np.arange(self.n_symbols)
        return (sym % SLOT_SYMBOLS) >= self.control_prefix


@dataclass(frozen=True)
class UrllcArrival:
    arrival_time: float
    size_symbols: int

    def __post_init__(self) -> None:
        if self.arrival_time < 0:
            raise ValueError("arrival_time must be >= 0")
        if not (1 <= self.size_symbols <= MAX_MINISLOT_SYMBOLS):
            raise ValueError(
                f"size_symbols must be in [1, {MAX_MINISLOT_SYMBOLS}], "
                f"got {self.size_symbols}"
            )


@dataclass
class ScheduleResult:
    """Placements, latencies and the punctured-symbol account of one run."""

    arrivals: tuple[UrllcArrival, ...]
    start_symbol: np.ndarray  # -1 where dropped
    latency_s: np.ndarray  # NaN where dropped
    dropped: np.ndarray
    preempted_symbols: int
    total_preemptable_symbols: int
    timeline: RadioTimeline

    @property
    def embb_loss_fraction(self) -> float:
        if self.total_preemptable_symbols == 0:
            return 0.0
        return self.preempted_symbols / self.total_preemptable_symbols

    def latency_cdf(self) -> LatencyCdf | None:
        if len(self.arrivals) == 0:
            return None
        samples = [
            DROP if self.dropped[i] else float(self.latency_s[i])
            for i in range(len(self.arrivals))
        ]
        return cdf_from_samples(samples)

    def csv_rows(self):
        """`arrival_time_s, size_symbols, latency_s, dropped` rows.

        A final summary row with arrival_time_s = -1 carries the eMBB loss
        fraction in the latency_s column.
        """
        for i, arrival in enumerate(self.arrivals):
            yield (
                repr(arrival.arrival_time),
                arrival.size_symbols,
                "" if self.dropped[i] else repr(float(self.latency_s[i])),
                int(self.dropped[i]),
            )
        yield (-1, self.preempted_symbols, repr(self.embb_loss_fraction), 0)


def schedule(
    timeline: RadioTimeline,
    arrivals: Sequence[UrllcArrival],
    policy: str = "earliest_fit",
) -> ScheduleResult:
    """Place time-sorted arrivals by earliest fit among free preemptable runs."""
    if policy != "earliest_fit":
        raise ValueError(f"unknown policy {policy!r}")
    times = [a.arrival_time for a in arrivals]
    if any(t2 < t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("arrivals must be sorted by arrival_time")

    duration = timeline.symbol_duration
    min_start = np.array(
        [math.floor(a.arrival_time / duration) + 1 for a in arrivals],
        dtype=np.int64,
    )
    sizes = np.array([a.size_symbols for a in arrivals], dtype=np.int64)
    preemptable = timeline.preemptable_mask()
    occupied = np.zeros(timeline.n_symbols, dtype=np.bool_)
    start = np.empty(len(arrivals), dtype=np.int64)
    if len(arrivals):
        place_arrivals_kernel(min_start, sizes, preemptable, occupied, start)

    dropped = start < 0
    completion = (start + sizes) * duration
    latency = np.where(dropped, np.nan, completion - np.array(times, dtype=float))
    preempted = int(sizes[~dropped].sum()) if len(arrivals) else 0
    return ScheduleResult(
        arrivals=tuple(arrivals),
        start_symbol=start,
        latency_s=latency,
        dropped=dropped,
        preempted_symbols=preempted,
        total_preemptable_symbols=int(preemptable.sum()),
        timeline=timeline,
    )


def sample_arrivals(
    rate: float,
    size_dist: "int | Mapping[int, float]",
    horizon_s: float,
    seed: int,
) -> list[UrllcArrival]:
    """Poisson arrival process over [0, horizon) with i.i.d. sizes."""
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if rate == 0:
        return []
    rng = rng_for(seed, "arrivals")
    times: list[float] = []
    t = 0.0
    while True:
        t += rng.exponential(1.0 / rate)
        if t >= horizon_s:
            break
        times.append(t)
    if isinstance(size_dist, int):
        sizes = [size_dist] * len(times)
    else:
        options = sorted(size_dist)
        probs = np.array([size_dist[s] for s in options], dtype=float)
        if abs(probs.sum() - 1.0) > 1e-9 or np.any(probs < 0):
            raise ValueError("size distribution must be a probability vector")
        cumulative = np.cumsum(probs)
        draws = rng.random(len(times))
        sizes = [options[int(np.searchsorted(cumulative, u))] for u in draws]
    return [UrllcArrival(t, s) for t, s in zip(times, sizes)]


def urllc_latency_cdf(
    rate: float,
    size_dist: "int | Mapping[int, float]",
    n_slots: int,
    seed: int,
    control_prefix: int = 1,
    symbol_duration: float = 1.0,
) -> tuple[LatencyCdf | None, ScheduleResult]:
    """Monte-Carlo latency CDF of preempting arrivals plus the eMBB loss fraction."""
    timeline = RadioTimeline(
        n_slots=n_slots,
        control_prefix=control_prefix,
        symbol_duration=symbol_duration,
    )
    horizon = timeline.n_symbols * symbol_duration
    arrivals = sample_arrivals(rate, size_dist, horizon, seed)
    result = schedule(timeline, arrivals)
    return result.latency_cdf(), result
