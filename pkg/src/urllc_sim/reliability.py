"""Latency-reliability calculus: latency CDFs with drop mass and success products.

Reliability at a deadline is the probability that packet latency does not
exceed the deadline, with dropped packets carrying infinite latency.  The
CDF therefore saturates at ``1 - drop_count/total`` instead of 1.  Drops
are stored as an explicit count, never as a sentinel latency value, so the
asymptote is exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class _Drop:
    """Marker for a packet that was never delivered (infinite latency)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DROP"


DROP = _Drop()


@dataclass(frozen=True)
class StageModel:
    """Per-stage success probabilities: auxiliary procedures, metadata, data."""

    p_aux: float
    p_meta: float
    p_data: float

    def __post_init__(self) -> None:
        for name in ("p_aux", "p_meta", "p_data"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class ProtocolChain:
    """Ordered per-packet success probabilities of a multi-exchange protocol.

    Steps are kept as given (floats, Fractions, Decimals all work), so the
    product algebra stays exact on rational inputs.
    """

    steps: tuple

    def __init__(self, steps: Iterable):
        steps = tuple(steps)
        if not steps:
            raise ValueError("protocol chain must have at least one step")
        for p in steps:
            if not (0 <= p <= 1):
                raise ValueError(f"step probability must be in [0, 1], got {p}")
        object.__setattr__(self, "steps", steps)

    def append(self, p) -> "ProtocolChain":
        return ProtocolChain(self.steps + (p,))


def packet_success(stages: StageModel):
    """Packet success probability: product of the three stage successes."""
    return stages.p_aux * stages.p_meta * stages.p_data


def chain_success(chain: ProtocolChain):
    """Overall success of a protocol chain: product over its steps."""
    result = 1
    for p in chain.steps:
        result = result * p
    return result


class LatencyCdf:
    """Empirical latency distribution with an explicit drop mass at infinity.

    Attributes:
        sorted_samples: finite latencies in seconds, ascending.
        drop_count: number of packets with infinite latency.
        total: sorted_samples.size + drop_count.
    """

    def __init__(self, sorted_samples: np.ndarray, drop_count: int):
        samples = np.asarray(sorted_samples, dtype=float)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if samples.size and (not np.all(np.isfinite(samples)) or samples[0] < 0):
            raise ValueError("samples must be finite and >= 0")
        if samples.size and np.any(np.diff(samples) < 0):
            raise ValueError("samples must be sorted ascending")
        if drop_count < 0:
            raise ValueError("drop_count must be >= 0")
        self.sorted_samples = samples
        self.drop_count = int(drop_count)
        self.total = samples.size + self.drop_count
        if self.total == 0:
            raise ValueError("CDF needs at least one sample or drop")

    def counts_at(self, deadline: float) -> tuple[int, int]:
        """(number of samples with latency <= deadline, total) as exact counts."""
        if deadline != deadline:  # NaN
            raise ValueError("deadline must not be NaN")
        n_le = int(np.searchsorted(self.sorted_samples, deadline, side="right"))
        return n_le, self.total

    def __repr__(self) -> str:
        return (
            f"LatencyCdf(n_finite={self.sorted_samples.size}, "
            f"drops={self.drop_count})"
        )


def cdf_from_samples(latencies: Sequence) -> LatencyCdf:
    """Build a LatencyCdf from finite latency values and DROP markers.

    ``float('inf')`` is accepted as an alias for DROP (it is, literally, an
    infinite latency); NaN and negative values are rejected.
    """
    if len(latencies) == 0:
        raise ValueError("cannot build a CDF from an empty sample list")
    finite = []
    drops = 0
    for value in latencies:
        if value is DROP:
            drops += 1
            continue
        value = float(value)
        if math.isnan(value):
            raise ValueError("latency must not be NaN")
        if math.isinf(value):
            drops += 1
        elif value < 0:
            raise ValueError(f"latency must be >= 0, got {value}")
        else:
            finite.append(value)
    return LatencyCdf(np.sort(np.asarray(finite, dtype=float)), drops)


def reliability_at(cdf: LatencyCdf, deadline: float) -> float:
    """Fraction of all packets delivered within the deadline (drops never count)."""
    if deadline < 0:
        raise ValueError(f"deadline must be >= 0, got {deadline}")
    n_le, total = cdf.counts_at(deadline)
    return n_le / total


def merge(a: LatencyCdf, b: LatencyCdf) -> LatencyCdf:
    """Pool two CDFs; reliability of the result is the sample-weighted average."""
    samples = np.sort(np.concatenate([a.sorted_samples, b.sorted_samples]))
    return LatencyCdf(samples, a.drop_count + b.drop_count)


def wilson_interval(successes: int, total: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Reliability targets like 1e-5 need explicit statistical qualification;
    every Monte-Carlo reliability point should be reported with this.
    """
    if total < 1:
        raise ValueError("total must be >= 1")
    if not (0 <= successes <= total):
        raise ValueError("successes must be in [0, total]")
    from scipy.special import erfcinv

    z = math.sqrt(2.0) * float(erfcinv(1.0 - confidence))
    p = successes / total
    denom = 1.0 + z**2 / total
    centre = (p + z**2 / (2 * total)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / total + z**2 / (4 * total**2))
    return max(0.0, centre - half), min(1.0, centre + half)


RELIABILITY_CSV_HEADER = ["deadline_s", "reliability", "n_samples", "n_drops"]


def reliability_rows(cdf: LatencyCdf, deadlines: Sequence[float]):
    """`deadline_s, reliability, n_samples, n_drops` rows, one per deadline."""
    for deadline in deadlines:
        yield (
            repr(float(deadline)),
            repr(reliability_at(cdf, deadline)),
            cdf.total,
            cdf.drop_count,
        )


def export_reliability_csv(
    cdf: LatencyCdf, deadlines: Sequence[float], path: str
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RELIABILITY_CSV_HEADER)
        for row in reliability_rows(cdf, deadlines):
            writer.writerow(row)


def deadline_grid(cdf: LatencyCdf, n_points: int = 50) -> np.ndarray:
    """Log-spaced deadline grid spanning the observed finite latencies."""
    if cdf.sorted_samples.size == 0:
        return np.array([0.0])
    lo = max(float(cdf.sorted_samples[0]), 1e-9)
    hi = max(float(cdf.sorted_samples[-1]), lo * (1 + 1e-12))
    return np.geomspace(lo, hi, n_points)
