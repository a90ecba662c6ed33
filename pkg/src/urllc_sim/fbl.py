"""Finite-blocklength coding-rate engine for the complex AWGN channel.

Short packets pay a rate penalty against capacity that shrinks like
``1/sqrt(n)``.  The normal approximation used throughout is

    R*(n, eps) = C - sqrt(V/n) * Qinv(eps) + log2(n) / (2n)

with capacity ``C = log2(1 + snr)`` and dispersion
``V = snr (snr + 2) / (snr + 1)^2 * (log2 e)^2``.  The complex-AWGN
convention is used because the channels of interest are wireless passband;
halve both C and V for the real-valued channel.  Rates are floored at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import erfcinv

_LOG2E = math.log2(math.e)
_EPS_FLOOR = 1e-300
_EPS_CEIL = 1.0 - 1e-16


class DomainError(ValueError):
    """Raised when an argument is outside the physical domain of a formula."""


@dataclass(frozen=True)
class LinkSnr:
    """Linear signal-to-noise power ratio of a link.

    Attributes:
        snr: linear power ratio, strictly positive.
    """

    snr: float

    def __post_init__(self) -> None:
        if not (self.snr > 0):
            raise DomainError(f"snr must be > 0, got {self.snr}")

    @classmethod
    def from_db(cls, snr_db: float) -> "LinkSnr":
        return cls(10.0 ** (snr_db / 10.0))

    @property
    def db(self) -> float:
        return 10.0 * math.log10(self.snr)


@dataclass(frozen=True)
class CodeSpec:
    """Blocklength, payload, and reliability target of one coded packet."""

    n: int
    k_bits: int
    epsilon: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"blocklength must be >= 1, got {self.n}")
        if self.k_bits < 1:
            raise DomainError(f"k_bits must be >= 1, got {self.k_bits}")
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"epsilon must be in (0, 1), got {self.epsilon}")


def _snr_value(snr: "LinkSnr | float") -> float:
    value = snr.snr if isinstance(snr, LinkSnr) else float(snr)
    if not (value > 0):
        raise DomainError(f"snr must be > 0, got {value}")
    return value


def q_func(x: float) -> float:
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def q_inv(epsilon: float) -> float:
    """Inverse Gaussian tail function, via the inverse complementary error function."""
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.sqrt(2.0) * float(erfcinv(2.0 * epsilon))


def awgn_capacity(snr: "LinkSnr | float") -> float:
    """Capacity in bits per channel use: log2(1 + snr)."""
    return math.log2(1.0 + _snr_value(snr))


def awgn_dispersion(snr: "LinkSnr | float") -> float:
    """Channel dispersion V(snr) = snr(snr+2)/(snr+1)^2 * (log2 e)^2."""
    s = _snr_value(snr)
    return (s * (s + 2.0) / (s + 1.0) ** 2) * _LOG2E**2


def max_coding_rate(n: int, epsilon: float, snr: "LinkSnr | float") -> float:
    """Normal-approximation maximal rate R*(n, epsilon) in bits per channel use.

    Includes the log2(n)/(2n) correction term; the result is floored at 0.
    """
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    s = _snr_value(snr)
    rate = (
        awgn_capacity(s)
        - math.sqrt(awgn_dispersion(s) / n) * q_inv(epsilon)
        + math.log2(n) / (2.0 * n)
    )
    return max(0.0, rate)


def _achievable_bits(n: int, epsilon: float, snr: float) -> float:
    return n * max_coding_rate(n, epsilon, snr) if n >= 1 else 0.0


def min_blocklength(k_bits: int, epsilon: float, snr: "LinkSnr | float") -> int:
    """Smallest blocklength n with n * R*(n, epsilon) >= k_bits.

    Exponential bracketing followed by binary search on the bracket
    invariant f(lo) < k_bits <= f(hi), so the returned n also satisfies
    (n-1) * R*(n-1) < k_bits.
    """
    if k_bits < 1:
        raise DomainError(f"k_bits must be >= 1, got {k_bits}")
    s = _snr_value(snr)
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must be in (0, 1), got {epsilon}")

    if _achievable_bits(1, epsilon, s) >= k_bits:
        return 1
    lo, hi = 1, 2
    while _achievable_bits(hi, epsilon, s) < k_bits:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _achievable_bits(mid, epsilon, s) >= k_bits:
            hi = mid
        else:
            lo = mid
    return hi


def error_prob(n: int, k_bits: int, snr: "LinkSnr | float") -> float:
    """Error probability of sending k_bits in n channel uses, clamped to (0, 1)."""
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    if k_bits < 1:
        raise DomainError(f"k_bits must be >= 1, got {k_bits}")
    s = _snr_value(snr)
    arg = (awgn_capacity(s) - k_bits / n + math.log2(n) / (2.0 * n)) * math.sqrt(
        n / awgn_dispersion(s)
    )
    return min(max(q_func(arg), _EPS_FLOOR), _EPS_CEIL)
