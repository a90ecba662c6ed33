"""Seed-deterministic simulators for URLLC wireless-access building blocks.

Subsystems: finite-blocklength rates (fbl), latency-reliability calculus
(reliability), downlink frame design (frames), multi-antenna symbol errors
(simo), uplink access protocols (access), mini-slot preemption (minislot),
interface diversity (interfaces), network densification (topology), and the
experiment runner (runner, cli).
"""

__version__ = "0.1.0"

from .fbl import (
    CodeSpec,
    LinkSnr,
    awgn_capacity,
    awgn_dispersion,
    error_prob,
    max_coding_rate,
    min_blocklength,
)
from .reliability import (
    DROP,
    LatencyCdf,
    ProtocolChain,
    StageModel,
    cdf_from_samples,
    chain_success,
    packet_success,
    reliability_at,
    wilson_interval,
)

__all__ = [
    "CodeSpec",
    "LinkSnr",
    "awgn_capacity",
    "awgn_dispersion",
    "error_prob",
    "max_coding_rate",
    "min_blocklength",
    "DROP",
    "LatencyCdf",
    "ProtocolChain",
    "StageModel",
    "cdf_from_samples",
    "chain_success",
    "packet_success",
    "reliability_at",
    "wilson_interval",
    "__version__",
]
