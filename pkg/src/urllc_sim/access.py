"""Slot-based uplink access: grant-based chains, grant-free replicas, coordination.

Three protocol families share one receiver model (MPR threshold, optional
SIC and replica combining):

* grant-based: a multi-exchange reservation chain whose steps each succeed
  independently; one failed step drops the packet,
* grant-free: active devices proactively transmit k replicas in seeded
  random slots of a frame,
* coordinated grant-free: replica patterns are assigned once by the base
  station (orthogonal-first packing or fully random) and reused per frame.

Latency is clocked from frame start; a packet not decoded by frame end is
dropped (no retransmission across frames).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import _access_kernels as kernels
from .reliability import DROP, LatencyCdf, cdf_from_samples
from .seeding import rng_for

_CHUNK_FRAMES = 128


@dataclass(frozen=True)
class ReceiverModel:
    """Receiver capabilities: MPR threshold, SIC, combining, replica noise."""

    mpr_gamma: int = 1
    sic_enabled: bool = False
    combining_enabled: bool = False
    per_replica_success: float = 1.0

    def __post_init__(self) -> None:
        if self.mpr_gamma < 1:
            raise ValueError(f"mpr_gamma must be >= 1, got {self.mpr_gamma}")
        if not (0.0 <= self.per_replica_success <= 1.0):
            raise ValueError("per_replica_success must be in [0, 1]")


@dataclass(frozen=True)
class AccessPattern:
    """k distinct replica slots in a frame, regenerable from its seed."""

    seed: int
    frame_len: int
    k_replicas: int
    slots: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.slots) != self.k_replicas:
            raise ValueError("pattern must contain exactly k_replicas slots")
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("pattern slots must be distinct")
        if any(not (0 <= s < self.frame_len) for s in self.slots):
            raise ValueError("pattern slots must lie inside the frame")


class SlotGrid:
    """One frame of slots with per-slot transmissions (device, replica index)."""

    def __init__(self, frame_len: int, slot_duration: float = 1.0):
        if frame_len < 1:
            raise ValueError(f"frame_len must be >= 1, got {frame_len}")
        if slot_duration <= 0:
            raise ValueError("slot_duration must be > 0")
        self.frame_len = frame_len
        self.slot_duration = slot_duration
        self._tx: list[tuple[int, int]] = []  # (device, slot)
        self._seen: set[tuple[int, int]] = set()
        self._n_devices = 0

    def add_device(self, device: int, slots: Sequence[int]) -> None:
        for slot in slots:
            slot = int(slot)
            if not (0 <= slot < self.frame_len):
                raise ValueError(f"slot {slot} outside frame of {self.frame_len}")
            key = (int(device), slot)
            if key in self._seen:
                raise ValueError(
                    f"device {device} already transmits in slot {slot}"
                )
            self._seen.add(key)
            self._tx.append(key)
        self._n_devices = max(self._n_devices, int(device) + 1)

    @property
    def n_devices(self) -> int:
        return self._n_devices

    @property
    def transmissions(self) -> list[tuple[int, int]]:
        return list(self._tx)

    def occupancy(self) -> list[set[tuple[int, int]]]:
        """Per-slot sets of (device, replica) pairs."""
        replica_counter: dict[int, int] = {}
        slots: list[set[tuple[int, int]]] = [set() for _ in range(self.frame_len)]
        for device, slot in self._tx:
            replica = replica_counter.get(device, 0)
            replica_counter[device] = replica + 1
            slots[slot].add((device, replica))
        return slots


@dataclass
class FrameOutcome:
    """Decode state after resolving one frame."""

    decoded: np.ndarray
    enable_slot: np.ndarray
    iterations: int
    n_transmissions: int

    def latency_slots(self, device: int) -> int:
        """Slots from frame start to the decode-enabling event, -1 if dropped."""
        if not self.decoded[device]:
            return -1
        return int(self.enable_slot[device]) + 1


def generate_access_pattern(seed: int, frame_len: int, k_replicas: int) -> AccessPattern:
    """k distinct uniformly drawn slots; idempotent in (seed, frame_len, k)."""
    if k_replicas < 1:
        raise ValueError("k_replicas must be >= 1")
    if k_replicas > frame_len:
        raise ValueError(
            f"k_replicas {k_replicas} exceeds frame length {frame_len}"
        )
    rng = np.random.default_rng(int(seed))
    uniforms = rng.random(k_replicas)
    out = np.empty(k_replicas, dtype=np.int64)
    kernels.floyd_sample_kernel(uniforms, 0, frame_len, k_replicas, out, 0)
    return AccessPattern(
        seed=int(seed),
        frame_len=frame_len,
        k_replicas=k_replicas,
        slots=tuple(sorted(int(s) for s in out)),
    )


def resolve_frame(grid: SlotGrid, receiver: ReceiverModel, seed: int) -> FrameOutcome:
    """Run the MPR/SIC/combining fixed point on a populated frame."""
    n_devices = grid.n_devices
    tx = grid.transmissions
    tx_dev = np.array([d for d, _ in tx], dtype=np.int64)
    tx_slot = np.array([s for _, s in tx], dtype=np.int64)
    n_tx = len(tx)
    replicas_per_device = np.zeros(max(n_devices, 1), dtype=np.int64)
    for d, _ in tx:
        replicas_per_device[d] += 1
    k_max = int(replicas_per_device.max()) if n_tx else 1

    rng = rng_for(seed, "resolve")
    u_tx = rng.random(max(n_tx, 1))
    u_dev = rng.random((k_max, max(n_devices, 1)))

    decoded = np.zeros(max(n_devices, 1), dtype=np.bool_)
    enable_slot = np.full(max(n_devices, 1), -1, dtype=np.int64)
    iterations = int(
        kernels.resolve_kernel(
            tx_dev,
            tx_slot,
            n_tx,
            max(n_devices, 1),
            grid.frame_len,
            receiver.mpr_gamma,
            receiver.sic_enabled,
            receiver.combining_enabled,
            receiver.per_replica_success,
            u_tx,
            u_dev,
            decoded,
            enable_slot,
        )
    )
    if iterations > n_tx + 1:
        raise AssertionError("fixed point exceeded its iteration bound")
    return FrameOutcome(
        decoded=decoded[:n_devices],
        enable_slot=enable_slot[:n_devices],
        iterations=iterations,
        n_transmissions=n_tx,
    )


def assign_patterns(
    n_devices: int,
    frame_len: int,
    k_replicas: int,
    strategy: Literal["orthogonal_first", "random"],
    seed: int,
) -> list[AccessPattern]:
    """BS-side pattern assignment for coordinated grant-free access.

    orthogonal_first carves pairwise-disjoint patterns out of a shuffled
    slot permutation while capacity allows (floor(frame_len / k) devices),
    then falls back to independent random patterns.
    """
    if k_replicas < 1 or n_devices < 1:
        raise ValueError("n_devices and k_replicas must be >= 1")
    if k_replicas > frame_len:
        raise ValueError(
            f"k_replicas {k_replicas} exceeds frame length {frame_len}"
        )
    if strategy not in ("orthogonal_first", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = rng_for(seed, "assign", strategy)

    def random_pattern() -> tuple[int, ...]:
        uniforms = rng.random(k_replicas)
        out = np.empty(k_replicas, dtype=np.int64)
        kernels.floyd_sample_kernel(uniforms, 0, frame_len, k_replicas, out, 0)
        return tuple(sorted(int(s) for s in out))

    patterns: list[AccessPattern] = []
    if strategy == "orthogonal_first":
        perm = np.arange(frame_len, dtype=np.int64)
        for i in range(frame_len - 1, 0, -1):  # Fisher-Yates, stable across numpy
            j = int(rng.integers(0, i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        n_orthogonal = min(n_devices, frame_len // k_replicas)
        for d in range(n_orthogonal):
            chunk = perm[d * k_replicas : (d + 1) * k_replicas]
            patterns.append(
                AccessPattern(
                    seed=int(seed),
                    frame_len=frame_len,
                    k_replicas=k_replicas,
                    slots=tuple(sorted(int(s) for s in chunk)),
                )
            )
    while len(patterns) < n_devices:
        patterns.append(
            AccessPattern(
                seed=int(seed),
                frame_len=frame_len,
                k_replicas=k_replicas,
                slots=random_pattern(),
            )
        )
    return patterns


@dataclass
class AccessRunResult:
    """Aggregate outcome of a multi-frame access simulation.

    cdf is None when no packet was ever generated (e.g. activation
    probability 0); event arrays cover every activation.
    """

    cdf: LatencyCdf | None
    frame_len: int
    slot_duration: float
    n_frames: int
    n_activated: int
    n_decoded: int
    frame_activated: np.ndarray
    frame_decoded: np.ndarray
    ev_frame: np.ndarray
    ev_device: np.ndarray
    ev_decoded: np.ndarray
    ev_latency_slots: np.ndarray
    per_frame_conserved: bool = field(default=True)

    @property
    def n_dropped(self) -> int:
        return self.n_activated - self.n_decoded

    @property
    def reliability(self) -> float:
        return self.n_decoded / self.n_activated if self.n_activated else float("nan")

    @property
    def throughput_per_slot(self) -> float:
        return self.n_decoded / (self.n_frames * self.frame_len)

    def event_rows(self):
        """`frame, device, activated, decoded, latency_slots` rows for CSV export."""
        for i in range(self.ev_frame.size):
            yield (
                int(self.ev_frame[i]),
                int(self.ev_device[i]),
                1,
                int(self.ev_decoded[i]),
                int(self.ev_latency_slots[i]),
            )


def _run_chunked(
    n_devices: int,
    activation_prob: float,
    k_replicas: int,
    receiver: ReceiverModel,
    frame_len: int,
    n_frames: int,
    seed: int,
    slot_duration: float,
    fixed_slots: np.ndarray | None,
    stream_tag: str,
) -> AccessRunResult:
    if not (0.0 <= activation_prob <= 1.0):
        raise ValueError("activation_prob must be in [0, 1]")
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    if k_replicas > frame_len:
        raise ValueError(
            f"k_replicas {k_replicas} exceeds frame length {frame_len}"
        )
    use_fixed = fixed_slots is not None
    if not use_fixed:
        fixed_slots = np.zeros((n_devices, k_replicas), dtype=np.int64)

    ev_frames: list[np.ndarray] = []
    ev_devices: list[np.ndarray] = []
    ev_flags: list[np.ndarray] = []
    ev_lat: list[np.ndarray] = []
    frame_activated = np.zeros(n_frames, dtype=np.int64)
    frame_decoded = np.zeros(n_frames, dtype=np.int64)

    n_chunks = (n_frames + _CHUNK_FRAMES - 1) // _CHUNK_FRAMES
    for chunk in range(n_chunks):
        start = chunk * _CHUNK_FRAMES
        size = min(_CHUNK_FRAMES, n_frames - start)
        rng = rng_for(seed, stream_tag, chunk)
        act_u = rng.random((size, n_devices))
        pat_u = rng.random((size, n_devices, k_replicas))
        tx_u = rng.random((size, n_devices, k_replicas))
        dev_u = rng.random((size, k_replicas, n_devices))

        cap = size * n_devices
        c_frame = np.empty(cap, dtype=np.int64)
        c_device = np.empty(cap, dtype=np.int64)
        c_decoded = np.empty(cap, dtype=np.bool_)
        c_latency = np.empty(cap, dtype=np.int64)
        n_events = int(
            kernels.run_frames_kernel(
                act_u,
                pat_u,
                tx_u,
                dev_u,
                fixed_slots,
                use_fixed,
                n_devices,
                k_replicas,
                frame_len,
                receiver.mpr_gamma,
                receiver.sic_enabled,
                receiver.combining_enabled,
                receiver.per_replica_success,
                activation_prob,
                c_frame,
                c_device,
                c_decoded,
                c_latency,
                frame_activated[start : start + size],
                frame_decoded[start : start + size],
            )
        )
        ev_frames.append(c_frame[:n_events] + start)
        ev_devices.append(c_device[:n_events])
        ev_flags.append(c_decoded[:n_events])
        ev_lat.append(c_latency[:n_events])

    ev_frame = np.concatenate(ev_frames) if ev_frames else np.empty(0, np.int64)
    ev_device = np.concatenate(ev_devices) if ev_devices else np.empty(0, np.int64)
    ev_decoded = np.concatenate(ev_flags) if ev_flags else np.empty(0, np.bool_)
    ev_latency = np.concatenate(ev_lat) if ev_lat else np.empty(0, np.int64)

    n_activated = int(ev_frame.size)
    n_decoded = int(np.count_nonzero(ev_decoded))
    conserved = bool(
        np.all(frame_activated >= frame_decoded)
        and frame_activated.sum() == n_activated
        and frame_decoded.sum() == n_decoded
    )
    if n_activated:
        latencies = [
            lat * slot_duration if flagged else DROP
            for lat, flagged in zip(ev_latency, ev_decoded)
        ]
        cdf = cdf_from_samples(latencies)
    else:
        cdf = None
    return AccessRunResult(
        cdf=cdf,
        frame_len=frame_len,
        slot_duration=slot_duration,
        n_frames=n_frames,
        n_activated=n_activated,
        n_decoded=n_decoded,
        frame_activated=frame_activated,
        frame_decoded=frame_decoded,
        ev_frame=ev_frame,
        ev_device=ev_device,
        ev_decoded=ev_decoded,
        ev_latency_slots=ev_latency,
        per_frame_conserved=conserved,
    )


def run_grant_free(
    n_devices: int,
    activation_prob: float,
    k_replicas: int,
    receiver: ReceiverModel,
    frame_len: int,
    n_frames: int,
    seed: int,
    slot_duration: float = 1.0,
) -> AccessRunResult:
    """Grant-free access: active devices draw fresh k-replica patterns per frame."""
    return _run_chunked(
        n_devices,
        activation_prob,
        k_replicas,
        receiver,
        frame_len,
        n_frames,
        seed,
        slot_duration,
        fixed_slots=None,
        stream_tag="grant_free",
    )


def run_coordinated(
    n_devices: int,
    activation_prob: float,
    assigned_patterns: Sequence[AccessPattern],
    receiver: ReceiverModel,
    n_frames: int,
    seed: int,
    slot_duration: float = 1.0,
) -> AccessRunResult:
    """Coordinated grant-free access with one fixed pattern per device."""
    if len(assigned_patterns) != n_devices:
        raise ValueError("need exactly one pattern per device")
    frame_lens = {p.frame_len for p in assigned_patterns}
    ks = {p.k_replicas for p in assigned_patterns}
    if len(frame_lens) != 1 or len(ks) != 1:
        raise ValueError("patterns must share frame_len and k_replicas")
    frame_len = frame_lens.pop()
    k_replicas = ks.pop()
    fixed = np.array([p.slots for p in assigned_patterns], dtype=np.int64)
    return _run_chunked(
        n_devices,
        activation_prob,
        k_replicas,
        receiver,
        frame_len,
        n_frames,
        seed,
        slot_duration,
        fixed_slots=fixed,
        stream_tag="coordinated",
    )


def run_grant_based(
    chain,
    round_trip_slots: Sequence[int],
    n_trials: int,
    seed: int,
    slot_duration: float = 1.0,
) -> LatencyCdf:
    """Reservation-style exchange: each step must succeed or the packet drops.

    Latency of a delivered packet is the total exchange time (sum of
    per-step round trips); a failed step drops the packet with no retry.
    """
    steps = np.asarray(chain.steps, dtype=float)
    round_trip = np.asarray(round_trip_slots, dtype=float)
    if round_trip.shape != steps.shape:
        raise ValueError("round_trip_slots must match the chain length")
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    rng = rng_for(seed, "grant_based")
    uniforms = rng.random((n_trials, steps.size))
    success = np.all(uniforms < steps[None, :], axis=1)
    total_latency = float(round_trip.sum()) * slot_duration
    samples: list = [total_latency if ok else DROP for ok in success]
    return cdf_from_samples(samples)
