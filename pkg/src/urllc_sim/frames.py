"""Downlink frame design: separate vs grouped vs joint encoding of short messages.

Encoding k bits in one block needs fewer channel uses than encoding two
k/2-bit blocks (the finite-blocklength back-off scales with 1/sqrt(n)), so
jointly encoding all messages shortens the frame.  The price: every device
must receive and decode the whole packet.  The planners below produce the
two extremes and any grouped layout in between, with per-device
decode-energy accounting in received channel uses.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

from .fbl import LinkSnr, min_blocklength

_MAX_POINTER_ITERATIONS = 10


class PlanningError(ValueError):
    """Raised when a frame plan cannot satisfy its reliability budget."""


@dataclass(frozen=True)
class MessageSpec:
    """One device's downlink payload and its delivery-failure budget."""

    device_id: str
    b_bits: int
    epsilon_target: float

    def __post_init__(self) -> None:
        if self.b_bits < 1:
            raise ValueError(f"b_bits must be >= 1, got {self.b_bits}")
        if not (0.0 < self.epsilon_target < 1.0):
            raise ValueError(
                f"epsilon_target must be in (0, 1), got {self.epsilon_target}"
            )


@dataclass(frozen=True)
class FramePlan:
    """An encoded frame layout.

    grouping: partition of messages into encoded blocks (tuples of device ids);
    per_device_energy_cu: channel uses each device must receive and decode,
    always header + its own block (joint plan: the full frame for everyone).
    """

    grouping: tuple[tuple[str, ...], ...]
    header_cu: int
    block_cu: tuple[int, ...]
    total_cu: int
    per_device_energy_cu: dict[str, int] = field(hash=False)

    def __post_init__(self) -> None:
        if self.total_cu != self.header_cu + sum(self.block_cu):
            raise ValueError("total_cu must equal header_cu + sum(block_cu)")
        for device, energy in self.per_device_energy_cu.items():
            if energy > self.total_cu:
                raise ValueError(
                    f"device {device} energy {energy} exceeds frame {self.total_cu}"
                )

    @property
    def max_device_energy_cu(self) -> int:
        return max(self.per_device_energy_cu.values())

    @property
    def min_device_energy_cu(self) -> int:
        return min(self.per_device_energy_cu.values())


def _pointer_bits(total_cu: int) -> int:
    return max(1, math.ceil(math.log2(total_cu))) if total_cu > 1 else 1


def _check_messages(messages: Sequence[MessageSpec]) -> None:
    if not messages:
        raise PlanningError("need at least one message")
    ids = [m.device_id for m in messages]
    if len(set(ids)) != len(ids):
        raise PlanningError("device ids must be unique")


def _blocks_with_header(
    messages: Sequence[MessageSpec],
    groups: Sequence[Sequence[int]],
    snr: LinkSnr | float,
) -> FramePlan:
    """Header + one block per group; epsilons split by union bound.

    Per-message reliability budget is split evenly: half to the header,
    half to the message's own block, so failure prob <= eps_h + eps_i <=
    epsilon_target.  The header carries one pointer per block; pointer
    width depends on total_cu, so the layout is iterated to a fixed point.
    """
    eps_h = min(m.epsilon_target for m in messages) / 2.0
    if not (0.0 < eps_h < 1.0):
        raise PlanningError(f"header epsilon {eps_h} infeasible")

    block_cu = []
    for group in groups:
        members = [messages[i] for i in group]
        k_bits = sum(m.b_bits for m in members)
        eps_block = min(m.epsilon_target for m in members) / 2.0
        block_cu.append(min_blocklength(k_bits, eps_block, snr))

    header_payload_per_block = len(groups)
    total = sum(block_cu)  # first estimate ignores the header
    header_cu = 0
    for _ in range(_MAX_POINTER_ITERATIONS):
        header_bits = header_payload_per_block * _pointer_bits(total)
        header_cu = min_blocklength(header_bits, eps_h, snr)
        new_total = header_cu + sum(block_cu)
        if new_total == total:
            break
        total = new_total
    else:
        raise PlanningError("header pointer width did not converge")

    energy = {}
    grouping = []
    for group, cu in zip(groups, block_cu):
        members = tuple(messages[i].device_id for i in group)
        grouping.append(members)
        for device in members:
            energy[device] = header_cu + cu
    return FramePlan(
        grouping=tuple(grouping),
        header_cu=header_cu,
        block_cu=tuple(block_cu),
        total_cu=total,
        per_device_energy_cu=energy,
    )


def plan_separate(
    messages: Sequence[MessageSpec],
    snr: LinkSnr | float,
    include_header: bool = True,
) -> FramePlan:
    """One packet per message plus a pointer header (the conventional frame).

    With the header disabled each message gets its full epsilon budget and
    the frame is just the concatenated packets.
    """
    _check_messages(messages)
    if include_header:
        return _blocks_with_header(messages, [[i] for i in range(len(messages))], snr)
    block_cu = tuple(
        min_blocklength(m.b_bits, m.epsilon_target, snr) for m in messages
    )
    energy = {m.device_id: cu for m, cu in zip(messages, block_cu)}
    return FramePlan(
        grouping=tuple((m.device_id,) for m in messages),
        header_cu=0,
        block_cu=block_cu,
        total_cu=sum(block_cu),
        per_device_energy_cu=energy,
    )


def plan_joint(messages: Sequence[MessageSpec], snr: LinkSnr | float) -> FramePlan:
    """All messages jointly encoded into a single packet, no header.

    The block is coded at the strictest per-device target, so every message
    is delivered with at least its requested reliability; every device must
    receive and decode the full frame.
    """
    _check_messages(messages)
    k_bits = sum(m.b_bits for m in messages)
    eps = min(m.epsilon_target for m in messages)
    total = min_blocklength(k_bits, eps, snr)
    energy = {m.device_id: total for m in messages}
    return FramePlan(
        grouping=(tuple(m.device_id for m in messages),),
        header_cu=0,
        block_cu=(total,),
        total_cu=total,
        per_device_energy_cu=energy,
    )


def plan_grouped(
    messages: Sequence[MessageSpec],
    snr: LinkSnr | float,
    groups: Sequence[Sequence[int]],
) -> FramePlan:
    """Messages partitioned into encoded blocks; extremes match the two plans.

    A single group degenerates to :func:`plan_joint` (no header); singleton
    groups reproduce :func:`plan_separate`.
    """
    _check_messages(messages)
    seen = sorted(i for group in groups for i in group)
    if seen != list(range(len(messages))):
        raise PlanningError("groups must partition the message indices")
    if len(groups) == 1:
        return plan_joint(messages, snr)
    return _blocks_with_header(messages, groups, snr)


def tradeoff_curve(
    messages: Sequence[MessageSpec],
    snr: LinkSnr | float,
    partitions: Sequence[Sequence[Sequence[int]]],
) -> list[tuple[FramePlan, int, int]]:
    """(plan, total_cu, max device energy) per partition, sorted by total_cu.

    The partition list must contain both extremes (all-singletons and the
    single block); their points coincide with plan_separate / plan_joint.
    """
    _check_messages(messages)
    normalized = [
        tuple(tuple(sorted(group)) for group in partition) for partition in partitions
    ]
    singleton = tuple((i,) for i in range(len(messages)))
    single_block = (tuple(range(len(messages))),)
    have = {tuple(sorted(p)) for p in normalized}
    if tuple(sorted(singleton)) not in have or tuple(sorted(single_block)) not in have:
        raise PlanningError("partitions must include both extremes")

    points = []
    for partition in normalized:
        plan = plan_grouped(messages, snr, partition)
        points.append((plan, plan.total_cu, plan.max_device_energy_cu))
    points.sort(key=lambda item: (item[1], item[2]))
    return points


def pareto_front(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Non-dominated (total_cu, max_energy) points, ascending in total_cu."""
    best: list[tuple[int, int]] = []
    for total, energy in sorted(set(points)):
        if not best or energy < best[-1][1]:
            best.append((total, energy))
    return best


TRADEOFF_CSV_HEADER = [
    "grouping_id",
    "total_cu",
    "max_device_energy_cu",
    "min_device_energy_cu",
]


def tradeoff_rows(points: Sequence[tuple[FramePlan, int, int]]):
    for plan, total, max_energy in points:
        grouping_id = "|".join("+".join(group) for group in plan.grouping)
        yield (grouping_id, total, max_energy, plan.min_device_energy_cu)


def export_tradeoff_csv(
    points: Sequence[tuple[FramePlan, int, int]], path: str
) -> None:
    """Write `grouping_id, total_cu, max_device_energy_cu, min_device_energy_cu`."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRADEOFF_CSV_HEADER)
        for row in tradeoff_rows(points):
            writer.writerow(row)
