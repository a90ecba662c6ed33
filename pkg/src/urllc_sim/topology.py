"""Poisson-network Monte-Carlo: BS densification and idle-BS cooperation.

Base stations and users are planar Poisson point processes on a square
observed as a torus (wrap-around metric avoids boundary bias).  Each user
is served by its nearest BS under power-law path loss with a 1 m distance
floor; loaded BSs split their band equally among their users.  Latency is
proxied by the transmission time of a fixed payload at Shannon rate.

Cooperation mode wakes the nearest user-void BS as a second serving link:
the pair cancels mutual interference toward the joint user and the user
collects the sum of both link rates, while awakened BSs do interfere with
everyone else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seeding import derive_seed, rng_for
from .util import parallel_map

DISTANCE_FLOOR = 1.0


@dataclass(frozen=True)
class NetworkSnapshot:
    """One realisation of the BS/user point processes plus radio constants."""

    bs_xy: np.ndarray
    user_xy: np.ndarray
    area_side: float
    pathloss_exponent: float
    tx_power: float
    noise_power: float
    bandwidth: float

    def __post_init__(self) -> None:
        if self.pathloss_exponent <= 2:
            raise ValueError("pathloss exponent must exceed 2 for finite interference")
        if self.tx_power <= 0 or self.noise_power <= 0 or self.bandwidth <= 0:
            raise ValueError("powers and bandwidth must be > 0")

    @property
    def n_bs(self) -> int:
        return int(self.bs_xy.shape[0])

    @property
    def n_users(self) -> int:
        return int(self.user_xy.shape[0])


@dataclass
class AssociationPlan:
    """Serving/cooperating assignment and the resulting BS activity state."""

    serving: np.ndarray  # per-user serving BS index
    cooperating: np.ndarray  # per-user idle helper index, -1 if none
    bs_idle: np.ndarray  # idle before cooperation (no served users)
    bs_load: np.ndarray  # users served per BS
    coop_load: np.ndarray  # users helped per awakened BS
    bs_active: np.ndarray  # transmitting (serving or awakened)


def sample_network(
    lambda_bs: float,
    lambda_users: float,
    area_side: float,
    seed: int,
    pathloss_exponent: float = 4.0,
    tx_power: float = 1.0,
    noise_power: float = 1e-6,
    bandwidth: float = 1.0,
) -> NetworkSnapshot:
    """Draw Poisson counts and uniform positions for BSs and users."""
    if lambda_bs <= 0 or lambda_users <= 0 or area_side <= 0:
        raise ValueError("densities and area side must be > 0")
    rng = rng_for(seed, "ppp")
    area = area_side * area_side
    n_bs = int(rng.poisson(lambda_bs * area))
    n_users = int(rng.poisson(lambda_users * area))
    bs_xy = rng.random((n_bs, 2)) * area_side
    user_xy = rng.random((n_users, 2)) * area_side
    return NetworkSnapshot(
        bs_xy=bs_xy,
        user_xy=user_xy,
        area_side=area_side,
        pathloss_exponent=pathloss_exponent,
        tx_power=tx_power,
        noise_power=noise_power,
        bandwidth=bandwidth,
    )


def torus_distances(a: np.ndarray, b: np.ndarray, side: float) -> np.ndarray:
    """Pairwise wrap-around distances between point sets a (n,2) and b (m,2)."""
    delta = np.abs(a[:, None, :] - b[None, :, :])
    delta = np.minimum(delta, side - delta)
    return np.sqrt((delta**2).sum(axis=2))


def associate(snapshot: NetworkSnapshot, cooperation: bool) -> AssociationPlan:
    """Nearest-BS association, plus nearest idle helpers in cooperation mode."""
    if snapshot.n_bs == 0:
        raise ValueError("snapshot has no base stations")
    dist = torus_distances(snapshot.user_xy, snapshot.bs_xy, snapshot.area_side)
    serving = (
        np.argmin(dist, axis=1)
        if snapshot.n_users
        else np.empty(0, dtype=np.int64)
    )
    bs_load = np.bincount(serving, minlength=snapshot.n_bs)
    bs_idle = bs_load == 0
    cooperating = np.full(snapshot.n_users, -1, dtype=np.int64)
    if cooperation and np.any(bs_idle) and snapshot.n_users:
        idle_idx = np.flatnonzero(bs_idle)
        nearest_idle = idle_idx[np.argmin(dist[:, idle_idx], axis=1)]
        cooperating = nearest_idle.astype(np.int64)
    coop_load = np.bincount(
        cooperating[cooperating >= 0], minlength=snapshot.n_bs
    )
    bs_active = (bs_load > 0) | (coop_load > 0)
    return AssociationPlan(
        serving=serving.astype(np.int64),
        cooperating=cooperating,
        bs_idle=bs_idle,
        bs_load=bs_load,
        coop_load=coop_load,
        bs_active=bs_active,
    )


def _received_power(snapshot: NetworkSnapshot) -> np.ndarray:
    dist = torus_distances(snapshot.user_xy, snapshot.bs_xy, snapshot.area_side)
    dist = np.maximum(dist, DISTANCE_FLOOR)
    return snapshot.tx_power * dist ** (-snapshot.pathloss_exponent)


def compute_sinr(
    snapshot: NetworkSnapshot,
    plan: AssociationPlan,
    user: int,
    link: str = "serving",
) -> float:
    """Linear SINR of a user's serving (or cooperating) link.

    Active BSs other than the user's serving/cooperating pair interfere;
    the pair never interferes with its joint user.
    """
    power = _received_power(snapshot)
    bs = plan.serving[user] if link == "serving" else plan.cooperating[user]
    if bs < 0:
        raise ValueError(f"user {user} has no {link} BS")
    own = {int(plan.serving[user]), int(plan.cooperating[user])}
    interference = sum(
        float(power[user, b])
        for b in np.flatnonzero(plan.bs_active)
        if int(b) not in own
    )
    return float(power[user, bs]) / (snapshot.noise_power + interference)


def user_latencies(
    snapshot: NetworkSnapshot, payload_bits: float, cooperation: bool
) -> np.ndarray:
    """Per-user payload transmission times under equal per-BS bandwidth shares."""
    if snapshot.n_users == 0:
        return np.empty(0)
    plan = associate(snapshot, cooperation)
    power = _received_power(snapshot)
    active = plan.bs_active
    total_active = (power * active[None, :]).sum(axis=1)
    users = np.arange(snapshot.n_users)

    p_serv = power[users, plan.serving]
    interference = total_active - p_serv
    has_coop = plan.cooperating >= 0
    p_coop = np.where(has_coop, power[users, np.maximum(plan.cooperating, 0)], 0.0)
    interference = interference - np.where(has_coop, p_coop, 0.0)

    share = 1.0 / plan.bs_load[plan.serving]
    sinr_serv = p_serv / (snapshot.noise_power + interference)
    rate = share * snapshot.bandwidth * np.log2(1.0 + sinr_serv)
    if cooperation:
        sinr_coop = np.where(
            has_coop, p_coop / (snapshot.noise_power + interference), 0.0
        )
        coop_share = np.where(
            has_coop, 1.0 / np.maximum(plan.coop_load[plan.cooperating], 1), 0.0
        )
        rate = rate + coop_share * snapshot.bandwidth * np.log2(1.0 + sinr_coop)
    return payload_bits / rate


@dataclass
class DensityPoint:
    lambda_bs: float
    mode: str
    mean_latency_s: float
    ci95_low: float
    ci95_high: float
    replications: int
    replication_means: np.ndarray


def latency_vs_density(
    payload_bits: float,
    lambda_bs_grid,
    lambda_users: float = 0.01,
    mode: str = "baseline",
    replications: int = 200,
    seed: int = 0,
    area_side: float = 60.0,
    pathloss_exponent: float = 4.0,
    tx_power: float = 1.0,
    noise_power: float = 1e-6,
    bandwidth: float = 1.0,
    jobs: int = 1,
) -> list[DensityPoint]:
    """Mean user latency per BS density, with 95% CIs over replications.

    Replication seeds depend only on (seed, grid index, replication), so a
    baseline and a cooperation run with the same seed are paired draws.
    Replications with an empty user or BS set are skipped.
    """
    if mode not in ("baseline", "cooperation"):
        raise ValueError(f"unknown mode {mode!r}")
    lambda_bs_grid = [float(v) for v in lambda_bs_grid]
    if not lambda_bs_grid:
        raise ValueError("density grid must be non-empty")
    cooperation = mode == "cooperation"

    def one_point(grid_index: int) -> DensityPoint:
        lambda_bs = lambda_bs_grid[grid_index]
        means = []
        for r in range(replications):
            snapshot = sample_network(
                lambda_bs,
                lambda_users,
                area_side,
                derive_seed(seed, "density", grid_index, r),
                pathloss_exponent=pathloss_exponent,
                tx_power=tx_power,
                noise_power=noise_power,
                bandwidth=bandwidth,
            )
            if snapshot.n_bs == 0 or snapshot.n_users == 0:
                means.append(np.nan)
                continue
            means.append(float(user_latencies(snapshot, payload_bits, cooperation).mean()))
        means = np.asarray(means)
        valid = means[~np.isnan(means)]
        mean = float(valid.mean())
        half = 1.96 * float(valid.std(ddof=1)) / math.sqrt(valid.size) if valid.size > 1 else 0.0
        return DensityPoint(
            lambda_bs=lambda_bs,
            mode=mode,
            mean_latency_s=mean,
            ci95_low=mean - half,
            ci95_high=mean + half,
            replications=int(valid.size),
            replication_means=means,
        )

    return parallel_map(one_point, range(len(lambda_bs_grid)), jobs)
