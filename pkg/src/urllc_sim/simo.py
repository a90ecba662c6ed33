"""Monte-Carlo symbol-error rates for an M-antenna receiver: MRC vs energy detection.

Model per trial: y = h x + z + w with h ~ CN(0, I_M), unit-variance noise z,
optional Gaussian interference w, and signal power set by the link SNR.

Coherent maximum-ratio combining uses a mobility-degraded channel estimate
hhat = (1 - sigma) h + sqrt(1 - (1 - sigma)^2) e, so the channel/estimate
correlation is exactly 1 - sigma (sigma = 0 perfect estimate, sigma = 1
uncorrelated) while the estimate keeps unit variance.  Non-coherent energy
detection never touches the estimate, which is what makes it immune to
mobility: with many antennas the received energy hardens around its mean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .fbl import LinkSnr
from .seeding import derive_seed, rng_for
from .util import parallel_map

_CHUNK_TRIALS = 4096


@dataclass(frozen=True)
class SimoChannel:
    """Receive-array channel: antenna count, SNR, mobility index, interference."""

    m_antennas: int
    snr: float
    sigma: float = 0.0
    interference_power: float = 0.0

    def __post_init__(self) -> None:
        if self.m_antennas < 1:
            raise ValueError(f"m_antennas must be >= 1, got {self.m_antennas}")
        if not (self.snr > 0):
            raise ValueError(f"snr must be > 0, got {self.snr}")
        if not (0.0 <= self.sigma <= 1.0):
            raise ValueError(f"sigma must be in [0, 1], got {self.sigma}")
        if self.interference_power < 0:
            raise ValueError("interference_power must be >= 0")

    @classmethod
    def from_db(
        cls,
        m_antennas: int,
        snr_db: float,
        sigma: float = 0.0,
        interference_power: float = 0.0,
    ) -> "SimoChannel":
        return cls(m_antennas, LinkSnr.from_db(snr_db).snr, sigma, interference_power)


@dataclass(frozen=True)
class SerResult:
    """Symbol-error estimate with its trial budget."""

    errors: int
    trials: int

    @property
    def ser(self) -> float:
        return self.errors / self.trials

    @property
    def stderr(self) -> float:
        """Binomial standard error of the SER estimate."""
        p = self.ser
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def half_width95(self) -> float:
        return 1.96 * self.stderr


def _pam_levels(constellation_size: int, snr: float) -> np.ndarray:
    """Bipolar PAM amplitudes with average power snr (unit noise per antenna)."""
    l = np.arange(constellation_size, dtype=float)
    levels = 2.0 * l - (constellation_size - 1)
    scale = math.sqrt(3.0 * snr / (constellation_size**2 - 1))
    return levels * scale


def _ed_energies(energy_levels: int, snr: float) -> np.ndarray:
    """Unipolar symbol energies, equally spaced, average power snr."""
    return np.arange(energy_levels, dtype=float) * (2.0 * snr / (energy_levels - 1))


def _cn_matrix(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """n x m draws of CN(0, 1)."""
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / math.sqrt(
        2.0
    )


def _chunks(trials: int) -> list[int]:
    sizes = [_CHUNK_TRIALS] * (trials // _CHUNK_TRIALS)
    if trials % _CHUNK_TRIALS:
        sizes.append(trials % _CHUNK_TRIALS)
    return sizes


def simulate_mrc_ser(
    channel: SimoChannel, constellation_size: int, trials: int, seed: int
) -> SerResult:
    """SER of coherent MRC with nearest-neighbour detection on the combined symbol.

    The combiner projects y onto the (imperfect) estimate and normalizes the
    gain: r = Re(hhat^H y) / ||hhat||^2, then picks the closest PAM level.
    Deterministic given (channel, constellation_size, trials, seed),
    independent of how trials are chunked.
    """
    if constellation_size < 2:
        raise ValueError("constellation_size must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    levels = _pam_levels(constellation_size, channel.snr)
    rho = 1.0 - channel.sigma
    err_weight = math.sqrt(max(0.0, 1.0 - rho * rho))
    m = channel.m_antennas

    errors = 0
    for chunk_index, size in enumerate(_chunks(trials)):
        rng = rng_for(seed, "mrc", chunk_index)
        h = _cn_matrix(rng, size, m)
        est_err = _cn_matrix(rng, size, m)
        z = _cn_matrix(rng, size, m)
        sym = rng.integers(0, constellation_size, size)
        h_est = rho * h + err_weight * est_err
        y = h * levels[sym][:, None] + z
        if channel.interference_power > 0:
            y = y + math.sqrt(channel.interference_power) * _cn_matrix(rng, size, m)
        combined = np.real(np.sum(np.conj(h_est) * y, axis=1)) / np.sum(
            np.abs(h_est) ** 2, axis=1
        )
        detected = np.argmin(np.abs(combined[:, None] - levels[None, :]), axis=1)
        errors += int(np.count_nonzero(detected != sym))
    return SerResult(errors=errors, trials=trials)


def simulate_ed_ser(
    channel: SimoChannel, energy_levels: int, trials: int, seed: int
) -> SerResult:
    """SER of non-coherent energy detection on s = ||y||^2 / M.

    Symbols are unipolar amplitudes with equally spaced energies; the
    detector compares s against the expected per-level energy
    E[s | level] = E_level + noise + interference power.  The channel
    estimate (and hence sigma) plays no role by construction.
    """
    if energy_levels < 2:
        raise ValueError("energy_levels must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    energies = _ed_energies(energy_levels, channel.snr)
    amplitudes = np.sqrt(energies)
    expected = energies + 1.0 + channel.interference_power
    m = channel.m_antennas

    errors = 0
    for chunk_index, size in enumerate(_chunks(trials)):
        rng = rng_for(seed, "ed", chunk_index)
        h = _cn_matrix(rng, size, m)
        z = _cn_matrix(rng, size, m)
        sym = rng.integers(0, energy_levels, size)
        y = h * amplitudes[sym][:, None] + z
        if channel.interference_power > 0:
            y = y + math.sqrt(channel.interference_power) * _cn_matrix(rng, size, m)
        stat = np.sum(np.abs(y) ** 2, axis=1) / m
        detected = np.argmin(np.abs(stat[:, None] - expected[None, :]), axis=1)
        errors += int(np.count_nonzero(detected != sym))
    return SerResult(errors=errors, trials=trials)


@dataclass(frozen=True)
class HeatmapResult:
    """SER gain grid: rows follow snr_grid_db, columns follow sigma_grid.

    gain_log10[i, j] = log10(ser_mrc / ser_ed); zero-error estimates are
    replaced by the Monte-Carlo resolution bound 1/trials and flagged in
    ``censored``.
    """

    snr_grid_db: tuple[float, ...]
    sigma_grid: tuple[float, ...]
    ser_mrc: np.ndarray
    ser_ed: np.ndarray
    gain_log10: np.ndarray
    censored: np.ndarray
    mrc_half_width95: np.ndarray
    ed_half_width95: np.ndarray
    trials: int


def ser_gain_heatmap(
    snr_grid_db,
    sigma_grid,
    m_antennas: int = 128,
    constellation_size: int = 2,
    trials: int = 100_000,
    seed: int = 0,
    interference_power: float = 0.0,
    jobs: int = 1,
) -> HeatmapResult:
    """Grid of log10(SER_MRC / SER_ED) over SNR (dB) and mobility index.

    ED is evaluated once per SNR (it cannot depend on sigma); cell seeds are
    derived from the grid position, so the grid is reproducible for any job
    count.
    """
    snr_grid_db = [float(v) for v in snr_grid_db]
    sigma_grid = [float(v) for v in sigma_grid]
    if not snr_grid_db or not sigma_grid:
        raise ValueError("grids must be non-empty")

    def ed_cell(i: int) -> SerResult:
        channel = SimoChannel.from_db(
            m_antennas, snr_grid_db[i], 0.0, interference_power
        )
        return simulate_ed_ser(
            channel, constellation_size, trials, derive_seed(seed, "ed", i)
        )

    def mrc_cell(ij: tuple[int, int]) -> SerResult:
        i, j = ij
        channel = SimoChannel.from_db(
            m_antennas, snr_grid_db[i], sigma_grid[j], interference_power
        )
        return simulate_mrc_ser(
            channel, constellation_size, trials, derive_seed(seed, "mrc", i, j)
        )

    ed_results = parallel_map(ed_cell, range(len(snr_grid_db)), jobs)
    cells = [(i, j) for i in range(len(snr_grid_db)) for j in range(len(sigma_grid))]
    mrc_results = parallel_map(mrc_cell, cells, jobs)

    shape = (len(snr_grid_db), len(sigma_grid))
    ser_mrc = np.zeros(shape)
    gain = np.zeros(shape)
    censored = np.zeros(shape, dtype=bool)
    mrc_hw = np.zeros(shape)
    ser_ed = np.array([r.ser for r in ed_results])
    ed_hw = np.array([r.half_width95 for r in ed_results])
    floor = 1.0 / trials
    for (i, j), result in zip(cells, mrc_results):
        ser_mrc[i, j] = result.ser
        mrc_hw[i, j] = result.half_width95
        censored[i, j] = result.errors == 0 or ed_results[i].errors == 0
        gain[i, j] = math.log10(
            max(result.ser, floor) / max(ed_results[i].ser, floor)
        )
    return HeatmapResult(
        snr_grid_db=tuple(snr_grid_db),
        sigma_grid=tuple(sigma_grid),
        ser_mrc=ser_mrc,
        ser_ed=ser_ed,
        gain_log10=gain,
        censored=censored,
        mrc_half_width95=mrc_hw,
        ed_half_width95=ed_hw,
        trials=trials,
    )


HEATMAP_CSV_HEADER = [
    "snr_db",
    "sigma",
    "ser_mrc",
    "ser_ed",
    "gain_log10",
    "trials",
    "censored",
]


def heatmap_rows(result: HeatmapResult):
    for i, snr_db in enumerate(result.snr_grid_db):
        for j, sigma in enumerate(result.sigma_grid):
            yield (
                repr(snr_db),
                repr(sigma),
                repr(float(result.ser_mrc[i, j])),
                repr(float(result.ser_ed[i])),
                repr(float(result.gain_log10[i, j])),
                result.trials,
                int(result.censored[i, j]),
            )


def export_heatmap_csv(result: HeatmapResult, path: str) -> None:
    """Write `snr_db, sigma, ser_mrc, ser_ed, gain_log10, trials, censored` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEATMAP_CSV_HEADER)
        for row in heatmap_rows(result):
            writer.writerow(row)
