"""Experiment orchestration: named scenarios, validated JSON configs, CSV emission.

A config document looks like

    {"scenario": "grant_free", "master_seed": 42, "params": {...}}

Unknown scenario names and unknown parameter keys are rejected outright
(typos in reliability sweeps are expensive), and every numeric range is
checked before any simulation starts.  Each run writes one or more result
CSVs plus ``manifest.json`` (config echo, seeds, versions, wall time, file
digests).  Identical configs produce byte-identical CSVs; the scenario
seed for sweep point i is the stable hash of (master_seed, scenario, i),
with a plain run using index 0.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import time
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from . import access, frames, interfaces, minislot, reliability, simo, topology
from .seeding import derive_seed
from .util import parallel_map, write_csv_atomic

SCENARIO_IDS = (
    "latency_cdf",
    "frame_tradeoff",
    "simo_heatmap",
    "pd_interfaces",
    "densification",
    "grant_free",
    "coordinated",
    "grant_based",
    "minislot",
)


class ConfigError(ValueError):
    """Invalid configuration document (exit code 2)."""


class ScenarioError(RuntimeError):
    """Failure while running an otherwise valid scenario (exit code 3)."""


_REQUIRED = object()


@dataclass(frozen=True)
class Param:
    name: str
    kind: type
    default: Any = _REQUIRED
    check: Callable[[Any], bool] | None = None
    why: str = ""


def _positive(v) -> bool:
    return v > 0


def _non_negative(v) -> bool:
    return v >= 0


def _probability(v) -> bool:
    return 0.0 <= v <= 1.0


def _validate_value(param: Param, value: Any, path: str) -> Any:
    if param.kind in (int, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected {param.kind.__name__}")
        if param.kind is int and not isinstance(value, int):
            raise ConfigError(f"{path}: expected int")
        value = param.kind(value)
    elif param.kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected bool")
    elif param.kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected str")
    elif param.kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected list")
    elif param.kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{path}: expected object")
    if param.check is not None and not param.check(value):
        raise ConfigError(f"{path}: value {value!r} out of range ({param.why})")
    return value


def _validate_params(raw: dict, schema: Sequence[Param], path: str) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object")
    by_name = {p.name: p for p in schema}
    unknown = sorted(set(raw) - set(by_name))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    out = {}
    for param in schema:
        if param.name in raw:
            out[param.name] = _validate_value(
                param, raw[param.name], f"{path}.{param.name}"
            )
        elif param.default is _REQUIRED:
            raise ConfigError(f"{path}.{param.name}: required")
        else:
            out[param.name] = param.default
    return out


class OutputDir:
    """Tracks files written by a scenario; refuses paths outside the directory."""

    def __init__(self, root: str):
        self.root = os.path.abspath(root)
        os.makedirs(self.root, exist_ok=True)
        self.files: list[str] = []

    def path(self, name: str) -> str:
        full = os.path.abspath(os.path.join(self.root, name))
        if not (full + os.sep).startswith(self.root + os.sep) and full != self.root:
            raise ScenarioError(f"refusing to write outside output dir: {name}")
        return full

    def write_csv(self, name: str, header: Sequence[str], rows) -> str:
        full = self.path(name)
        write_csv_atomic(full, header, rows)
        self.files.append(full)
        return full

    def cleanup(self) -> None:
        for path in self.files:
            if os.path.exists(path):
                os.unlink(path)

    def digests(self) -> dict[str, str]:
        out = {}
        for path in self.files:
            with open(path, "rb") as fh:
                out[os.path.relpath(path, self.root)] = hashlib.sha256(
                    fh.read()
                ).hexdigest()
        return out


# --------------------------------------------------------------------------
# scenario implementations


_SYNTH_IFACE_SCHEMA = (
    Param("name", str),
    Param("base_median_ms", float, check=_positive, why="median > 0"),
    Param("base_sigma", float, 0.25, _non_negative, "sigma >= 0"),
    Param("spike_prob", float, 0.0, _probability, "probability"),
    Param("spike_min_ms", float, 100.0, _positive, "spike floor > 0"),
    Param("spike_alpha", float, 1.5, _positive, "tail index > 0"),
    Param("loss_prob", float, 0.0, lambda v: 0.0 <= v < 1.0, "in [0, 1)"),
)


def _synth_model(spec: dict) -> interfaces.SynthTraceModel:
    return interfaces.SynthTraceModel(
        base_median_ms=spec["base_median_ms"],
        base_sigma=spec["base_sigma"],
        spike_prob=spec["spike_prob"],
        spike_min_ms=spec["spike_min_ms"],
        spike_alpha=spec["spike_alpha"],
        loss_prob=spec["loss_prob"],
    )


def _run_latency_cdf(params, seed, out: OutputDir, jobs) -> dict:
    model = interfaces.SynthTraceModel(
        base_median_ms=params["base_median_ms"],
        base_sigma=params["base_sigma"],
        spike_prob=params["spike_prob"],
        spike_min_ms=params["spike_min_ms"],
        spike_alpha=params["spike_alpha"],
        loss_prob=params["loss_prob"],
    )
    trace = interfaces.synth_trace(
        model, float(params["n_samples"]), 1.0, seed, name="latency_cdf"
    )
    samples = [
        reliability.DROP if v == interfaces.LOSS_SENTINEL else v
        for v in trace.latencies_ms
    ]
    cdf, points = interfaces.reliability_curve(samples, params["n_deadlines"])
    out.write_csv(
        "latency_cdf.csv",
        reliability.RELIABILITY_CSV_HEADER,
        reliability.reliability_rows(cdf, [t for t, _ in points]),
    )
    return {
        "asymptote": 1.0 - cdf.drop_count / cdf.total,
        "n_drops": float(cdf.drop_count),
    }


def _all_partitions(n: int):
    """Every set partition of range(n), singletons-first ordering per block."""
    if n == 1:
        yield [[0]]
        return
    for rest in _all_partitions(n - 1):
        for i in range(len(rest)):
            yield [block + [n - 1] if j == i else block for j, block in enumerate(rest)]
        yield rest + [[n - 1]]


def _run_frame_tradeoff(params, seed, out: OutputDir, jobs) -> dict:
    n = params["n_messages"]
    messages = [
        frames.MessageSpec(f"dev{i}", params["b_bits"], params["epsilon_target"])
        for i in range(n)
    ]
    snr = 10.0 ** (params["snr_db"] / 10.0)
    if params["partitions"] == "all":
        if n > 8:
            raise ConfigError(
                "params.partitions: 'all' supports at most 8 messages "
                "(set partitions grow exponentially)"
            )
        partitions = list(_all_partitions(n))
    elif params["partitions"] == "extremes":
        partitions = [[[i] for i in range(n)], [list(range(n))]]
    else:
        raise ConfigError("params.partitions: expected 'all' or 'extremes'")
    points = frames.tradeoff_curve(messages, snr, partitions)
    out.write_csv(
        "frame_tradeoff.csv", frames.TRADEOFF_CSV_HEADER, frames.tradeoff_rows(points)
    )
    separate = frames.plan_separate(messages, snr)
    joint = frames.plan_joint(messages, snr)
    return {
        "separate_total_cu": float(separate.total_cu),
        "joint_total_cu": float(joint.total_cu),
        "n_partitions": float(len(points)),
    }


def _run_simo_heatmap(params, seed, out: OutputDir, jobs) -> dict:
    result = simo.ser_gain_heatmap(
        params["snr_db_grid"],
        params["sigma_grid"],
        m_antennas=params["m_antennas"],
        constellation_size=params["constellation_size"],
        trials=params["trials"],
        seed=seed,
        interference_power=params["interference_power"],
        jobs=jobs,
    )
    out.write_csv("simo_heatmap.csv", simo.HEATMAP_CSV_HEADER, simo.heatmap_rows(result))
    return {
        "gain_min": float(result.gain_log10.min()),
        "gain_max": float(result.gain_log10.max()),
        "censored_cells": float(result.censored.sum()),
    }


def _run_pd_interfaces(params, seed, out: OutputDir, jobs) -> dict:
    specs = [
        _validate_params(raw, _SYNTH_IFACE_SCHEMA, f"params.interfaces[{i}]")
        for i, raw in enumerate(params["interfaces"])
    ]
    if not specs:
        raise ConfigError("params.interfaces: need at least one interface")
    names = [s["name"] for s in specs]
    if len(set(names)) != len(names):
        raise ConfigError("params.interfaces: names must be unique")
    traces = [
        interfaces.synth_trace(
            _synth_model(spec),
            params["duration_s"],
            params["rate_hz"],
            derive_seed(seed, "iface", i),
            name=spec["name"],
        )
        for i, spec in enumerate(specs)
    ]
    raw_configs = params["configs"] or [[n] for n in names] + [names]
    configs = []
    for i, subset in enumerate(raw_configs):
        if not isinstance(subset, list) or not all(isinstance(s, str) for s in subset):
            raise ConfigError(f"params.configs[{i}]: expected a list of names")
        configs.append(interfaces.PdConfig(tuple(subset)))

    all_ms = [
        float(v)
        for t in traces
        for v in t.latencies_ms
        if v != interfaces.LOSS_SENTINEL
    ]
    if not all_ms:
        raise ScenarioError("all synthetic events were losses")
    grid_ms = np.geomspace(max(min(all_ms), 1e-3), max(all_ms), params["n_deadlines"])

    summary: dict[str, float] = {}
    for config in configs:
        samples = interfaces.pd_latency(traces, config)
        cdf, points = interfaces.reliability_curve(samples, grid_ms=grid_ms)
        out.write_csv(
            f"pd_{config.label}.csv",
            reliability.RELIABILITY_CSV_HEADER,
            reliability.reliability_rows(cdf, [t for t, _ in points]),
        )
        summary[f"drops_{config.label}"] = float(cdf.drop_count)
    return summary


def _run_densification(params, seed, out: OutputDir, jobs) -> dict:
    kwargs = dict(
        payload_bits=params["payload_bits"],
        lambda_bs_grid=params["lambda_bs_grid"],
        lambda_users=params["lambda_users"],
        replications=params["replications"],
        seed=seed,
        area_side=params["area_side"],
        pathloss_exponent=params["pathloss_exponent"],
        tx_power=params["tx_power"],
        noise_power=params["noise_power"],
        bandwidth=params["bandwidth"],
        jobs=jobs,
    )
    baseline = topology.latency_vs_density(mode="baseline", **kwargs)
    cooperation = topology.latency_vs_density(mode="cooperation", **kwargs)

    def rows():
        for point in baseline + cooperation:
            yield (
                repr(point.lambda_bs),
                point.mode,
                repr(point.mean_latency_s),
                repr(point.ci95_low),
                repr(point.ci95_high),
                point.replications,
            )

    out.write_csv(
        "densification.csv",
        ["lambda_bs", "mode", "mean_latency_s", "ci95_low", "ci95_high", "replications"],
        rows(),
    )
    coop_wins = sum(
        1
        for b, c in zip(baseline, cooperation)
        if c.mean_latency_s <= b.mean_latency_s
    )
    return {
        "baseline_first_latency": baseline[0].mean_latency_s,
        "baseline_last_latency": baseline[-1].mean_latency_s,
        "coop_points_not_worse": float(coop_wins),
    }


def _receiver_from(params) -> access.ReceiverModel:
    return access.ReceiverModel(
        mpr_gamma=params["mpr_gamma"],
        sic_enabled=params["sic_enabled"],
        combining_enabled=params["combining_enabled"],
        per_replica_success=params["per_replica_success"],
    )


def _access_outputs(result: access.AccessRunResult, stem: str, params, out: OutputDir):
    if params["events_csv"]:
        out.write_csv(
            f"{stem}_events.csv",
            ["frame", "device", "activated", "decoded", "latency_slots"],
            result.event_rows(),
        )
    if result.cdf is not None:
        deadlines = [
            (i + 1) * result.slot_duration for i in range(result.frame_len)
        ]
        out.write_csv(
            f"{stem}_reliability.csv",
            reliability.RELIABILITY_CSV_HEADER,
            reliability.reliability_rows(result.cdf, deadlines),
        )
    return {
        "n_activated": float(result.n_activated),
        "n_decoded": float(result.n_decoded),
        "reliability": result.reliability if result.n_activated else 0.0,
        "throughput_per_slot": result.throughput_per_slot,
    }


def _run_grant_free(params, seed, out: OutputDir, jobs) -> dict:
    result = access.run_grant_free(
        n_devices=params["n_devices"],
        activation_prob=params["activation_prob"],
        k_replicas=params["k_replicas"],
        receiver=_receiver_from(params),
        frame_len=params["frame_len"],
        n_frames=params["n_frames"],
        seed=seed,
        slot_duration=params["slot_duration"],
    )
    return _access_outputs(result, "grant_free", params, out)


def _run_coordinated(params, seed, out: OutputDir, jobs) -> dict:
    patterns = access.assign_patterns(
        params["n_devices"],
        params["frame_len"],
        params["k_replicas"],
        params["strategy"],
        derive_seed(seed, "patterns"),
    )
    result = access.run_coordinated(
        n_devices=params["n_devices"],
        activation_prob=params["activation_prob"],
        assigned_patterns=patterns,
        receiver=_receiver_from(params),
        n_frames=params["n_frames"],
        seed=seed,
        slot_duration=params["slot_duration"],
    )
    return _access_outputs(result, "coordinated", params, out)


def _run_grant_based(params, seed, out: OutputDir, jobs) -> dict:
    steps = params["step_success"]
    round_trips = params["round_trip_slots"]
    if len(steps) != len(round_trips):
        raise ConfigError(
            "params.round_trip_slots must match step_success in length"
        )
    chain = reliability.ProtocolChain(steps)
    cdf = access.run_grant_based(
        chain, round_trips, params["n_trials"], seed, params["slot_duration"]
    )
    total = sum(round_trips) * params["slot_duration"]
    deadlines = [total * f for f in (0.5, 1.0, 1.5)]
    out.write_csv(
        "grant_based_reliability.csv",
        reliability.RELIABILITY_CSV_HEADER,
        reliability.reliability_rows(cdf, deadlines),
    )
    return {
        "analytic_success": reliability.chain_success(chain),
        "empirical_success": reliability.reliability_at(cdf, total),
    }


def _run_minislot(params, seed, out: OutputDir, jobs) -> dict:
    size_dist: int | dict
    if params["size_dist"]:
        try:
            size_dist = {int(k): float(v) for k, v in params["size_dist"].items()}
        except ValueError:
            raise ConfigError("params.size_dist: keys must be symbol counts") from None
    else:
        size_dist = params["size_symbols"]
    cdf, sched = minislot.urllc_latency_cdf(
        rate=params["rate_hz"],
        size_dist=size_dist,
        n_slots=params["n_slots"],
        seed=seed,
        control_prefix=params["control_prefix"],
        symbol_duration=params["symbol_duration"],
    )
    out.write_csv(
        "minislot_arrivals.csv",
        ["arrival_time_s", "size_symbols", "latency_s", "dropped"],
        sched.csv_rows(),
    )
    summary = {
        "embb_loss_fraction": sched.embb_loss_fraction,
        "n_arrivals": float(len(sched.arrivals)),
        "n_dropped": float(int(sched.dropped.sum())),
    }
    if cdf is not None and cdf.sorted_samples.size:
        p99_index = max(0, math.ceil(0.99 * cdf.total) - 1)
        if p99_index < cdf.sorted_samples.size:
            summary["p99_latency_s"] = float(cdf.sorted_samples[p99_index])
    return summary


_ACCESS_COMMON = (
    Param("n_devices", int, 100, _positive, "at least one device"),
    Param("activation_prob", float, 0.1, _probability, "probability"),
    Param("k_replicas", int, 2, _positive, "at least one replica"),
    Param("frame_len", int, 20, _positive, "at least one slot"),
    Param("n_frames", int, 500, _positive, "at least one frame"),
    Param("slot_duration", float, 1e-3, _positive, "seconds > 0"),
    Param("mpr_gamma", int, 1, lambda v: v >= 1, "receiver decodes >= 1 packet"),
    Param("sic_enabled", bool, True),
    Param("combining_enabled", bool, False),
    Param("per_replica_success", float, 1.0, _probability, "probability"),
    Param("events_csv", bool, True),
)

SCENARIOS: dict[str, tuple[tuple[Param, ...], Callable]] = {
    "latency_cdf": (
        (
            Param("n_samples", int, 10_000, _positive, "sample count"),
            Param("base_median_ms", float, 20.0, _positive, "median > 0"),
            Param("base_sigma", float, 0.3, _non_negative, "sigma >= 0"),
            Param("spike_prob", float, 0.05, _probability, "probability"),
            Param("spike_min_ms", float, 100.0, _positive, "spike floor > 0"),
            Param("spike_alpha", float, 1.5, _positive, "tail index > 0"),
            Param("loss_prob", float, 1e-3, lambda v: 0.0 <= v < 1.0, "in [0, 1)"),
            Param("n_deadlines", int, 50, _positive, "grid size"),
        ),
        _run_latency_cdf,
    ),
    "frame_tradeoff": (
        (
            Param("n_messages", int, 4, _positive, "at least one message"),
            Param("b_bits", int, 256, _positive, "payload bits"),
            Param("epsilon_target", float, 1e-5, lambda v: 0 < v < 1, "in (0, 1)"),
            Param("snr_db", float, 0.0),
            Param("partitions", str, "all"),
        ),
        _run_frame_tradeoff,
    ),
    "simo_heatmap": (
        (
            Param("snr_db_grid", list, [-10.0, -5.0, 0.0, 5.0, 10.0]),
            Param("sigma_grid", list, [0.0, 0.25, 0.5, 0.75, 0.9, 1.0]),
            Param("m_antennas", int, 128, _positive, "antenna count"),
            Param("constellation_size", int, 2, lambda v: v >= 2, "at least binary"),
            Param("trials", int, 20_000, _positive, "trial count"),
            Param("interference_power", float, 0.0, _non_negative, ">= 0"),
        ),
        _run_simo_heatmap,
    ),
    "pd_interfaces": (
        (
            Param("interfaces", list),
            Param("configs", list, []),
            Param("duration_s", float, 1000.0, _positive, "seconds"),
            Param("rate_hz", float, 1.0, _positive, "events per second"),
            Param("n_deadlines", int, 40, _positive, "grid size"),
        ),
        _run_pd_interfaces,
    ),
    "densification": (
        (
            Param("payload_bits", float, 100.0, _positive, "payload"),
            Param("lambda_bs_grid", list, [0.02, 0.05, 0.1, 0.2, 0.4]),
            Param("lambda_users", float, 0.01, _positive, "user density"),
            Param("replications", int, 200, _positive, "replication count"),
            Param("area_side", float, 60.0, _positive, "window side"),
            Param("pathloss_exponent", float, 4.0, lambda v: v > 2, "alpha > 2"),
            Param("tx_power", float, 1.0, _positive, "power"),
            Param("noise_power", float, 1e-6, _positive, "power"),
            Param("bandwidth", float, 1.0, _positive, "bandwidth"),
        ),
        _run_densification,
    ),
    "grant_free": (_ACCESS_COMMON, _run_grant_free),
    "coordinated": (
        _ACCESS_COMMON
        + (
            Param(
                "strategy",
                str,
                "orthogonal_first",
                lambda v: v in ("orthogonal_first", "random"),
                "assignment strategy",
            ),
        ),
        _run_coordinated,
    ),
    "grant_based": (
        (
            Param("step_success", list, [0.99, 0.99, 0.99]),
            Param("round_trip_slots", list, [2, 2, 2]),
            Param("n_trials", int, 10_000, _positive, "trial count"),
            Param("slot_duration", float, 1e-3, _positive, "seconds"),
        ),
        _run_grant_based,
    ),
    "minislot": (
        (
            Param("rate_hz", float, 50.0, _non_negative, "arrivals per second"),
            Param("size_symbols", int, 1, lambda v: 1 <= v <= 6, "1..6 symbols"),
            Param("size_dist", dict, {}),
            Param("n_slots", int, 2_000, _positive, "horizon in slots"),
            Param("control_prefix", int, 1, lambda v: 1 <= v <= 6, "1..6 symbols"),
            Param("symbol_duration", float, 1e-3, _positive, "seconds"),
        ),
        _run_minislot,
    ),
}


def validate_config(raw: dict) -> dict:
    """Validate a config document; returns the normalized copy with defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = sorted(set(raw) - {"scenario", "master_seed", "params", "out_dir"})
    if unknown:
        raise ConfigError(f"config: unknown keys {unknown}")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"config.scenario: expected one of {sorted(SCENARIOS)}, got {scenario!r}"
        )
    master_seed = raw.get("master_seed", 0)
    if isinstance(master_seed, bool) or not isinstance(master_seed, int):
        raise ConfigError("config.master_seed: expected an integer")
    if not (0 <= master_seed < 2**64):
        raise ConfigError("config.master_seed: expected a u64")
    out_dir = raw.get("out_dir")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError("config.out_dir: expected a string")
    schema, _ = SCENARIOS[scenario]
    params = _validate_params(raw.get("params", {}), schema, "params")
    config = {"scenario": scenario, "master_seed": master_seed, "params": params}
    if out_dir is not None:
        config["out_dir"] = out_dir
    return config


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return validate_config(raw)


def run(
    config: dict,
    out_dir: str,
    seed_override: int | None = None,
    jobs: int = 1,
    sweep_index: int = 0,
) -> dict:
    """Execute one validated config; returns the manifest dict.

    Partial outputs are removed if the scenario fails.
    """
    config = validate_config(dict(config))
    if seed_override is not None:
        config["master_seed"] = int(seed_override)
    scenario = config["scenario"]
    scenario_seed = derive_seed(config["master_seed"], scenario, sweep_index)
    schema, fn = SCENARIOS[scenario]
    out = OutputDir(out_dir)
    started = time.monotonic()
    try:
        summary = fn(config["params"], scenario_seed, out, jobs)
    except ConfigError:
        out.cleanup()
        raise
    except Exception as exc:
        out.cleanup()
        raise ScenarioError(f"scenario {scenario} failed: {exc}") from exc
    manifest = {
        "config": {k: v for k, v in config.items() if k != "out_dir"},
        "scenario_seed": scenario_seed,
        "sweep_index": sweep_index,
        "summary": summary,
        "files": out.digests(),
        "versions": _versions(),
        "wall_time_s": time.monotonic() - started,
    }
    manifest_path = out.path("manifest.json")
    from .util import atomic_write_text

    atomic_write_text(manifest_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _versions() -> dict[str, str]:
    import platform

    import numpy
    import scipy

    versions = {
        "urllc_sim": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
    }
    try:
        import numba

        versions["numba"] = numba.__version__
    except ImportError:
        versions["numba"] = "absent"
    return versions


def _set_by_path(config: dict, path: str, value) -> dict:
    parts = path.split(".")
    target = config
    for part in parts[:-1]:
        if not isinstance(target, dict) or part not in target:
            raise ConfigError(f"sweep parameter path not found: {path}")
        target = target[part]
    if not isinstance(target, dict) or parts[-1] not in target:
        raise ConfigError(f"sweep parameter path not found: {path}")
    target[parts[-1]] = value
    return config


def sweep(
    config: dict,
    param_path: str,
    values: Sequence,
    out_dir: str,
    seed_override: int | None = None,
    jobs: int = 1,
) -> list[dict]:
    """Run one scenario per value, each in out_dir/point_XXX, plus a summary CSV.

    Sweep point i runs with scenario seed hash(master_seed, scenario, i).
    """
    if not values:
        raise ConfigError("sweep: value list must be non-empty")
    base = validate_config(dict(config))
    if seed_override is not None:
        base["master_seed"] = int(seed_override)
    point_configs = []
    for value in values:
        candidate = json.loads(json.dumps(base))  # deep copy
        _set_by_path(candidate, param_path, value)
        point_configs.append(validate_config(candidate))

    def run_point(index: int) -> dict:
        return run(
            point_configs[index],
            os.path.join(out_dir, f"point_{index:03d}"),
            jobs=1,
            sweep_index=index,
        )

    manifests = parallel_map(run_point, range(len(values)), jobs)

    summary_keys = sorted({k for m in manifests for k in m["summary"]})
    rows = []
    for index, (value, manifest) in enumerate(zip(values, manifests)):
        rows.append(
            [index, param_path, json.dumps(value), manifest["scenario_seed"]]
            + [
                repr(manifest["summary"][k]) if k in manifest["summary"] else ""
                for k in summary_keys
            ]
        )
    root = OutputDir(out_dir)
    root.write_csv(
        "sweep_summary.csv",
        ["index", "param", "value", "seed"] + summary_keys,
        rows,
    )
    return manifests
