"""Command-line entry point.

    urllc-sim run   --config cfg.json --out results/ [--seed N] [--jobs N]
    urllc-sim sweep --config cfg.json --param params.activation_prob \
                    --values 0.05,0.1,0.2 --out results/ [--seed N] [--jobs N]

Seed/jobs/output can also come from the environment (URLLC_SIM_SEED,
URLLC_SIM_JOBS, URLLC_SIM_OUT) for CI; explicit flags win over the
environment, which wins over the config file.  Exit codes: 0 success,
2 validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .runner import ConfigError, load_config, run, sweep

ENV_PREFIX = "URLLC_SIM_"


def _env_int(name: str) -> int | None:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{name}: expected an integer, got {raw!r}") from None


def _parse_values(raw: str) -> list:
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urllc-sim",
        description="Seed-deterministic URLLC access-layer experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", help="output directory (overrides config/env)")
        p.add_argument("--seed", type=int, help="master seed override (u64)")
        p.add_argument("--jobs", type=int, help="parallel workers (default 1)")

    run_p = sub.add_parser("run", help="run one scenario")
    common(run_p)

    sweep_p = sub.add_parser("sweep", help="run a scenario across parameter values")
    common(sweep_p)
    sweep_p.add_argument("--param", required=True, help="dotted path, e.g. params.n_frames")
    sweep_p.add_argument("--values", required=True, help="comma-separated JSON values")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        seed = args.seed if args.seed is not None else _env_int("SEED")
        jobs = args.jobs if args.jobs is not None else _env_int("JOBS")
        jobs = 1 if jobs is None else max(1, jobs)
        out_dir = args.out or os.environ.get(ENV_PREFIX + "OUT") or config.get("out_dir")
        if not out_dir:
            raise ConfigError("no output directory (use --out, URLLC_SIM_OUT, or out_dir)")
        if args.command == "run":
            manifest = run(config, out_dir, seed_override=seed, jobs=jobs)
            print(json.dumps(manifest["summary"], indent=2, sort_keys=True))
        else:
            values = _parse_values(args.values)
            if not values:
                raise ConfigError("sweep: --values must contain at least one value")
            manifests = sweep(
                config, args.param, values, out_dir, seed_override=seed, jobs=jobs
            )
            print(f"swept {len(manifests)} points into {out_dir}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
