"""Command-line front end.

Subcommands:
  analytic   closed-form sweep over offered load
  validate   closed-form sweep with Monte Carlo columns attached
  threshold  bisect for the load where s_total crosses a target
  hopseq     emit one hopping sequence as JSON

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 I/O failure.  Flags override values from an optional JSON config file.
"""

from __future__ import annotations

import argparse
import json
import sys

from .hopping import Channelization, build_grid_plan, generate_sequence
from .nearest import QuadratureError
from .sweep import (
    ConfigError,
    SweepConfig,
    emit_csv,
    emit_json,
    find_threshold_load,
    run_sweep,
    write_output,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_CONFIG_KEYS = (
    "dr", "strategy", "load_min_mbps", "load_max_mbps", "points", "log_axis",
    "include_zero", "alpha", "sigma_h_db", "sigma_p_db", "payload_bytes",
    "trials", "seed", "nearest_joint", "out", "fmt",
)


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--dr", choices=["DR5", "DR6", "both"])
    parser.add_argument("--strategy", choices=["macro", "nearest", "both"])
    parser.add_argument("--load-min", dest="load_min_mbps", type=float,
                        help="lowest load point in Mbps")
    parser.add_argument("--load-max", dest="load_max_mbps", type=float,
                        help="highest load point in Mbps")
    parser.add_argument("--points", type=int)
    parser.add_argument("--log-axis", dest="log_axis", action="store_true",
                        default=None)
    parser.add_argument("--include-zero", dest="include_zero",
                        action="store_true", default=None)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--sigma-h-db", dest="sigma_h_db", type=float)
    parser.add_argument("--sigma-p-db", dest="sigma_p_db", type=float)
    parser.add_argument("--payload-bytes", dest="payload_bytes", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--nearest-joint", dest="nearest_joint",
                        action="store_true", default=None)
    parser.add_argument("--out")
    parser.add_argument("--format", dest="fmt", choices=["csv", "json"])


def _build_config(args: argparse.Namespace, **overrides) -> SweepConfig:
    values = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            file_values = json.load(handle)
        unknown = set(file_values) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(file_values)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    values.update(overrides)
    return SweepConfig(**values)


def _cmd_analytic(args) -> int:
    config = _build_config(args, mc_enabled=False)
    rows = run_sweep(config)
    text = emit_json(rows, config) if config.fmt == "json" else emit_csv(rows, config)
    write_output(text, config.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = _build_config(args, mc_enabled=True)
    rows = run_sweep(config)
    text = emit_json(rows, config) if config.fmt == "json" else emit_csv(rows, config)
    write_output(text, config.out)
    return EXIT_OK


def _cmd_threshold(args) -> int:
    config = _build_config(args, mc_enabled=False)
    results = find_threshold_load(config, args.target)
    lines = ["dr,strategy,target,load_mbps,detail"]
    for r in results:
        load = f"{r.load_mbps:.9g}" if r.load_mbps is not None else "out-of-range"
        lines.append(f"{r.dr},{r.strategy},{r.target:g},{load},{r.detail}")
    write_output("\n".join(lines) + "\n", config.out)
    return EXIT_OK


def _cmd_hopseq(args) -> int:
    channels = Channelization()
    seq = generate_sequence(args.device_id, args.hop_seed, args.grid,
                            args.length, channels)
    plan = build_grid_plan(channels)
    payload = {
        "device_id": seq.device_id,
        "seed": seq.seed,
        "grid": seq.grid_index,
        "hops": list(seq.hops),
        "centers_hz": seq.center_frequencies_hz(plan),
    }
    text = json.dumps(payload, indent=2) + "\n"
    write_output(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrfhss",
        description="LR-FHSS macro-diversity capacity sweeps and hopping tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analytic = sub.add_parser("analytic", help="closed-form sweep")
    _add_sweep_flags(p_analytic)
    p_analytic.set_defaults(func=_cmd_analytic)

    p_validate = sub.add_parser(
        "validate", help="closed-form sweep with Monte Carlo columns")
    _add_sweep_flags(p_validate)
    p_validate.set_defaults(func=_cmd_validate)

    p_threshold = sub.add_parser(
        "threshold", help="find the load where s_total crosses a target")
    _add_sweep_flags(p_threshold)
    p_threshold.add_argument("--target", type=float, default=0.8)
    p_threshold.set_defaults(func=_cmd_threshold)

    p_hopseq = sub.add_parser("hopseq", help="emit one hopping sequence")
    p_hopseq.add_argument("--device-id", dest="device_id", type=int, required=True)
    p_hopseq.add_argument("--hop-seed", dest="hop_seed", type=int, required=True)
    p_hopseq.add_argument("--grid", type=int, required=True)
    p_hopseq.add_argument("--length", type=int, required=True)
    p_hopseq.add_argument("--out")
    p_hopseq.set_defaults(func=_cmd_hopseq)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: I/O failure ({exc.filename}): {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
