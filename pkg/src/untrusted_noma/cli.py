"""Command-line front door: counting, secure-order filtering, single-order
evaluation, policy generation, beta sweeps, and full Monte Carlo runs.

Exit codes: 0 success, 1 invalid input, 2 runtime/I-O failure. Powers are
given in dBm and distances in meters, converted internally. A config file
(flat ``key = value`` lines, ``#`` comments) supplies defaults; explicit
flags override it. The default config path may be set via the
UNTRUSTED_NOMA_CONFIG environment variable.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields
from typing import Sequence

from .experiments import (
    DEFAULT_BETA_GRID,
    ExperimentConfig,
    ResultRecord,
    export,
    format_number,
    run_experiment,
    write_csv,
)
from .optimizer import SCHEMES, sweep_all
from .orders import (
    count_secure,
    enumerate_orders,
    is_favourable,
    is_secure,
    order_from_id,
    order_id,
    policy_order,
)
from .system import SystemParams, power_allocation, sample_channels, secrecy_rates

__all__ = ["main", "entry"]

CONFIG_ENV_VAR = "UNTRUSTED_NOMA_CONFIG"

_PARAM_KEYS = {f.name for f in fields(SystemParams)}
_CONFIG_KEYS = _PARAM_KEYS | {
    "trials",
    "master_seed",
    "beta_grid",
    "schemes",
    "output_path",
    "output_format",
}


class _CliError(Exception):
    """Invalid input; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        raise _CliError(message)


def _parse_beta_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise _CliError(f"invalid beta grid {text!r}; expected comma-separated floats")


def _parse_schemes(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def read_config_file(path: str) -> dict:
    """Parse a flat key=value config file into typed values."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as stream:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _CliError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = (part.strip() for part in line.partition("="))
            if key not in _CONFIG_KEYS:
                raise _CliError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value
    typed: dict = {}
    for key, value in values.items():
        try:
            if key in ("n_users", "trials", "master_seed"):
                typed[key] = int(value)
            elif key == "beta_grid":
                typed[key] = _parse_beta_grid(value)
            elif key == "schemes":
                typed[key] = _parse_schemes(value)
            elif key in ("output_path", "output_format"):
                typed[key] = value
            else:  # remaining SystemParams fields are floats
                typed[key] = float(value)
        except ValueError:
            raise _CliError(f"{path}: bad value for {key!r}: {value!r}")
    return typed


def _load_config(args: argparse.Namespace) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    return read_config_file(path) if path else {}


def _pick(args: argparse.Namespace, cfg: dict, flag: str, key: str, default):
    """Flag value if given, else config-file value, else default."""
    value = getattr(args, flag, None)
    if value is not None:
        return value
    return cfg.get(key, default)


def _build_params(args: argparse.Namespace, cfg: dict) -> SystemParams:
    n_users = _pick(args, cfg, "users", "n_users", None)
    if n_users is None:
        raise _CliError("--users is required (or n_users in the config file)")
    return SystemParams(
        n_users=n_users,
        pt_dbm=_pick(args, cfg, "pt_dbm", "pt_dbm", 10.0),
        noise_dbm=_pick(args, cfg, "noise_dbm", "noise_dbm", -90.0),
        zeta=_pick(args, cfg, "zeta", "zeta", 0.1),
        field_len_m=_pick(args, cfg, "field_len", "field_len_m", 500.0),
        path_loss_const=cfg.get("path_loss_const", 1.0),
        path_loss_exp=cfg.get("path_loss_exp", 3.0),
        min_dist_m=cfg.get("min_dist_m", 1.0),
    )


def _print_matrix(order) -> None:
    """Columns are users, rows are SIC stages."""
    n = order.n_users
    for k in range(n):
        print(" ".join(str(order.columns[m][k]) for m in range(n)))


def _emit_records(records: list[ResultRecord], args: argparse.Namespace, cfg: dict) -> None:
    """Print records as CSV and mirror them to --output when given."""
    write_csv(records, sys.stdout)
    out = _pick(args, cfg, "output", "output_path", None)
    if out:
        export(records, out, _pick(args, cfg, "format", "output_format", "csv"))


def _cmd_count(args: argparse.Namespace) -> int:
    allow = bool(args.allow_large_n)
    total = sum(1 for _ in enumerate_orders(args.users, allow))
    secure = count_secure(args.users, allow)
    favourable = sum(1 for o in enumerate_orders(args.users, allow) if is_favourable(o))
    print(f"total={total} secure={secure} favourable={favourable}")
    return 0


def _cmd_filter_secure(args: argparse.Namespace) -> int:
    for order in enumerate_orders(args.users, bool(args.allow_large_n)):
        if is_secure(order):
            print(order_id(order))
    return 0


def _cmd_policy(args: argparse.Namespace) -> int:
    _print_matrix(policy_order(args.users, args.beta))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = _build_params(args, cfg)
    if args.order_id is not None:
        order = order_from_id(params.n_users, args.order_id)
    else:
        order = policy_order(params.n_users, args.beta)
    channels = sample_channels(params, args.seed)
    alpha = power_allocation(channels, args.beta)
    ev = secrecy_rates(order, channels, alpha, params)
    record = ResultRecord(
        trial=0,
        beta=args.beta,
        scheme="eval",
        order_id=order_id(order),
        min_secrecy_rate=ev.min_rate,
        per_user_rates=ev.per_user_rates,
    )
    print(f"beta={format_number(args.beta)} order_id={record.order_id}")
    for i, rate in enumerate(ev.per_user_rates, start=1):
        print(f"user_rate_{i}={format_number(rate)}")
    print(f"min_secrecy_rate={format_number(ev.min_rate)}")
    out = _pick(args, cfg, "output", "output_path", None)
    if out:
        export([record], out, _pick(args, cfg, "format", "output_format", "csv"))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = _build_params(args, cfg)
    grid = _pick(args, cfg, "beta_grid", "beta_grid", DEFAULT_BETA_GRID)
    schemes = _pick(args, cfg, "scheme", "schemes", SCHEMES)
    channels = sample_channels(params, args.seed)
    sweeps = sweep_all(schemes, grid, channels, params)
    records = [
        ResultRecord(
            trial=0,
            beta=p.beta,
            scheme=s,
            order_id=p.order_id,
            min_secrecy_rate=p.value,
            per_user_rates=p.per_user_rates,
        )
        for s in schemes
        for p in sweeps[s]
    ]
    _emit_records(records, args, cfg)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    params = _build_params(args, cfg)
    config = ExperimentConfig(
        params=params,
        trials=_pick(args, cfg, "trials", "trials", 1000),
        master_seed=_pick(args, cfg, "seed", "master_seed", 0),
        beta_grid=_pick(args, cfg, "beta_grid", "beta_grid", DEFAULT_BETA_GRID),
        schemes=_pick(args, cfg, "scheme", "schemes", SCHEMES),
        output_path=_pick(args, cfg, "output", "output_path", None),
        output_format=_pick(args, cfg, "format", "output_format", "csv"),
    )
    records = run_experiment(config)
    write_csv(records, sys.stdout)
    if config.output_path:
        export(records, config.output_path, config.output_format)
    return 0


def _add_system_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--zeta", type=float, help="residual-interference factor in [0, 1]")
    sub.add_argument("--pt-dbm", type=float, dest="pt_dbm", help="transmit power in dBm")
    sub.add_argument("--noise-dbm", type=float, dest="noise_dbm", help="noise power in dBm")
    sub.add_argument("--field-len", type=float, dest="field_len", help="square field side in meters")
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--output", help="write records to this path")
    sub.add_argument("--format", choices=("csv", "json"), help="output file format")


def build_parser() -> _Parser:
    parser = _Parser(prog="untrusted-noma", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="count total/secure/favourable orders")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--allow-large-n", action="store_true", dest="allow_large_n")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("filter-secure", help="stream secure order ids")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--allow-large-n", action="store_true", dest="allow_large_n")
    p.set_defaults(func=_cmd_filter_secure)

    p = sub.add_parser("policy", help="print the policy order matrix")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=_cmd_policy)

    p = sub.add_parser("eval", help="evaluate one order on one realization")
    p.add_argument("--users", type=int)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--order-id", type=int, dest="order_id", help="defaults to the policy order")
    _add_system_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="beta sweep on one realization")
    p.add_argument("--users", type=int)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--beta-grid", type=_parse_beta_grid, dest="beta_grid")
    p.add_argument("--scheme", type=_parse_schemes, help="comma-separated scheme list")
    _add_system_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="full Monte Carlo experiment")
    p.add_argument("--users", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--beta-grid", type=_parse_beta_grid, dest="beta_grid")
    p.add_argument("--scheme", type=_parse_schemes, help="comma-separated scheme list")
    _add_system_flags(p)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (_CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
