"""Seeded Monte Carlo harness: secrecy-rate sweeps over the power-allocation
exponent, policy-vs-benchmark gain versus user count, and tabular export.

Every run is a pure function of its configuration: trial seeds are derived
from the master seed with a fixed 64-bit mix, so any single row can be
replayed in isolation and repeated runs are byte-identical.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import orders as ord_mod
from .optimizer import (
    SCHEME_BENCHMARK,
    SCHEME_POLICY_LPSU,
    SCHEME_POLICY_LPWU,
    SCHEMES,
    _ENUM_SCHEMES,
    sweep_all,
)
from .system import SystemParams, sample_channels

__all__ = [
    "DEFAULT_BETA_GRID",
    "ExperimentConfig",
    "ResultRecord",
    "GainRow",
    "derive_trial_seed",
    "run_experiment",
    "gain_vs_users",
    "export",
    "format_number",
]

DEFAULT_BETA_GRID: tuple[float, ...] = tuple(float(b) for b in np.linspace(-1.0, 1.0, 21))

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Stable 64-bit mix of (master_seed, trial_index): the splitmix64 output
    function applied to master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15,
    all arithmetic modulo 2**64. O(1) per trial, safe for parallel trials."""
    z = (master_seed + (trial_index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D49BBB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: physical parameters, trial count, seed, beta grid,
    schemes to evaluate, and an optional output destination."""

    params: SystemParams
    trials: int = 1000
    master_seed: int = 0
    beta_grid: tuple[float, ...] = DEFAULT_BETA_GRID
    schemes: tuple[str, ...] = SCHEMES
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.beta_grid) == 0:
            raise ValueError("beta_grid must be nonempty")
        for b in self.beta_grid:
            if not -1.0 <= b <= 1.0:
                raise ValueError(f"beta grid values must lie in [-1, 1], got {b}")
        if len(self.schemes) == 0:
            raise ValueError("at least one scheme required")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ValueError(f"unknown scheme(s) {unknown}; valid: {list(SCHEMES)}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output_format must be 'csv' or 'json', got {self.output_format!r}")
        if self.params.n_users > ord_mod.ENUMERATION_CAP and any(
            s in _ENUM_SCHEMES for s in self.schemes
        ):
            raise ValueError(
                f"schemes {sorted(_ENUM_SCHEMES & set(self.schemes))} need exhaustive "
                f"enumeration, capped at {ord_mod.ENUMERATION_CAP} users"
            )


@dataclass(frozen=True)
class ResultRecord:
    """One evaluated (trial, beta, scheme) row."""

    trial: int
    beta: float
    scheme: str
    order_id: int | None
    min_secrecy_rate: float
    per_user_rates: tuple[float, ...]


@dataclass(frozen=True)
class GainRow:
    """Policy-vs-benchmark comparison for one user count."""

    n_users: int
    mean_policy_value: float
    mean_benchmark_value: float
    gain_percent: float


def run_experiment(config: ExperimentConfig) -> list[ResultRecord]:
    """Run all trials; rows are ordered by trial, then scheme, then beta.

    Trial t draws its channels from ``derive_trial_seed(master_seed, t)``,
    so results are independent of how trials are scheduled and any row can
    be reproduced from (master_seed, trial) alone.
    """
    records: list[ResultRecord] = []
    for trial in range(config.trials):
        seed = derive_trial_seed(config.master_seed, trial)
        channels = sample_channels(config.params, seed)
        sweeps = sweep_all(config.schemes, config.beta_grid, channels, config.params)
        for scheme in config.schemes:
            for point in sweeps[scheme]:
                records.append(
                    ResultRecord(
                        trial=trial,
                        beta=point.beta,
                        scheme=scheme,
                        order_id=point.order_id,
                        min_secrecy_rate=point.value,
                        per_user_rates=point.per_user_rates,
                    )
                )
    return records


def gain_vs_users(
    config: ExperimentConfig,
    user_counts: Sequence[int],
    aggregate: str = "mean",
) -> list[GainRow]:
    """Mean policy value (better of the two policy matrices at its best grid
    beta, per trial) vs the benchmark average (mean over the beta grid),
    per user count, with the relative gain in percent.

    ``aggregate="median"`` swaps the across-trial statistic; fading makes the
    per-trial values heavy-tailed, so medians can be the more stable summary.
    """
    for n in user_counts:
        if n not in (2, 3, 4):
            raise ValueError(f"user_counts must be within {{2, 3, 4}}, got {n}")
    if aggregate not in ("mean", "median"):
        raise ValueError(f"aggregate must be 'mean' or 'median', got {aggregate!r}")
    stat = np.mean if aggregate == "mean" else np.median
    pol_schemes = (SCHEME_POLICY_LPWU, SCHEME_POLICY_LPSU)
    rows: list[GainRow] = []
    for n in user_counts:
        params = replace(config.params, n_users=n)
        policy_vals = np.empty(config.trials)
        bench_vals = np.empty(config.trials)
        for trial in range(config.trials):
            seed = derive_trial_seed(config.master_seed, trial)
            channels = sample_channels(params, seed)
            sweeps = sweep_all(pol_schemes + (SCHEME_BENCHMARK,), config.beta_grid, channels, params)
            policy_vals[trial] = max(
                point.value for s in pol_schemes for point in sweeps[s]
            )
            bench_vals[trial] = float(
                np.mean([point.value for point in sweeps[SCHEME_BENCHMARK]])
            )
        mean_policy = float(stat(policy_vals))
        mean_bench = float(stat(bench_vals))
        rows.append(
            GainRow(
                n_users=n,
                mean_policy_value=mean_policy,
                mean_benchmark_value=mean_bench,
                gain_percent=100.0 * (mean_policy - mean_bench) / mean_bench,
            )
        )
    return rows


def format_number(x: float) -> str:
    """Canonical 12-significant-digit decimal text used in every export."""
    return format(float(x), ".12g")


_FIXED_HEADER = ("trial", "beta", "scheme", "order_id", "min_secrecy_rate")


def _header(records: Sequence[ResultRecord]) -> list[str]:
    cols = list(_FIXED_HEADER)
    if records:
        cols += [f"user_rate_{i + 1}" for i in range(len(records[0].per_user_rates))]
    return cols


def write_csv(records: Sequence[ResultRecord], stream) -> None:
    """Write records as CSV (LF line endings) to an open text stream."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(_header(records))
    for r in records:
        writer.writerow(
            [
                r.trial,
                format_number(r.beta),
                r.scheme,
                "" if r.order_id is None else r.order_id,
                format_number(r.min_secrecy_rate),
                *(format_number(v) for v in r.per_user_rates),
            ]
        )


def _record_dict(r: ResultRecord) -> dict:
    return {
        "trial": r.trial,
        "beta": float(format_number(r.beta)),
        "scheme": r.scheme,
        "order_id": r.order_id,
        "min_secrecy_rate": float(format_number(r.min_secrecy_rate)),
        "per_user_rates": [float(format_number(v)) for v in r.per_user_rates],
    }


def export(records: Sequence[ResultRecord], path: str | Path, format: str = "csv") -> None:
    """Write records to ``path`` as CSV or a structurally equivalent JSON
    array. Numeric fields carry 12 significant digits in both formats."""
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as stream:
        if format == "csv":
            write_csv(records, stream)
        else:
            json.dump([_record_dict(r) for r in records], stream, indent=2)
            stream.write("\n")
