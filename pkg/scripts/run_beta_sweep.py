#!/usr/bin/env python3
"""Secrecy rate vs power-allocation exponent, averaged over fading trials.

Sweeps the exponent grid for the exhaustive optima over the favourable set L
and the remainder set O, the two sorting-policy orders, and the secure-set
benchmark average, then writes one aggregated CSV row per (scheme, beta).

Usage: python scripts/run_beta_sweep.py --users 3 --trials 1000 --out sweep.csv
"""
import argparse
import csv
from collections import defaultdict

import numpy as np

from untrusted_noma import DEFAULT_BETA_GRID, ExperimentConfig, SystemParams, run_experiment
from untrusted_noma.experiments import format_number
from untrusted_noma.optimizer import SCHEMES


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--users", type=int, default=3)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20250810)
    ap.add_argument("--zeta", type=float, default=0.1)
    ap.add_argument("--out", default="beta_sweep.csv")
    args = ap.parse_args()

    config = ExperimentConfig(
        params=SystemParams(n_users=args.users, zeta=args.zeta),
        trials=args.trials,
        master_seed=args.seed,
        beta_grid=DEFAULT_BETA_GRID,
        schemes=SCHEMES,
    )
    records = run_experiment(config)

    sums: dict[tuple[str, float], float] = defaultdict(float)
    for r in records:
        sums[(r.scheme, r.beta)] += r.min_secrecy_rate

    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["scheme", "beta", "mean_min_secrecy_rate"])
        for scheme in SCHEMES:
            for beta in config.beta_grid:
                mean = sums[(scheme, beta)] / args.trials
                writer.writerow([scheme, format_number(beta), format_number(mean)])

    print(f"wrote {args.out} ({args.trials} trials, {args.users} users)")
    for scheme in SCHEMES:
        curve = np.array([sums[(scheme, b)] / args.trials for b in config.beta_grid])
        peak = config.beta_grid[int(curve.argmax())]
        print(f"{scheme:>12}: peak {curve.max():.4f} b/s/Hz at beta={peak:+.1f}")


if __name__ == "__main__":
    main()
