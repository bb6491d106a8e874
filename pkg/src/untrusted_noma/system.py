"""Physical link model for the downlink NOMA cell with untrusted users.

Covers user placement on a square field, Rayleigh-faded path-loss channels,
fractional power allocation, and SINR / rate / secrecy-rate evaluation for a
given SIC decoding order. All functions are pure; randomness enters only
through explicit seeds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .orders import DecodingOrder

__all__ = [
    "SystemParams",
    "ChannelRealization",
    "PowerAllocation",
    "SecrecyEvaluation",
    "dbm_to_mw",
    "sample_channels",
    "draw_gains",
    "power_allocation",
    "sinr",
    "secrecy_rates",
]


def dbm_to_mw(x_dbm: float) -> float:
    """Convert a dBm figure to linear milliwatts."""
    return 10.0 ** (x_dbm / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Physical constants and simulation knobs.

    Defaults follow the standard evaluation setup: 500 m square field,
    unit path-loss constant, exponent 3, residual-interference factor 0.1,
    10 dBm transmit power and -90 dBm noise floor.
    """

    n_users: int
    pt_dbm: float = 10.0
    noise_dbm: float = -90.0
    zeta: float = 0.1
    field_len_m: float = 500.0
    path_loss_const: float = 1.0
    path_loss_exp: float = 3.0
    min_dist_m: float = 1.0

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise ValueError(f"n_users must be >= 1, got {self.n_users}")
        if not 0.0 <= self.zeta <= 1.0:
            raise ValueError(f"zeta must lie in [0, 1], got {self.zeta}")
        if not self.field_len_m > 0.0:
            raise ValueError(f"field_len_m must be positive, got {self.field_len_m}")
        if not self.path_loss_exp > 0.0:
            raise ValueError(f"path_loss_exp must be positive, got {self.path_loss_exp}")
        if not self.path_loss_const > 0.0:
            raise ValueError(f"path_loss_const must be positive, got {self.path_loss_const}")
        if not 0.0 < self.min_dist_m < self.field_len_m / 2.0:
            raise ValueError(
                f"min_dist_m must lie in (0, field_len_m/2), got {self.min_dist_m}"
            )
        if not (math.isfinite(self.pt_dbm) and math.isfinite(self.noise_dbm)):
            raise ValueError("pt_dbm and noise_dbm must be finite")

    @property
    def rho_t(self) -> float:
        """Transmit SNR: linear transmit power over linear noise power."""
        return dbm_to_mw(self.pt_dbm) / dbm_to_mw(self.noise_dbm)


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte Carlo draw: per-user distances and channel power gains.

    Users are relabeled after sampling so that index 1 has the strongest
    gain; ``gains`` is strictly descending.
    """

    distances_m: tuple[float, ...]
    gains: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.distances_m) != len(self.gains):
            raise ValueError("distances_m and gains must have equal length")
        if len(self.gains) < 1:
            raise ValueError("at least one user required")
        if any(g <= 0.0 or not math.isfinite(g) for g in self.gains):
            raise ValueError("gains must be positive and finite")
        if any(d <= 0.0 for d in self.distances_m):
            raise ValueError("distances must be positive")
        if any(a <= b for a, b in zip(self.gains, self.gains[1:])):
            raise ValueError("gains must be strictly descending")

    @property
    def n_users(self) -> int:
        return len(self.gains)


@dataclass(frozen=True)
class PowerAllocation:
    """Fractional power split across users, parameterized by the exponent beta.

    beta < 0 gives less power to weaker users (LPWU), beta > 0 less power to
    stronger users (LPSU), beta = 0 a uniform split.
    """

    alphas: tuple[float, ...]
    beta: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta}")
        if any(a <= 0.0 for a in self.alphas):
            raise ValueError("all power coefficients must be positive")
        if abs(sum(self.alphas) - 1.0) > 1e-12:
            raise ValueError("power coefficients must sum to 1 within 1e-12")

    @property
    def n_users(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class SecrecyEvaluation:
    """Per-user secrecy rates under one decoding order, plus their minimum.

    ``eavesdropper_index`` records, for each user, which other user attains
    the best wiretap rate on its signal (None when there is a single user).
    """

    per_user_rates: tuple[float, ...]
    min_rate: float
    eavesdropper_index: tuple[int | None, ...]


def draw_gains(params: SystemParams, distances_m: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample unsorted channel power gains for users at the given distances.

    The gain of a user at distance d is exponentially distributed with mean
    L_c * d**(-e) (Rayleigh fading over a distance-based path loss).
    """
    mean = params.path_loss_const * np.asarray(distances_m, dtype=float) ** (-params.path_loss_exp)
    return mean * rng.exponential(1.0, size=len(distances_m))


def sample_channels(params: SystemParams, seed: int) -> ChannelRealization:
    """Draw one channel realization; deterministic for a fixed seed.

    Users are placed uniformly on the square field with the base station at
    its center, distances are clamped to at least ``min_dist_m``, and users
    are relabeled so gains sort strictly descending.
    """
    rng = np.random.default_rng(seed)
    half = params.field_len_m / 2.0
    xy = rng.uniform(-half, half, size=(params.n_users, 2))
    dist = np.maximum(np.hypot(xy[:, 0], xy[:, 1]), params.min_dist_m)
    gains = draw_gains(params, dist, rng)
    # exact ties have probability zero; re-draw if the float values collide
    while len(np.unique(gains)) < params.n_users:
        gains = draw_gains(params, dist, rng)
    idx = np.argsort(-gains, kind="stable")
    return ChannelRealization(
        distances_m=tuple(float(d) for d in dist[idx]),
        gains=tuple(float(g) for g in gains[idx]),
    )


def power_allocation(channels: ChannelRealization, beta: float) -> PowerAllocation:
    """Fractional power allocation: alpha_n proportional to gain_n**(-beta)."""
    if not -1.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [-1, 1], got {beta}")
    weights = np.asarray(channels.gains, dtype=float) ** (-beta)
    alphas = weights / weights.sum()
    return PowerAllocation(alphas=tuple(float(a) for a in alphas), beta=beta)


def _interference_coef(order: DecodingOrder, alphas: np.ndarray, zeta: float, n: int, m: int) -> float:
    """Interference weight seen at receiver m while decoding user n's signal.

    Users decoded before n in column m leak only residual power (factor
    zeta); users decoded after n interfere at full power.
    """
    column = order.columns[m - 1]
    stage_n = column.index(n)
    before = sum(alphas[u - 1] for u in column[:stage_n])
    after = sum(alphas[u - 1] for u in column[stage_n + 1 :])
    return zeta * before + after


def sinr(
    order: DecodingOrder,
    channels: ChannelRealization,
    alpha: PowerAllocation,
    params: SystemParams,
    n: int,
    m: int,
) -> float:
    """SINR when user m decodes user n's signal (1-based user indices)."""
    n_users = channels.n_users
    if not (1 <= n <= n_users and 1 <= m <= n_users):
        raise ValueError(f"user indices must lie in 1..{n_users}, got n={n}, m={m}")
    if order.n_users != n_users:
        raise ValueError("order size does not match channel realization")
    alphas = np.asarray(alpha.alphas, dtype=float)
    coef = _interference_coef(order, alphas, params.zeta, n, m)
    g_m = channels.gains[m - 1]
    return alphas[n - 1] * g_m / (coef * g_m + 1.0 / params.rho_t)


def secrecy_rates(
    order: DecodingOrder,
    channels: ChannelRealization,
    alpha: PowerAllocation,
    params: SystemParams,
) -> SecrecyEvaluation:
    """Per-user secrecy rates: own decoding rate minus the best wiretap rate.

    Each rate is clamped at zero; exact zeros are meaningful (they mark users
    whose data the decoding order fails to protect).
    """
    n_users = channels.n_users
    rates: list[float] = []
    eaves: list[int | None] = []
    for n in range(1, n_users + 1):
        own = math.log2(1.0 + sinr(order, channels, alpha, params, n, n))
        best_tap = -math.inf
        best_m: int | None = None
        for m in range(1, n_users + 1):
            if m == n:
                continue
            tap = math.log2(1.0 + sinr(order, channels, alpha, params, n, m))
            if tap > best_tap:
                best_tap, best_m = tap, m
        if best_m is None:  # single user, nothing to eavesdrop
            rates.append(max(0.0, own))
        else:
            rates.append(max(0.0, own - best_tap))
        eaves.append(best_m)
    return SecrecyEvaluation(
        per_user_rates=tuple(rates),
        min_rate=min(rates),
        eavesdropper_index=tuple(eaves),
    )
