"""Decoding-order matrices: enumeration, security predicates, and policies.

A decoding order for an N-user cell is an N x N matrix whose m-th column is
the SIC sequence followed by receiver m: entry k of column m names the user
whose signal receiver m decodes at stage k. Users are indexed 1..N from the
strongest channel down.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator

__all__ = [
    "ENUMERATION_CAP",
    "DecodingOrder",
    "enumerate_orders",
    "total_orders",
    "conventional_order",
    "is_secure",
    "count_secure",
    "is_favourable",
    "self_last_transform",
    "policy_order",
    "policy_order_lpwu",
    "policy_order_lpsu",
    "order_id",
    "order_from_id",
    "secure_orders",
    "favourable_orders",
]

# (5!)^5 ~ 2.5e10 matrices makes exhaustive work intractable beyond 4 users.
ENUMERATION_CAP = 4


@dataclass(frozen=True)
class DecodingOrder:
    """Immutable N x N decoding order; column m is receiver m's SIC sequence."""

    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.columns)
        expected = frozenset(range(1, n + 1))
        for col in self.columns:
            if len(col) != n or frozenset(col) != expected:
                raise ValueError(f"column {col} is not a permutation of 1..{n}")

    @property
    def n_users(self) -> int:
        return len(self.columns)

    def stage_of(self, m: int, n: int) -> int:
        """1-based SIC stage at which receiver m decodes user n's signal."""
        return self.columns[m - 1].index(n) + 1


def total_orders(n: int) -> int:
    """Number of distinct decoding orders for n users: (n!)**n."""
    return math.factorial(n) ** n


def _check_cap(n: int, allow_large_n: bool) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > ENUMERATION_CAP and not allow_large_n:
        raise ValueError(
            f"enumeration is capped at {ENUMERATION_CAP} users ((N!)^N grows too fast); "
            f"pass allow_large_n=True (--allow-large-n) to override"
        )


def enumerate_orders(n: int, allow_large_n: bool = False) -> Iterator[DecodingOrder]:
    """Stream every decoding order for n users in ascending order-id.

    Column 1 is the most significant digit of the mixed-radix id, so the
    stream advances the last column fastest. Refuses n > ENUMERATION_CAP
    unless explicitly overridden.
    """
    _check_cap(n, allow_large_n)
    perms = tuple(permutations(range(1, n + 1)))
    for cols in product(perms, repeat=n):
        yield DecodingOrder(columns=cols)


def conventional_order(n: int) -> DecodingOrder:
    """Every receiver decodes weakest-to-strongest: all columns (N, ..., 1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    col = tuple(range(n, 0, -1))
    return DecodingOrder(columns=(col,) * n)


def is_secure(order: DecodingOrder) -> bool:
    """True iff every stronger user decodes each weaker user's signal strictly
    before that weaker user decodes its own (positive secrecy is then
    reachable for everyone with a suitable power allocation)."""
    cols = order.columns
    for n in range(2, order.n_users + 1):
        own_stage = cols[n - 1].index(n)
        for m in range(1, n):
            if cols[m - 1].index(n) >= own_stage:
                return False
    return True


def count_secure(n: int, allow_large_n: bool = False) -> int:
    """Number of secure decoding orders, by exhaustive enumeration."""
    return sum(1 for order in enumerate_orders(n, allow_large_n) if is_secure(order))


def is_favourable(order: DecodingOrder) -> bool:
    """True iff every receiver decodes its own signal at the last SIC stage."""
    return all(col[-1] == m + 1 for m, col in enumerate(order.columns))


def self_last_transform(order: DecodingOrder) -> DecodingOrder:
    """Move each receiver's own entry to the last stage, keeping the rest in
    relative order. The result is always favourable, and no user's secrecy
    rate decreases under it."""
    cols = tuple(
        tuple(u for u in col if u != m + 1) + (m + 1,)
        for m, col in enumerate(order.columns)
    )
    return DecodingOrder(columns=cols)


def policy_order_lpwu(n: int) -> DecodingOrder:
    """Sorting policy for beta < 0: decode others weakest-to-strongest, self last."""
    cols = tuple(
        tuple(u for u in range(n, 0, -1) if u != m) + (m,) for m in range(1, n + 1)
    )
    return DecodingOrder(columns=cols)


def policy_order_lpsu(n: int) -> DecodingOrder:
    """Sorting policy for beta > 0: decode others strongest-to-weakest, self last."""
    cols = tuple(
        tuple(u for u in range(1, n + 1) if u != m) + (m,) for m in range(1, n + 1)
    )
    return DecodingOrder(columns=cols)


def policy_order(n: int, beta: float, zero_beta_branch: str = "lpsu") -> DecodingOrder:
    """Low-complexity policy order for the given power-allocation exponent.

    beta < 0 selects the weakest-to-strongest branch, beta > 0 the
    strongest-to-weakest one. beta == 0 is dispatched to ``zero_beta_branch``
    ("lpsu" by default; the two branches coincide for n <= 2 anyway).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not -1.0 <= beta <= 1.0:
        raise ValueError(f"beta must lie in [-1, 1], got {beta}")
    if zero_beta_branch not in ("lpwu", "lpsu"):
        raise ValueError(f"zero_beta_branch must be 'lpwu' or 'lpsu', got {zero_beta_branch!r}")
    if beta < 0 or (beta == 0 and zero_beta_branch == "lpwu"):
        return policy_order_lpwu(n)
    return policy_order_lpsu(n)


def _perm_rank(perm: tuple[int, ...]) -> int:
    """Lexicographic rank of a permutation of 1..N (factorial number system)."""
    n = len(perm)
    rank = 0
    for i, p in enumerate(perm):
        smaller_right = sum(1 for q in perm[i + 1 :] if q < p)
        rank += smaller_right * math.factorial(n - 1 - i)
    return rank


def _perm_unrank(n: int, rank: int) -> tuple[int, ...]:
    available = list(range(1, n + 1))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(available.pop(idx))
    return tuple(out)


def order_id(order: DecodingOrder) -> int:
    """Mixed-radix rank of an order: base N! per column, column 1 most
    significant, each column ranked lexicographically. Bijective with the
    set of decoding orders for fixed N."""
    n = order.n_users
    base = math.factorial(n)
    oid = 0
    for col in order.columns:
        oid = oid * base + _perm_rank(col)
    return oid


def order_from_id(n: int, oid: int) -> DecodingOrder:
    """Inverse of ``order_id``; raises for ids outside [0, (n!)**n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= oid < total_orders(n):
        raise ValueError(f"order id {oid} out of range [0, {total_orders(n)}) for n={n}")
    base = math.factorial(n)
    ranks = []
    for _ in range(n):
        oid, r = divmod(oid, base)
        ranks.append(r)
    return DecodingOrder(columns=tuple(_perm_unrank(n, r) for r in reversed(ranks)))


@lru_cache(maxsize=8)
def secure_orders(n: int) -> tuple[DecodingOrder, ...]:
    """All secure orders for n users, ascending by order id (n <= cap)."""
    return tuple(order for order in enumerate_orders(n) if is_secure(order))


@lru_cache(maxsize=8)
def favourable_orders(n: int) -> tuple[DecodingOrder, ...]:
    """All favourable orders for n users, ascending by order id (n <= cap)."""
    return tuple(order for order in enumerate_orders(n) if is_favourable(order))
