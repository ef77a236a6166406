"""
Exact ranks of sparse rational matrices.

Ranks are computed over ``GF(p)`` for a few 62-bit primes drawn from a fixed
seed; the rank over ``QQ`` is at least every modular rank, so two agreeing
primes are accepted, a disagreement pulls in another prime, and running out of
primes falls back to elimination over ``QQ``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm
from typing import Mapping

from loguru import logger
from sympy import GF, QQ
from sympy.ntheory import nextprime
from sympy.polys.matrices import DomainMatrix

from .conf import get_setting
from .exceptions import BudgetExceeded

PRIME_SEED = 20240601


@lru_cache(maxsize=None)
def prime_sequence(count: int) -> tuple[int, ...]:
    """
    The first ``count`` primes of the deterministic sequence.

    >>> all(p.bit_length() == 62 for p in prime_sequence(3))
    True
    """
    rng = random.Random(PRIME_SEED)
    primes: list[int] = []
    while len(primes) < count:
        p = int(nextprime(rng.getrandbits(61) | (1 << 61)))
        if p.bit_length() == 62 and p not in primes:
            primes.append(p)
    return tuple(primes)


@dataclass
class RankResult:
    """
    A rank together with how it was certified.

    Attributes:
        rank (int): The rank over the rationals.
        primes (list[int]): The primes whose ranks were computed.
        modular_ranks (list[int]): The rank modulo each prime.
        exact (bool): Whether the rank came from elimination over ``QQ``.
    """

    rank: int
    primes: list = field(default_factory=list)
    modular_ranks: list = field(default_factory=list)
    exact: bool = False

    def as_json(self) -> dict:
        return {
            "rank": self.rank,
            "primes": list(self.primes),
            "modular_ranks": list(self.modular_ranks),
            "exact": self.exact,
        }

    @classmethod
    def from_json(cls, data: dict) -> RankResult:
        return cls(int(data["rank"]), list(data["primes"]), list(data["modular_ranks"]), bool(data["exact"]))


def _integral_rows(entries: Mapping[tuple[int, int], object]) -> dict[int, dict[int, int]]:
    rows: dict[int, dict[int, object]] = {}
    for (i, j), value in entries.items():
        value = QQ.convert(value)
        if value:
            rows.setdefault(i, {})[j] = value
    out = {}
    for i, row in rows.items():
        scale = lcm(*(int(QQ.denom(v)) for v in row.values()))
        out[i] = {j: int(QQ.numer(v)) * (scale // int(QQ.denom(v))) for j, v in row.items()}
    return out


def _rank_over(rows: dict[int, dict[int, int]], shape: tuple[int, int], domain) -> int:
    packed = {}
    for new_i, i in enumerate(sorted(rows)):
        row = {j: domain.convert(v) for j, v in rows[i].items()}
        row = {j: v for j, v in row.items() if v}
        if row:
            packed[new_i] = row
    if not packed:
        return 0
    return DomainMatrix(packed, (len(packed), shape[1]), domain).rank()


def _check_size(entries: Mapping[tuple[int, int], object]) -> None:
    limit = get_setting("MAX_MATRIX_ENTRIES")
    if len(entries) > limit:
        raise BudgetExceeded("matrix_entries", limit, len(entries))


def sparse_rank(entries: Mapping[tuple[int, int], object], shape: tuple[int, int]) -> RankResult:
    """
    Rank of the matrix with the given nonzero ``(row, column) -> value``
    entries.

    >>> sparse_rank({(0, 0): 1, (1, 1): 1, (2, 2): 1}, (3, 3)).rank
    3
    >>> sparse_rank({}, (4, 2)).rank
    0

    Raises:
        BudgetExceeded: If the matrix has more entries than ``MAX_MATRIX_ENTRIES``.
    """
    _check_size(entries)
    rows = _integral_rows(entries)
    if not rows:
        return RankResult(0)

    wanted = get_setting("PRIMES")
    available = prime_sequence(max(get_setting("MAX_PRIMES"), wanted))
    result = RankResult(0)
    for p in available:
        result.primes.append(p)
        result.modular_ranks.append(_rank_over(rows, shape, GF(p)))
        best = max(result.modular_ranks)
        if result.modular_ranks.count(best) >= wanted:
            result.rank = best
            return result
        if len(result.primes) >= wanted:
            logger.info("Modular ranks disagree ({}), trying another prime", result.modular_ranks)

    logger.warning("Primes exhausted with ranks {}; falling back to exact elimination", result.modular_ranks)
    result.rank = _rank_over(rows, shape, QQ)
    result.exact = True
    return result


def exact_rank(entries: Mapping[tuple[int, int], object], shape: tuple[int, int]) -> int:
    """Rank by elimination over ``QQ`` only."""
    return _rank_over(_integral_rows(entries), shape, QQ)


def rank_params(entries: Mapping[tuple[int, int], object], shape: tuple[int, int]) -> dict:
    """
    The cache parameters of a rank: the shape and the rows scaled to integers,
    which have the same rank as the original rows.

    >>> rank_params({(1, 0): QQ(1, 2), (0, 1): 3}, (2, 2))
    {'shape': [2, 2], 'entries': [[0, 1, 3], [1, 0, 1]]}
    """
    rows = _integral_rows(entries)
    return {
        "shape": list(shape),
        "entries": [[i, j, value] for i in sorted(rows) for j, value in sorted(rows[i].items())],
    }


def cached_rank(
    entries: Mapping[tuple[int, int], object], shape: tuple[int, int], use_cache: bool = False
) -> RankResult:
    """
    :func:`sparse_rank`, read from and written to the persistent cache when
    ``use_cache`` is set.

    Raises:
        BudgetExceeded: If the matrix has more entries than ``MAX_MATRIX_ENTRIES``.
    """
    if not use_cache:
        return sparse_rank(entries, shape)
    from .models import compute_cached

    _check_size(entries)
    params = rank_params(entries, shape)
    return RankResult.from_json(compute_cached("rank", params, lambda: sparse_rank(entries, shape).as_json()))
