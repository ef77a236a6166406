"""
Exceptions raised by the computation layers. Each carries the exit status the
management commands use when they surface it.
"""

from __future__ import annotations


class FAGraphsError(Exception):
    """
    Base class for every error raised by this package.

    Attributes:
        exit_code (int): The process exit status a command should use.
    """

    exit_code = 1


class InvalidSpec(FAGraphsError):
    """A module spec, range or flag combination that cannot be run."""

    exit_code = 2


class CoverageError(FAGraphsError):
    """
    A weight-zero dataset does not cover the cells an assembly needs.

    Attributes:
        missing (list[tuple[int, int]]): The (g, n) cells that were queried but absent.
    """

    exit_code = 2

    def __init__(self, missing):
        self.missing = sorted(missing)
        cells = ", ".join(f"({g},{n})" for g, n in self.missing)
        super().__init__(f"Dataset does not cover cells: {cells}")


class BudgetExceeded(FAGraphsError):
    """
    A configured size budget was hit.

    Attributes:
        what (str): Name of the budget.
        limit (int): The configured limit.
        partial (int): How far the computation got before stopping.
    """

    exit_code = 3

    def __init__(self, what: str, limit: int, partial: int):
        self.what = what
        self.limit = limit
        self.partial = partial
        super().__init__(f"Budget {what} exceeded: limit {limit}, reached {partial}")


class ConsistencyError(FAGraphsError):
    """An internal gate failed: d^2 != 0, equivariance, prime disagreement, closure."""

    exit_code = 4


class CacheCorruption(ConsistencyError):
    """A cache entry no longer matches its digest or its recomputation."""
