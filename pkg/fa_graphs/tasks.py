"""
Bounded worker pool for independent shards of a computation. Results come back
in job order, so merges are deterministic for any number of workers.
"""

from __future__ import annotations

import multiprocessing
import time
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Callable, Iterator, Optional, Sequence

from loguru import logger

from .conf import get_setting
from .exceptions import BudgetExceeded


def chunked(items: Sequence, size: int) -> list[list]:
    size = max(1, size)
    return [list(items[i : i + size]) for i in range(0, len(items), size)]


def run_parallel(func: Callable[[Any], Any], jobs: Sequence, workers: int | None = None) -> list:
    """
    Maps a picklable module-level function over jobs.

    Args:
        func (Callable): The function to apply.
        jobs (Sequence): Its arguments, one per call.
        workers (int | None): Pool size; defaults to the ``WORKERS`` setting.

    Returns:
        The results in the order of ``jobs``.
    """
    workers = int(workers or get_setting("WORKERS"))
    if workers <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    logger.debug("Dispatching {} jobs to {} workers", len(jobs), workers)
    with multiprocessing.get_context().Pool(processes=workers) as pool:
        return pool.map(func, jobs)


_started: ContextVar[Optional[float]] = ContextVar("fa_graphs_started", default=None)


@contextmanager
def wall_clock() -> Iterator[None]:
    """Starts the ``WALL_CLOCK_SECONDS`` budget for the enclosed run."""
    token = _started.set(time.monotonic())
    try:
        yield
    finally:
        _started.reset(token)


def check_wall_clock() -> None:
    """
    Raises:
        BudgetExceeded: If the enclosing :func:`wall_clock` has run out.
    """
    started = _started.get()
    if started is None:
        return
    limit = int(get_setting("WALL_CLOCK_SECONDS"))
    elapsed = time.monotonic() - started
    if elapsed > limit:
        raise BudgetExceeded("wall_clock_seconds", limit, int(elapsed))
