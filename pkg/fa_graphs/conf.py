"""
Settings access for the app. Defaults can be overridden with a ``FA_GRAPHS``
dict in the Django settings; only the cache directory and worker count may
additionally come from the environment. Values a job sets for its own run
take precedence over both.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Iterator, Mapping

from django.conf import settings

DEFAULTS: dict[str, Any] = {
    "CACHE_DIR": "fa_graphs_cache",
    "WORKERS": 1,
    "PRIMES": 2,
    "MAX_PRIMES": 3,
    "MAX_GENERATORS": 200_000,
    "MAX_MATRIX_ENTRIES": 5_000_000,
    "WALL_CLOCK_SECONDS": 3600,
    "MAX_SYM_DEGREE": 24,
    "CODE_VERSION": "1",
}

ENV_OVERRIDES = {
    "CACHE_DIR": "FA_GRAPHS_CACHE_DIR",
    "WORKERS": "FA_GRAPHS_WORKERS",
}

_job_values: ContextVar[Mapping[str, Any]] = ContextVar("fa_graphs_job_settings", default={})


@contextmanager
def job_settings(values: Mapping[str, Any]) -> Iterator[None]:
    """
    Applies the settings of one job, from its flags or job file, to the
    enclosed run.

    Raises:
        KeyError: If a name is not a known setting.
    """
    unknown = sorted(set(values) - set(DEFAULTS))
    if unknown:
        raise KeyError(unknown[0])
    token = _job_values.set({**_job_values.get(), **values})
    try:
        yield
    finally:
        _job_values.reset(token)


def get_setting(name: str) -> Any:
    """
    Returns the effective value of a setting.

    Args:
        name (str): Key in ``DEFAULTS``.

    Returns:
        The value set by the running job, else the environment override if one
        is allowed and set, else the value in ``settings.FA_GRAPHS``, else the
        default.

    Raises:
        KeyError: If the name is not a known setting.
    """
    if name not in DEFAULTS:
        raise KeyError(name)
    job = _job_values.get()
    if name in job:
        return job[name]
    env_name = ENV_OVERRIDES.get(name)
    if env_name and os.environ.get(env_name):
        value: Any = os.environ[env_name]
        return int(value) if isinstance(DEFAULTS[name], int) else value
    user = getattr(settings, "FA_GRAPHS", {}) or {}
    return user.get(name, DEFAULTS[name])
