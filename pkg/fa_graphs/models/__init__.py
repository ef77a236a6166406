from .cache import (  # noqa: F401
    CacheEntry,
    cache_entries,
    cache_key,
    canonical_json,
    compute_cached,
    stale_entries,
    store,
    verify_entry,
)

__all__ = [
    "CacheEntry",
    "cache_entries",
    "cache_key",
    "canonical_json",
    "compute_cached",
    "stale_entries",
    "store",
    "verify_entry",
]
