from __future__ import annotations

import hashlib
import json
from typing import Any, Callable

import rules
from django.db import IntegrityError, models, transaction
from django.utils.translation import gettext_lazy as _
from loguru import logger
from model_utils.models import TimeStampedModel
from rules.contrib.models import RulesModel

from ..conf import get_setting
from ..exceptions import CacheCorruption, InvalidSpec
from ..rules import is_stale_entry, is_valid_user


def canonical_json(value: Any) -> str:
    """
    Serializes with sorted keys and no whitespace so equal values give equal text.

    >>> canonical_json({"b": [1, 2], "a": "x"})
    '{"a":"x","b":[1,2]}'
    """
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def cache_key(kind: str, params: dict, code_version: str | None = None) -> str:
    """The content key of a computation: a digest of its kind, parameters and code version."""
    version = code_version if code_version is not None else str(get_setting("CODE_VERSION"))
    return sha256_hex(canonical_json({"kind": kind, "params": params, "code_version": version}))


class CacheEntry(TimeStampedModel, RulesModel):
    """
    One stored computation result. Entries are written once and never changed.

    Attributes:
        cache_dir (str): The ``CACHE_DIR`` setting at write time; each directory is a separate cache.
        key (str): sha256 of kind, parameters and code version, unique within a cache directory.
        kind (str): Which computation produced the payload.
        code_version (str): The ``CODE_VERSION`` setting at write time.
        params (str): Canonical JSON of the parameters.
        payload (str): Canonical JSON of the result.
        digest (str): sha256 of ``payload``.
    """

    class Kind(models.TextChoices):
        BASIS = "basis", _("Graph basis")
        RANK = "rank", _("Matrix rank")
        REPORT = "report", _("Cohomology report")
        TABLE = "table", _("Euler characteristic table")

    cache_dir = models.CharField(max_length=255, db_index=True, help_text=_("Cache directory the entry belongs to."))
    key = models.CharField(max_length=64, help_text=_("Content key of the computation."))
    kind = models.CharField(max_length=16, choices=Kind.choices, help_text=_("Computation kind."))
    code_version = models.CharField(
        max_length=32, db_index=True, help_text=_("Code version the entry was computed with.")
    )
    params = models.TextField(help_text=_("Canonical JSON of the parameters."))
    payload = models.TextField(help_text=_("Canonical JSON of the result."))
    digest = models.CharField(max_length=64, help_text=_("sha256 of the payload."))

    @property
    def is_stale(self) -> bool:
        return self.code_version != str(get_setting("CODE_VERSION"))

    @property
    def intact(self) -> bool:
        """Whether the stored payload still matches its digest."""
        return sha256_hex(self.payload) == self.digest

    def load(self) -> Any:
        """
        Returns the decoded payload.

        Raises:
            CacheCorruption: If the payload no longer matches its digest.
        """
        if not self.intact:
            raise CacheCorruption(f"Cache entry {self.key[:12]} fails its digest")
        return json.loads(self.payload)


    def recompute(self) -> Any:
        """Runs the computation again from the stored parameters, bypassing the cache."""
        params = json.loads(self.params)
        if self.kind == self.Kind.BASIS:
            from ..graphs.enumerate import generate, levels_as_json

            levels = generate.__wrapped__(
                tuple(params["colors"]), params["g"], params["n"], params["hat"], int(get_setting("WORKERS"))
            )
            return levels_as_json(levels)
        if self.kind == self.Kind.RANK:
            from ..linalg import sparse_rank

            entries = {(i, j): value for i, j, value in params["entries"]}
            return sparse_rank(entries, tuple(params["shape"])).as_json()
        if self.kind == self.Kind.REPORT:
            from ..famod import FAModuleSpec
            from ..homology import compute_report

            report = compute_report(
                FAModuleSpec.from_json(params["spec"]),
                params["g"],
                params["n"],
                variant=params["variant"],
                hat=params["hat"],
            )
            return report.as_json()
        if self.kind == self.Kind.TABLE:
            from ..eulerchar import table_from_params

            return table_from_params(params).as_json()
        raise InvalidSpec(f"Unknown cache kind {self.kind}")  # pragma: nocover

    def __str__(self):  # pragma: nocover
        return f"{self.kind}:{self.key[:12]} (v{self.code_version})"

    class Meta:
        constraints = [models.UniqueConstraint(fields=["cache_dir", "key"], name="fa_graphs_unique_key_per_dir")]
        rules_permissions = {
            "add": is_valid_user,
            "read": is_valid_user,
            "change": rules.always_deny,
            "delete": is_stale_entry,
            "list": is_valid_user,
        }


def current_cache_dir() -> str:
    return str(get_setting("CACHE_DIR"))


def cache_entries():
    """Entries of the current cache directory."""
    return CacheEntry.objects.filter(cache_dir=current_cache_dir())


def store(kind: str, params: dict, payload: Any) -> CacheEntry:
    """
    Writes an entry atomically into the current cache directory.

    Raises:
        CacheCorruption: If an entry with the same key holds a different payload.
    """
    key = cache_key(kind, params)
    text = canonical_json(payload)
    digest = sha256_hex(text)
    cache_dir = current_cache_dir()
    try:
        with transaction.atomic():
            entry, created = CacheEntry.objects.get_or_create(
                cache_dir=cache_dir,
                key=key,
                defaults={
                    "kind": kind,
                    "code_version": str(get_setting("CODE_VERSION")),
                    "params": canonical_json(params),
                    "payload": text,
                    "digest": digest,
                },
            )
    except IntegrityError:  # pragma: nocover
        entry, created = CacheEntry.objects.get(cache_dir=cache_dir, key=key), False
    if not created and entry.digest != digest:
        raise CacheCorruption(f"Cache entry {key[:12]} already holds a different {kind} payload")
    return entry


def compute_cached(kind: str, params: dict, fn: Callable[[], Any]) -> Any:
    """
    Returns the stored payload for ``(kind, params)`` or computes, stores and
    returns it. The returned value is always the decoded stored JSON, so a hit
    and a miss give identical results.
    """
    key = cache_key(kind, params)
    entry = cache_entries().filter(key=key).first()
    if entry is not None:
        logger.info("Cache hit for {} {}", kind, key[:12])
        return entry.load()
    logger.info("Cache miss for {} {}", kind, key[:12])
    return store(kind, params, fn()).load()


def verify_entry(entry: CacheEntry) -> bool:
    """Whether the entry is intact and its recomputation serializes to the same bytes."""
    if not entry.intact:
        return False
    return sha256_hex(canonical_json(entry.recompute())) == entry.digest


def stale_entries():
    return cache_entries().exclude(code_version=str(get_setting("CODE_VERSION")))
