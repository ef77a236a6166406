import json

from factory import LazyAttribute, LazyFunction, Sequence
from factory.django import DjangoModelFactory

from fa_graphs.models import CacheEntry
from fa_graphs.models.cache import cache_key, canonical_json, current_cache_dir, sha256_hex


class CacheEntryFactory(DjangoModelFactory):
    """A report entry for ``Tilde(2)`` at some arity, with a payload that matches its digest."""

    cache_dir = LazyFunction(current_cache_dir)
    kind = "report"
    code_version = "1"
    params = Sequence(
        lambda i: canonical_json(
            {"spec": {"kind": "Tilde", "m": 2}, "g": 1, "n": i + 2, "variant": "full", "hat": False}
        )
    )
    key = LazyAttribute(lambda o: cache_key(o.kind, json.loads(o.params), o.code_version))
    payload = canonical_json({"dimensions": {}})
    digest = LazyAttribute(lambda o: sha256_hex(o.payload))

    class Meta:
        model = CacheEntry
        django_get_or_create = ["cache_dir", "key"]
