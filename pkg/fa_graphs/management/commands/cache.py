from __future__ import annotations

import random

from django.core.management.base import BaseCommand, CommandError
from django.db.models import Count
from loguru import logger

from ...conf import get_setting, job_settings
from ...exceptions import CacheCorruption, FAGraphsError
from ...models import cache_entries, stale_entries, verify_entry
from ..base import dumps


class Command(BaseCommand):
    help = "Inspects the persistent cache: stats, verify (recompute a sample) or gc (drop stale versions)."

    def add_arguments(self, parser):
        parser.add_argument("action", choices=("stats", "verify", "gc"))
        parser.add_argument("--sample", type=int, default=20, help="How many entries verify recomputes.")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--cache-dir", help="Cache directory to inspect instead of CACHE_DIR.")

    def handle(self, *args, **options):
        overrides = {"CACHE_DIR": options["cache_dir"]} if options.get("cache_dir") else {}
        try:
            with job_settings(overrides):
                getattr(self, f"do_{options['action']}")(options)
        except FAGraphsError as err:
            raise CommandError(str(err), returncode=err.exit_code) from err

    def do_stats(self, options):
        counts = (
            cache_entries()
            .values("kind", "code_version")
            .annotate(entries=Count("id"))
            .order_by("kind", "code_version")
        )
        payload = {
            "cache_dir": str(get_setting("CACHE_DIR")),
            "code_version": str(get_setting("CODE_VERSION")),
            "entries": cache_entries().count(),
            "by_kind": [dict(row) for row in counts],
            "stale": stale_entries().count(),
        }
        self.stdout.write(dumps(payload), ending="")

    def do_verify(self, options):
        current = list(cache_entries().exclude(pk__in=stale_entries().values("pk")).order_by("key"))
        rng = random.Random(options["seed"])
        sample = rng.sample(current, min(options["sample"], len(current)))
        bad = []
        for entry in sample:
            if not verify_entry(entry):
                logger.warning("Cache entry {} does not match its recomputation", entry.key[:12])
                bad.append(entry.key)
        payload = {"checked": len(sample), "matched": len(sample) - len(bad), "corrupt": bad}
        self.stdout.write(dumps(payload), ending="")
        if bad:
            raise CacheCorruption(f"{len(bad)} of {len(sample)} cache entries differ from recomputation")

    def do_gc(self, options):
        removed, _ = stale_entries().delete()
        logger.info("Removed {} stale cache entries", removed)
        self.stdout.write(dumps({"removed": removed}), ending="")
