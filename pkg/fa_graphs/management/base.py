"""
Shared plumbing of the management commands: job parsing, budgets, error
translation and output.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator

from django.core.management.base import BaseCommand, CommandError
from loguru import logger

from ..conf import job_settings
from ..exceptions import FAGraphsError, InvalidSpec
from ..serializers import JobSpec, JobSpecSerializer
from ..tasks import wall_clock

BUDGET_SETTINGS = {
    "max_generators": "MAX_GENERATORS",
    "max_matrix_entries": "MAX_MATRIX_ENTRIES",
    "wall_clock_seconds": "WALL_CLOCK_SECONDS",
    "primes": "PRIMES",
}

# flag name -> key in the job payload
JOB_FLAGS = (
    "partition",
    "tilde",
    "product",
    "g",
    "n",
    "degree",
    "variant",
    "hat",
    "weight",
    "assume_conjecture",
    "gmax",
    "nmax",
    "format",
    "workers",
    "output",
    "w0_data",
    "suite",
    "use_cache",
    "cache_dir",
    "sheet",
)


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    """Writes to a temporary file next to ``path`` and renames it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as out:
            out.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


class FAGraphsCommand(BaseCommand):
    """
    Base class of the job-running commands. Subclasses set ``command`` and
    implement :meth:`run`.
    """

    command = ""
    requires_migrations_checks = True

    def add_arguments(self, parser):
        parser.add_argument("--job", help="JSON job file; flags given alongside override it.")
        parser.add_argument("--format", choices=("json", "csv", "table"))
        parser.add_argument("--output", help="Write here instead of stdout.")
        parser.add_argument("--workers", type=int)
        parser.add_argument("--budget-generators", type=int, dest="max_generators")
        parser.add_argument("--budget-matrix-entries", type=int, dest="max_matrix_entries")
        parser.add_argument("--budget-seconds", type=int, dest="wall_clock_seconds")
        parser.add_argument("--primes", type=int)
        parser.add_argument("--use-cache", action="store_true", default=None)
        parser.add_argument("--cache-dir", help="Cache directory; overrides CACHE_DIR and FA_GRAPHS_CACHE_DIR.")

    def add_module_arguments(self, parser):
        parser.add_argument("--lambda", dest="partition", help="Partition, e.g. 2,2,1 or 2^7.")
        parser.add_argument("--tilde", type=int, help="m for the quotient module Tilde(m).")
        parser.add_argument("--product", help="Column lengths of a product module, e.g. 7,7.")

    def add_range_arguments(self, parser):
        parser.add_argument("--g", help="Genus: a value, a range like 0-3, or a list.")
        parser.add_argument("--n", help="Arity: a value, a range like 0-3, or a list.")

    def job_from_options(self, options: dict) -> JobSpec:
        """
        Raises:
            InvalidSpec: If the job does not validate.
        """
        payload: dict[str, Any] = {}
        if options.get("job"):
            try:
                with open(options["job"], encoding="utf-8") as handle:
                    payload = json.load(handle)
            except (OSError, ValueError) as err:
                raise InvalidSpec(f"Cannot read job file {options['job']}: {err}") from err
        payload["command"] = self.command
        for key in JOB_FLAGS:
            if options.get(key) is not None:
                payload[key] = options[key]
        budget = dict(payload.get("budget", {}))
        for key in BUDGET_SETTINGS:
            if options.get(key) is not None:
                budget[key] = options[key]
        if budget:
            payload["budget"] = budget
        serializer = JobSpecSerializer(data=payload)
        if not serializer.is_valid():
            raise InvalidSpec(f"Invalid job: {dumps(serializer.errors).strip()}")
        return serializer.to_job()

    @contextmanager
    def budgets(self, job: JobSpec) -> Iterator[None]:
        values = {name: job.budgets[key] for key, name in BUDGET_SETTINGS.items() if key in job.budgets}
        if job.workers:
            values["WORKERS"] = job.workers
        if job.cache_dir:
            values["CACHE_DIR"] = job.cache_dir
        with job_settings(values), wall_clock():
            yield

    def emit(self, job: JobSpec, text: str) -> None:
        if job.output:
            write_atomic(job.output, text)
            logger.info("Wrote {}", job.output)
        else:
            self.stdout.write(text, ending="")

    def handle(self, *args, **options):
        try:
            job = self.job_from_options(options)
            with self.budgets(job):
                self.run(job)
        except FAGraphsError as err:
            raise CommandError(str(err), returncode=err.exit_code) from err

    def run(self, job: JobSpec) -> None:  # pragma: nocover
        raise NotImplementedError


def render_rows(rows: list[list[str]], fmt: str) -> str:
    """Renders a header row plus body rows as CSV or as an aligned text table."""
    if fmt == "csv":
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(rows)
        return buffer.getvalue()
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = [" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "-+-".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"
