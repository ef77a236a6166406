from __future__ import annotations

from django.core.management.base import CommandError

from ...checks import run_checks
from ...exceptions import ConsistencyError
from ...serializers import JobSpec
from ..base import FAGraphsCommand, dumps, render_rows


class Command(FAGraphsCommand):
    help = "Runs the consistency checks of a suite; exits nonzero if any fails."

    command = "check"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--suite", choices=("core", "full"))

    def run(self, job: JobSpec) -> None:
        results = run_checks(job.suite)
        if job.format == "json":
            self.emit(job, dumps({"suite": job.suite, "results": [result.as_json() for result in results]}))
        else:
            rows = [["check", "result", "detail"]]
            rows.extend([result.name, "PASS" if result.passed else "FAIL", result.detail] for result in results)
            self.emit(job, render_rows(rows, job.format))
        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError(f"Failed checks: {', '.join(failed)}", returncode=ConsistencyError.exit_code)
