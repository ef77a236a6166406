from __future__ import annotations

from django.core.management.base import CommandError

from ...exceptions import BudgetExceeded
from ...hodge import W0Dataset, hodge_weight
from ...serializers import JobSpec
from ..base import FAGraphsCommand, dumps, render_rows


class Command(FAGraphsCommand):
    help = "Assembles gr_{k,0} H_c(M_{g,n}) for k = 17 or 19 from graph cohomology."

    command = "hodge"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_range_arguments(parser)
        parser.add_argument("--weight", type=int, choices=(17, 19))
        parser.add_argument("--assume-conjecture", action="store_true", default=None)
        parser.add_argument("--w0-data", help="JSON file with weight-zero cohomology of M_{h,m}.")

    def run(self, job: JobSpec) -> None:
        w0 = W0Dataset.load(job.w0_data) if job.w0_data else None
        reports = [
            hodge_weight(job.weight, g, n, job.assume_conjecture, w0=w0, use_cache=job.use_cache)
            for g in job.g
            for n in job.n
        ]
        if job.format == "json":
            self.emit(job, dumps({"job": job.as_json(), "reports": [report.as_json() for report in reports]}))
        else:
            rows = [["g", "n", "degree", "dimension", "complete", "conditional"]]
            for report in reports:
                for j, d in sorted(report.dimensions.items()) or [("-", 0)]:
                    rows.append(
                        [str(report.g), str(report.n), str(j), str(d), str(report.complete), str(report.conditional)]
                    )
            self.emit(job, render_rows(rows, job.format))
        partial = [(report.g, report.n) for report in reports if not report.complete]
        if partial:
            cells = ", ".join(f"({g},{n})" for g, n in partial)
            raise CommandError(f"Partial reports for {cells}", returncode=BudgetExceeded.exit_code)
