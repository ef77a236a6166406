from __future__ import annotations

from ...eulerchar import render_schur
from ...homology import compute_report
from ...serializers import JobSpec
from ..base import FAGraphsCommand, dumps, render_rows


class Command(FAGraphsCommand):
    help = "Computes the S_n-equivariant cohomology of G_M(g, n) for every requested (g, n)."

    command = "cohomology"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_module_arguments(parser)
        self.add_range_arguments(parser)
        parser.add_argument("--degree", type=int, help="Only report this cohomological degree.")
        parser.add_argument("--variant", choices=("full", "star"))
        parser.add_argument(
            "--hat", action="store_true", default=None, help="Use the complex with positive-genus vertices."
        )

    def run(self, job: JobSpec) -> None:
        reports = []
        for g in job.g:
            for n in job.n:
                report = compute_report(job.module, g, n, job.variant, job.hat, job.use_cache)
                if job.degree is not None:
                    keep = {job.degree} & set(report.decompositions)
                    report.decompositions = {e: report.decompositions[e] for e in keep}
                    report.dimensions = {e: report.dimensions[e] for e in keep}
                reports.append(report)
        if job.format == "json":
            payload = {"job": job.as_json(), "reports": [report.as_json() for report in reports]}
            self.emit(job, dumps(payload))
            return
        rows = [["g", "n", "degree", "dimension", "decomposition"]]
        for report in reports:
            for e in report.degrees():
                dec = report.decompositions[e]
                rows.append(
                    [str(report.g), str(report.n), str(e), str(dec.dimension()), render_schur(dec.to_symfunction())]
                )
        self.emit(job, render_rows(rows, job.format))
