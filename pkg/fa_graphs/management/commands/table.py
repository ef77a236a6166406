from __future__ import annotations

from ...eulerchar import render_schur
from ...homology import compute_report
from ...serializers import JobSpec
from ..base import FAGraphsCommand, dumps, render_rows


class Command(FAGraphsCommand):
    help = "Tabulates cohomology dimensions of G_M(g, n) over a grid, one row per (g, n)."

    command = "table"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_module_arguments(parser)
        self.add_range_arguments(parser)
        parser.add_argument("--variant", choices=("full", "star"))

    def run(self, job: JobSpec) -> None:
        reports = [compute_report(job.module, g, n, job.variant, False, job.use_cache) for g in job.g for n in job.n]
        if job.format == "json":
            cells = [
                {
                    "g": report.g,
                    "n": report.n,
                    "dimensions": {str(e): d for e, d in sorted(report.dimensions.items())},
                    "decompositions": {str(e): dec.as_json() for e, dec in sorted(report.decompositions.items())},
                }
                for report in reports
            ]
            self.emit(job, dumps({"job": job.as_json(), "cells": cells}))
            return
        degrees = sorted({e for report in reports for e in report.degrees()})
        rows = [["g", "n"] + [f"H^{e}" for e in degrees]]
        for report in reports:
            rows.append(
                [str(report.g), str(report.n)]
                + [render_schur(report.decomposition(e).to_symfunction()) for e in degrees]
            )
        self.emit(job, render_rows(rows, job.format))
