from __future__ import annotations

from ...eulerchar import ECTable, compute_table
from ...serializers import JobSpec
from ..base import FAGraphsCommand, dumps


def render_table(table: ECTable, fmt: str) -> str:
    return table.to_csv() if fmt == "csv" else table.to_text()


class Command(FAGraphsCommand):
    help = "Evaluates equivariant Euler characteristics from the generating functions."

    command = "euler"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_module_arguments(parser)
        parser.add_argument("--weight", type=int, choices=(17, 19))
        parser.add_argument("--assume-conjecture", action="store_true", default=None)
        parser.add_argument("--gmax", type=int)
        parser.add_argument("--nmax", type=int)
        parser.add_argument("--sheet", choices=("all", "first", "second", "total"))

    def run(self, job: JobSpec) -> None:
        if job.weight is not None:
            params = {
                "formula": "weight",
                "k": job.weight,
                "g_max": job.g_max,
                "n_max": job.n_max,
                "assume_conjecture": job.assume_conjecture,
            }
        else:
            params = {"formula": "module", "spec": job.module.as_json(), "g_max": job.g_max, "n_max": job.n_max}
        table = compute_table(params, job.use_cache)
        if job.format == "json":
            self.emit(job, dumps(table.as_json()))
            return
        if not table.sheets or job.sheet == "total":
            self.emit(job, render_table(table, job.format))
            return
        names = ["first", "second", "total"] if job.sheet == "all" else [job.sheet]
        sheets = dict(table.sheets, total=table)
        parts = [f"# {name}\n{render_table(sheets[name], job.format)}" for name in names]
        self.emit(job, "\n".join(parts))
