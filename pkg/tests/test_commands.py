import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from fa_graphs.checks import CheckResult
from fa_graphs.conf import get_setting
from fa_graphs.famod import FAModuleSpec
from fa_graphs.homology import compute_report
from fa_graphs.models import CacheEntry

pytestmark = pytest.mark.django_db(transaction=True)


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def test_cohomology_json():
    payload = json.loads(run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3"))
    assert payload["job"]["module"] == {"kind": "C", "partition": [1, 1, 1]}
    [report] = payload["reports"]
    assert report["decompositions"] == {"0": {"1,1,1": 1}}
    assert "seconds" not in report


def test_cohomology_csv():
    lines = run("cohomology", "--lambda", "1^3", "--g", "0", "--n", "3", "--format", "csv").splitlines()
    assert lines[0] == "g,n,degree,dimension,decomposition"
    assert lines[1].startswith("0,3,0,1,")


def test_cohomology_degree_filter():
    payload = json.loads(run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--degree", "1"))
    assert payload["reports"][0]["dimensions"] == {}


@pytest.mark.parametrize(
    "args",
    [
        ("cohomology", "--g", "1", "--n", "1"),
        ("cohomology", "--lambda", "1", "--tilde", "2", "--g", "1", "--n", "1"),
        ("cohomology", "--lambda", "1", "--g", "x", "--n", "1"),
        ("euler", "--weight", "19", "--gmax", "2"),
        ("hodge", "--weight", "17", "--g", "1"),
    ],
)
def test_invalid_flags_exit_two(args):
    with pytest.raises(CommandError) as err:
        run(*args)
    assert err.value.returncode == 2


def test_budget_exits_three():
    with pytest.raises(CommandError) as err:
        run("cohomology", "--lambda", "1,1", "--g", "2", "--n", "2", "--budget-generators", "2")
    assert err.value.returncode == 3
    assert str(err.value).startswith("Budget ")


def test_output_file(tmp_path):
    target = tmp_path / "out" / "tripod.json"
    assert run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--output", str(target)) == ""
    assert json.loads(target.read_text())["reports"][0]["dimensions"] == {"0": 1}
    assert [p.name for p in target.parent.iterdir()] == ["tripod.json"]


def test_job_file_with_flag_override(tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"lambda": "1,1,1", "g": 0, "n": 3, "format": "csv"}))
    payload = json.loads(run("cohomology", "--job", str(job), "--format", "json"))
    assert payload["job"]["format"] == "json"
    assert payload["reports"][0]["n"] == 3


def test_unreadable_job_file(tmp_path):
    with pytest.raises(CommandError) as err:
        run("cohomology", "--job", str(tmp_path / "missing.json"))
    assert err.value.returncode == 2


def test_table_json():
    payload = json.loads(run("table", "--tilde", "2", "--g", "2", "--n", "0"))
    [cell] = payload["cells"]
    assert (cell["g"], cell["n"]) == (2, 0)
    assert cell["dimensions"] == {"2": 1}
    assert cell["decompositions"] == {"2": {"": 1}}


def test_table_text():
    lines = run("table", "--tilde", "2", "--g", "2", "--n", "0", "--format", "table").splitlines()
    assert lines[0].split(" | ")[:2] == ["g", "n"]
    assert set(lines[1]) <= {"-", "+"}


def test_euler_module():
    payload = json.loads(run("euler", "--tilde", "2", "--gmax", "2", "--nmax", "0"))
    assert payload["entries"]["2,0"] == {"": 1}
    csv_lines = run("euler", "--tilde", "2", "--gmax", "2", "--nmax", "0", "--format", "csv").splitlines()
    assert csv_lines[0] == '"g,n",0'


def test_euler_weight_sheets():
    text = run("euler", "--weight", "17", "--gmax", "3", "--nmax", "0", "--format", "table")
    assert [line for line in text.splitlines() if line.startswith("# ")] == ["# first", "# second", "# total"]
    only = run("euler", "--weight", "17", "--gmax", "3", "--nmax", "0", "--format", "table", "--sheet", "second")
    assert only.startswith("# second")


def test_hodge_vanishing_range():
    payload = json.loads(run("hodge", "--weight", "17", "--g", "9-10", "--n", "0"))
    assert [(r["g"], r["complete"]) for r in payload["reports"]] == [(9, True), (10, True)]


def test_hodge_partial_exits_three(tmp_path):
    empty = tmp_path / "w0.json"
    empty.write_text(json.dumps({"source": "empty", "max_excess": -1, "cells": []}))
    out = StringIO()
    with pytest.raises(CommandError) as err:
        call_command("hodge", "--weight", "17", "--g", "13", "--n", "0", "--w0-data", str(empty), stdout=out)
    assert err.value.returncode == 3
    assert json.loads(out.getvalue())["reports"][0]["complete"] is False


def test_selfcheck_failure(monkeypatch):
    monkeypatch.setattr(
        "fa_graphs.management.commands.selfcheck.run_checks",
        lambda suite: [CheckResult("ok", True), CheckResult("broken", False, "1 != 2")],
    )
    out = StringIO()
    with pytest.raises(CommandError) as err:
        call_command("selfcheck", "--format", "csv", stdout=out)
    assert err.value.returncode == 4
    assert "broken" in str(err.value)
    assert out.getvalue().splitlines()[1:] == ["ok,PASS,", "broken,FAIL,1 != 2"]


def test_selfcheck_passing(monkeypatch):
    monkeypatch.setattr("fa_graphs.management.commands.selfcheck.run_checks", lambda suite: [CheckResult("ok", True)])
    payload = json.loads(run("selfcheck", "--suite", "full"))
    assert payload == {"suite": "full", "results": [{"name": "ok", "passed": True, "detail": ""}]}


@pytest.mark.slow
def test_core_suite_passes():
    payload = json.loads(run("selfcheck"))
    assert all(result["passed"] for result in payload["results"])


def test_cache_stats_and_gc(cache_entry, stale_cache_entry, tmp_path):
    stats = json.loads(run("cache", "stats"))
    assert stats["entries"] == 2
    assert stats["stale"] == 1
    assert stats["cache_dir"] == str(tmp_path)
    assert json.loads(run("cache", "gc")) == {"removed": 1}
    assert list(CacheEntry.objects.all()) == [cache_entry]


def test_cache_verify():
    compute_report(FAModuleSpec.c([1, 1, 1]), 0, 3, use_cache=True)
    total = CacheEntry.objects.count()
    assert json.loads(run("cache", "verify", "--sample", "100")) == {"checked": total, "matched": total, "corrupt": []}
    CacheEntry.objects.update(payload="{}")
    with pytest.raises(CommandError) as err:
        run("cache", "verify", "--sample", "100")
    assert err.value.returncode == 4


def test_use_cache_flag():
    run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--use-cache")
    written = CacheEntry.objects.count()
    run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--use-cache")
    assert CacheEntry.objects.count() == written
    assert CacheEntry.objects.filter(kind=CacheEntry.Kind.REPORT).count() == 1


def test_cache_dir_flag(tmp_path):
    elsewhere = str(tmp_path / "elsewhere")
    run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--use-cache", "--cache-dir", elsewhere)
    assert json.loads(run("cache", "stats"))["entries"] == 0
    stats = json.loads(run("cache", "stats", "--cache-dir", elsewhere))
    assert stats["cache_dir"] == elsewhere
    assert stats["entries"] == CacheEntry.objects.filter(cache_dir=elsewhere).count() > 0


@pytest.mark.parametrize("source", ["flags", "job"])
def test_job_values_beat_the_environment(monkeypatch, tmp_path, source):
    monkeypatch.setenv("FA_GRAPHS_WORKERS", "4")
    monkeypatch.setenv("FA_GRAPHS_CACHE_DIR", str(tmp_path / "env"))
    seen = {}

    def recording_report(spec, g, n, variant, hat, use_cache):
        seen.update(workers=get_setting("WORKERS"), cache_dir=get_setting("CACHE_DIR"))
        return compute_report(spec, g, n, variant, hat)

    monkeypatch.setattr("fa_graphs.management.commands.cohomology.compute_report", recording_report)
    wanted = str(tmp_path / "job")
    if source == "flags":
        run("cohomology", "--lambda", "1,1,1", "--g", "0", "--n", "3", "--workers", "1", "--cache-dir", wanted)
    else:
        job = tmp_path / "job.json"
        job.write_text(json.dumps({"lambda": "1,1,1", "g": 0, "n": 3, "workers": 1, "cache_dir": wanted}))
        run("cohomology", "--job", str(job))
    assert seen == {"workers": 1, "cache_dir": wanted}
    assert get_setting("WORKERS") == 4
