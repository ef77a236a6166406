import pytest

from fa_graphs.conf import DEFAULTS, get_setting, job_settings


def test_defaults(settings):
    settings.FA_GRAPHS = {}
    assert get_setting("PRIMES") == DEFAULTS["PRIMES"]
    with pytest.raises(KeyError):
        get_setting("NOT_A_SETTING")


@pytest.mark.parametrize(
    "user,env,job,expected",
    [
        ({}, None, {}, 1),
        ({"WORKERS": 2}, None, {}, 2),
        ({"WORKERS": 2}, "3", {}, 3),
        ({"WORKERS": 2}, "3", {"WORKERS": 5}, 5),
        ({}, None, {"WORKERS": 5}, 5),
    ],
)
def test_workers_precedence(settings, monkeypatch, user, env, job, expected):
    settings.FA_GRAPHS = user
    if env is None:
        monkeypatch.delenv("FA_GRAPHS_WORKERS", raising=False)
    else:
        monkeypatch.setenv("FA_GRAPHS_WORKERS", env)
    with job_settings(job):
        assert get_setting("WORKERS") == expected


def test_job_settings_are_scoped(settings, monkeypatch, tmp_path):
    monkeypatch.setenv("FA_GRAPHS_CACHE_DIR", str(tmp_path / "env"))
    with job_settings({"CACHE_DIR": str(tmp_path / "job")}):
        assert get_setting("CACHE_DIR") == str(tmp_path / "job")
        with job_settings({"WORKERS": 3}):
            assert get_setting("CACHE_DIR") == str(tmp_path / "job")
            assert get_setting("WORKERS") == 3
    assert get_setting("CACHE_DIR") == str(tmp_path / "env")


def test_only_some_settings_come_from_the_environment(settings, monkeypatch):
    settings.FA_GRAPHS = {"PRIMES": 2}
    monkeypatch.setenv("FA_GRAPHS_PRIMES", "5")
    assert get_setting("PRIMES") == 2


def test_job_settings_reject_unknown_names():
    with pytest.raises(KeyError):
        with job_settings({"NOT_A_SETTING": 1}):
            pass  # pragma: nocover
