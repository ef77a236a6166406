import json
from pathlib import Path

import pytest
from django.contrib.auth import get_user_model

from fa_graphs.hodge import W0Dataset
from fa_graphs.models import CacheEntry
from tests.factories.cache import CacheEntryFactory
from tests.factories.users import UserFactory

User = get_user_model()

DATA_DIR = Path(__file__).parent / "tests" / "data"


@pytest.fixture(autouse=True)
def cache_dir(settings, tmp_path):
    settings.FA_GRAPHS = {**settings.FA_GRAPHS, "CACHE_DIR": str(tmp_path)}


@pytest.fixture
def user():
    return UserFactory()


@pytest.fixture
def w0_payload():
    with open(DATA_DIR / "w0_point.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture
def w0_point(w0_payload):
    return W0Dataset.from_json(w0_payload)


@pytest.fixture
def w0_file():
    return DATA_DIR / "w0_point.json"


@pytest.fixture
def weight17_sheets():
    with open(DATA_DIR / "weight17_sheets.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture
def cache_entry():
    entry = CacheEntryFactory()
    yield entry
    CacheEntry.objects.filter(pk=entry.pk).delete()


@pytest.fixture
def stale_cache_entry():
    entry = CacheEntryFactory(code_version="0")
    yield entry
    CacheEntry.objects.filter(pk=entry.pk).delete()
