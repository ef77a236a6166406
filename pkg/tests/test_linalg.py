from types import SimpleNamespace

import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st
from sympy import QQ

from fa_graphs import tasks
from fa_graphs.exceptions import BudgetExceeded
from fa_graphs.linalg import exact_rank, prime_sequence, sparse_rank

small_matrices = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
    st.integers(-3, 3),
    max_size=12,
)


def test_prime_sequence_is_deterministic():
    prime_sequence.cache_clear()
    first = prime_sequence(3)
    prime_sequence.cache_clear()
    assert prime_sequence(3) == first
    assert len(set(first)) == 3
    assert prime_sequence(2) == first[:2]


def test_rational_entries():
    entries = {(0, 0): QQ(1, 2), (0, 1): QQ(1, 3), (1, 0): 3, (1, 1): 2}
    result = sparse_rank(entries, (2, 2))
    assert result.rank == 1
    assert not result.exact


def test_prime_disagreement_pulls_in_another_prime():
    p = prime_sequence(1)[0]
    result = sparse_rank({(0, 0): p}, (1, 1))
    assert result.rank == 1
    assert result.modular_ranks == [0, 1, 1]
    assert result.as_json()["primes"] == list(prime_sequence(3))


def test_matrix_entry_budget(settings):
    settings.FA_GRAPHS = {**settings.FA_GRAPHS, "MAX_MATRIX_ENTRIES": 2}
    with pytest.raises(BudgetExceeded) as err:
        sparse_rank({(0, 0): 1, (1, 1): 1, (2, 2): 1}, (3, 3))
    assert err.value.what == "matrix_entries"


@given(small_matrices)
@hypothesis_settings(max_examples=30, deadline=None)
def test_modular_rank_matches_exact_rank(entries):
    assert sparse_rank(entries, (5, 5)).rank == exact_rank(entries, (5, 5))


def test_run_parallel_keeps_job_order():
    assert tasks.run_parallel(abs, [-3, 1, -2], workers=1) == [3, 1, 2]
    assert tasks.run_parallel(abs, [-3, 1, -2], workers=2) == [3, 1, 2]


def test_chunked():
    assert tasks.chunked([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]
    assert tasks.chunked([], 3) == []


def test_wall_clock(settings, monkeypatch):
    settings.FA_GRAPHS = {**settings.FA_GRAPHS, "WALL_CLOCK_SECONDS": 10}
    readings = iter([100.0, 105.0, 111.0])
    monkeypatch.setattr(tasks, "time", SimpleNamespace(monotonic=lambda: next(readings)))
    tasks.check_wall_clock()
    with tasks.wall_clock():
        tasks.check_wall_clock()
        with pytest.raises(BudgetExceeded) as err:
            tasks.check_wall_clock()
    assert err.value.limit == 10
    tasks.check_wall_clock()
