import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st
from sympy import QQ

from fa_graphs.eulerchar import (
    ECTable,
    TruncatedLaurentSeries,
    clear_caches,
    ec_general,
    ec_tilde,
    ec_two_column,
    ec_weight,
    euler_of_module,
    log_U,
    mobius,
    render_schur,
    special_functions,
    table_from_params,
)
from fa_graphs.exceptions import InvalidSpec
from fa_graphs.famod import FAModuleSpec
from fa_graphs.homology import compute_report
from fa_graphs.symcore import Partition, SymFunction

ORDER = 6


def trivial(c):
    return SymFunction.schur(Partition()).scale(c)


@pytest.fixture(autouse=True)
def fresh_series_caches():
    clear_caches()
    yield
    clear_caches()


def test_mobius():
    assert [mobius(k) for k in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_log_and_exp_are_inverse():
    series = TruncatedLaurentSeries({0: QQ(1), 1: QQ(1), 3: QQ(-2, 3)}, ORDER)
    assert series.log().exp() == series
    assert series * series.inverse() == TruncatedLaurentSeries.constant(QQ(1), ORDER)


def test_series_errors():
    with pytest.raises(InvalidSpec):
        TruncatedLaurentSeries({}, ORDER).inverse()
    with pytest.raises(InvalidSpec):
        TruncatedLaurentSeries.constant(QQ(2), ORDER).log()
    with pytest.raises(InvalidSpec):
        TruncatedLaurentSeries.constant(QQ(1), ORDER).exp()


@pytest.mark.parametrize("ell", [1, 2, 3, 6])
def test_laurent_inverse(ell):
    sf = special_functions(ell, ORDER)
    assert sf.E.valuation() == -ell
    assert (sf.E * sf.z).truncated(ORDER - ell) == TruncatedLaurentSeries.constant(QQ(1), ORDER)


def test_special_functions_range():
    with pytest.raises(InvalidSpec):
        special_functions(0, ORDER)


@pytest.mark.parametrize("ell", [1, 2, 5])
def test_log_u_vanishes_at_zero(ell):
    assert log_U(QQ(0), ell, ORDER).is_zero()


def test_log_u_needs_nonnegative_valuation():
    with pytest.raises(InvalidSpec):
        log_U(TruncatedLaurentSeries.monomial(-1, QQ(1), ORDER), 1, ORDER)


@pytest.mark.parametrize(
    "lam,g,n",
    [
        ((1,), 1, 1),
        ((1, 1), 1, 2),
        ((2,), 1, 2),
        ((1, 1, 1), 0, 3),
        ((2, 1), 1, 3),
    ],
)
def test_formula_matches_cochains(lam, g, n):
    spec = FAModuleSpec.c(lam)
    assert euler_of_module(spec, g, n).cell(g, n) == compute_report(spec, g, n).euler


@pytest.mark.parametrize("a,value", [(2, 1), (3, -1)])
def test_tilde_genus_two(a, value):
    assert ec_tilde(a, 2, 0).cell(2, 0) == trivial(value)


def test_general_at_two_legs():
    assert ec_general((2,), 0, 2).cell(0, 2) == SymFunction.schur(Partition([1, 1]))


@pytest.mark.parametrize("a", [1, 2, 3])
def test_tilde_matches_its_resolution(a):
    tilde = ec_tilde(a, 2, 2)
    resolved = {key: SymFunction.zero() for key in tilde.entries}
    for j in range(a):
        table = ec_general((j,), 2, 2)
        for key in resolved:
            resolved[key] = resolved[key] + table.cell(*key).scale((-1) ** (a - 1 - j))
    for key, value in resolved.items():
        assert tilde.cell(*key) == value, key


@pytest.mark.parametrize("k,l", [(1, 0), (1, 1), (2, 0)])
def test_two_column_pieri(k, l):
    two_column = ec_two_column(k, l, 2, 2)
    upper = ec_general((k + l, k), 2, 2)
    lower = ec_general((k + l + 1, k - 1), 2, 2)
    for key in two_column.entries:
        assert two_column.cell(*key) == upper.cell(*key) - lower.cell(*key), key


def test_general_rejects_negative_columns():
    with pytest.raises(InvalidSpec):
        ec_general((2, -1), 1, 1)


def test_tripod_cell():
    assert euler_of_module(FAModuleSpec.c([1, 1, 1]), 0, 3).schur_integers(0, 3) == {Partition([1, 1, 1]): 1}


def test_weight_ranges():
    with pytest.raises(InvalidSpec):
        ec_weight(15, 3, 0)
    with pytest.raises(InvalidSpec):
        ec_weight(19, 3, 0)
    with pytest.raises(InvalidSpec):
        ec_tilde(0, 3, 0)
    with pytest.raises(InvalidSpec):
        ec_tilde(3, -1, 0)


def test_conditional_weight_is_labelled():
    table = ec_weight(19, 2, 0, assume_conjecture=True)
    assert table.metadata["conditional"] is True
    assert table.metadata["hypothesis"]
    assert set(table.sheets) == {"first", "second"}


def test_table_from_params():
    table = table_from_params({"formula": "module", "spec": {"kind": "Tilde", "m": 2}, "g_max": 2, "n_max": 0})
    assert table.cell(2, 0) == trivial(1)
    with pytest.raises(InvalidSpec):
        table_from_params({"formula": "graph"})


def test_table_json_and_rendering():
    table = euler_of_module(FAModuleSpec.c([1, 1]), 1, 2)
    again = ECTable.from_json(table.as_json())
    assert again.as_json() == table.as_json()
    assert again.cell(1, 2) == table.cell(1, 2)
    assert table.to_csv().splitlines()[0] == '"g,n",0,1,2'
    assert table.to_text().splitlines()[0].startswith("g,n | 0")


def test_render_schur():
    f = SymFunction("schur", {Partition([2, 1]): 21, Partition([3]): -1})
    assert render_schur(f) == "21 s_{2,1} - s_{3}"


@pytest.mark.slow
@pytest.mark.parametrize("g,value", [(11, 1), (12, -1), (13, 1)])
def test_weight_17_totals(g, value):
    assert ec_weight(17, 13, 0).cell(g, 0) == trivial(value)


@pytest.mark.slow
def test_weight_17_first_sheet():
    sheet = ec_weight(17, 14, 4).sheets["first"]
    assert sheet.cell(13, 0) == trivial(1)
    assert sheet.cell(14, 0) == trivial(-2)
    assert sheet.cell(11, 2) == SymFunction.schur(Partition([1, 1]))
    assert sheet.cell(10, 4) == SymFunction.schur(Partition([2, 1, 1])).scale(-1)


@pytest.mark.slow
def test_weight_17_second_sheet():
    sheet = ec_weight(17, 14, 1).sheets["second"]
    assert sheet.cell(11, 0) == trivial(1)
    assert sheet.cell(12, 0) == trivial(-1)
    assert sheet.cell(13, 1) == SymFunction.schur(Partition([1])).scale(21)
    assert sheet.cell(14, 0) == trivial(-18)


@pytest.mark.slow
def test_weight_17_sheets_match_published_tables(weight17_sheets):
    table = ec_weight(17, 14, 3)
    for sheet, cells in weight17_sheets.items():
        for key, expected in cells.items():
            g, n = (int(x) for x in key.split(","))
            wanted = {Partition.parse(lam): value for lam, value in expected.items()}
            assert table.sheets[sheet].schur_integers(g, n) == wanted, (sheet, key)


@pytest.mark.slow
def test_weight_17_second_sheet_five_legs():
    sheet = ec_weight(17, 8, 5).sheets["second"]
    assert sheet.cell(8, 5).schur_integers() == {
        Partition([1, 1, 1, 1, 1]): 2,
        Partition([2, 1, 1, 1]): 4,
        Partition([2, 2, 1]): 1,
        Partition([3, 1, 1]): 1,
        Partition([3, 2]): 1,
    }


@pytest.mark.slow
def test_module_series_are_the_negated_sheets():
    assert ec_tilde(17, 12, 0).cell(12, 0) == trivial(-1)
    assert ec_two_column(7, 0, 6, 5).cell(6, 5).schur_integers() == {
        Partition([1, 1, 1, 1, 1]): -2,
        Partition([2, 1, 1, 1]): -4,
        Partition([2, 2, 1]): -1,
        Partition([3, 1, 1]): -1,
        Partition([3, 2]): -1,
    }


@hypothesis_settings(max_examples=25, deadline=None)
@given(ell=st.integers(1, 3), x=st.integers(0, 4))
def test_log_u_recurrence(ell, x):
    # U_l(X + 1) / U_l(X) = (-lambda_l)(-E_l + X)
    order = 8
    sf = special_functions(ell, order)
    step = log_U(QQ(x + 1), ell, order) - log_U(QQ(x), ell, order)
    assert step == (sf.unit - sf.lam.scale(QQ(x))).log()


@hypothesis_settings(max_examples=20, deadline=None)
@given(ell=st.integers(1, 3), x=st.integers(0, 3), order=st.integers(2, 6), extra=st.integers(1, 4))
def test_log_u_is_stable_under_longer_truncation(ell, x, order, extra):
    short = log_U(QQ(x), ell, order)
    long = log_U(QQ(x), ell, order + extra)
    assert long.truncated(order).coefficients == short.coefficients


@hypothesis_settings(max_examples=15, deadline=None)
@given(g=st.integers(0, 2), n=st.integers(0, 2), more_g=st.integers(0, 1), more_n=st.integers(0, 2))
def test_cells_are_stable_under_larger_ranges(g, n, more_g, more_n):
    spec = FAModuleSpec.c([1, 1])
    small = euler_of_module(spec, g, n)
    large = euler_of_module(spec, g + more_g, n + more_n)
    for key in small.entries:
        assert large.cell(*key) == small.cell(*key), key
