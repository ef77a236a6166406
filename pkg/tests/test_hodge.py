import json

import pytest

from fa_graphs.exceptions import CoverageError, InvalidSpec
from fa_graphs.hodge import (
    W0Dataset,
    classify_forms,
    cusp_form_count,
    forms_dimension,
    hodge_table,
    hodge_weight,
    low_genus_tilde,
    n0_assembly,
    n0_bound,
    weight_vanishes,
)
from fa_graphs.symcore import IrrDecomposition, Partition


@pytest.mark.parametrize(
    "k,g,label,conditional",
    [
        (11, 1, "Tilde(11)", False),
        (17, 1, "Tilde(17)", False),
        (17, 2, "C(2,2,2,2,2,2,2)", False),
        (19, 2, "C(2,2,2,2,2,1,1,1,1,1,1)", False),
        (13, 1, None, False),
        (16, 2, None, False),
        (17, 3, None, False),
        (19, 3, None, True),
        (20, 5, None, True),
    ],
)
def test_classify_forms(k, g, label, conditional):
    forms = classify_forms(k, g)
    assert (forms.spec.label() if forms.spec else None) == label
    assert forms.conditional is conditional
    assert forms.is_zero is (label is None)


@pytest.mark.parametrize("k,g", [(21, 1), (-1, 1), (17, -2)])
def test_classify_forms_range(k, g):
    with pytest.raises(InvalidSpec):
        classify_forms(k, g)


@pytest.mark.parametrize("k,count", [(9, 0), (10, 0), (11, 1), (13, 0), (15, 1), (17, 1), (19, 1), (21, 1), (23, 2)])
def test_cusp_form_count(k, count):
    assert cusp_form_count(k) == count


def test_genus_one_forms():
    assert forms_dimension(1, 17, 17) == IrrDecomposition.irreducible(Partition([1] * 17))
    assert forms_dimension(1, 17, 18) == IrrDecomposition.irreducible(Partition([2] + [1] * 16))
    assert forms_dimension(1, 17, 16).is_zero()
    assert forms_dimension(1, 13, 20).is_zero()


def test_genus_two_forms():
    dec = forms_dimension(2, 17, 15)
    assert dec == IrrDecomposition(15, {Partition([3] + [2] * 6): 1, Partition([2] * 7 + [1]): 1})
    assert dec.dimension() == 6435
    assert forms_dimension(2, 16, 15).is_zero()
    with pytest.raises(InvalidSpec):
        forms_dimension(2, 15, 15)
    with pytest.raises(InvalidSpec):
        forms_dimension(3, 17, 0)


@pytest.mark.parametrize(
    "k,g,n,expected",
    [
        (17, 11, 0, False),
        (17, 10, 0, True),
        (17, 2, 13, True),
        (17, 2, 14, False),
        (19, 1, 0, False),
    ],
)
def test_weight_vanishes(k, g, n, expected):
    assert weight_vanishes(k, g, n) is expected


@pytest.mark.parametrize("g,expected", [(11, {}), (12, {17: 1}), (13, None), (3, {})])
def test_low_genus_tilde(g, expected):
    assert low_genus_tilde(17, g) == expected


def test_dataset_coverage(w0_point):
    assert w0_point.covers(0, 3)
    assert not w0_point.covers(1, 1)
    assert w0_point.cell(0, 3)[0][1].as_json() == {"3": 1}
    with pytest.raises(CoverageError) as err:
        w0_point.cell(0, 4)
    assert err.value.missing == [(0, 4)]
    assert err.value.exit_code == 2


def test_dataset_require(w0_point):
    w0_point.require(0, 5, 5)
    with pytest.raises(CoverageError) as err:
        w0_point.require(2, 5, 5)
    assert err.value.missing == [(0, 4), (0, 5), (1, 1), (1, 2)]
    w0_point.require(2, 0, 5)


def test_dataset_json(w0_point, w0_payload, w0_file):
    assert W0Dataset.from_json(w0_point.as_json()) == w0_point
    assert W0Dataset.load(w0_file) == w0_point
    assert w0_point.source.startswith("synthetic")


@pytest.mark.parametrize(
    "mangle",
    [
        lambda p: p["cells"][0]["degrees"][0]["decomposition"][0].update(multiplicity=-1),
        lambda p: p["cells"][0].pop("degrees"),
        lambda p: p["cells"][0].update(g="zero"),
    ],
    ids=["negative", "missing-key", "bad-genus"],
)
def test_dataset_rejects(w0_payload, mangle):
    payload = json.loads(json.dumps(w0_payload))
    mangle(payload)
    with pytest.raises(InvalidSpec):
        W0Dataset.from_json(payload)


@pytest.mark.parametrize(
    "lam,g,bound",
    [((1, 1, 1), 2, 0), ((3, 1), 2, 0), ((2, 1, 1), 2, -1), ((2,) * 7, 9, 0), ((2,) * 7, 10, 3)],
)
def test_n0_bound(lam, g, bound):
    assert n0_bound(Partition(lam), g) == bound


@pytest.mark.parametrize(
    "lam,g,expected",
    [
        ((1, 1, 1), 2, {3: 1}),
        ((3, 1), 2, {2: 1}),
        ((2, 1, 1), 2, {}),
        pytest.param((2,) * 7, 9, {13: 1}, marks=pytest.mark.slow),
    ],
)
def test_n0_assembly(w0_point, lam, g, expected):
    assert n0_assembly(Partition(lam), g, w0_point) == expected


def test_n0_assembly_coverage(w0_point):
    with pytest.raises(CoverageError):
        n0_assembly(Partition([2] * 7), 10, w0_point)


def test_vanishing_weight():
    report = hodge_weight(17, 10, 0)
    assert report.complete
    assert report.dimensions == {}
    assert [s.source for s in report.summands] == ["vanishing", "vanishing"]
    assert report.as_json()["hypothesis"] is None


@pytest.mark.parametrize(
    "kwargs",
    [{"k": 15, "g": 11, "n": 0}, {"k": 19, "g": 11, "n": 0}, {"k": 17, "g": -1, "n": 0}],
)
def test_hodge_weight_rejects(kwargs):
    with pytest.raises(InvalidSpec):
        hodge_weight(**kwargs)


def test_coverage_gap_makes_a_partial_report():
    empty = W0Dataset(source="empty", max_excess=-1)
    report = hodge_weight(17, 13, 0, w0=empty)
    assert not report.complete
    assert [s.source for s in report.summands] == ["low_genus", "gap"]
    assert "(0,3)" in report.summands[1].detail
    assert report.dimensions == {34: 1}


def test_hodge_table_shape():
    reports = hodge_table(17, [9, 10], [0, 1])
    assert [(r.g, r.n) for r in reports] == [(9, 0), (9, 1), (10, 0), (10, 1)]
    assert all(r.complete and not r.dimensions for r in reports)


@pytest.mark.slow
def test_first_nonvanishing_genus(w0_point):
    report = hodge_weight(17, 11, 0, w0=w0_point)
    assert report.complete
    assert report.dimensions == {30: 1}
    assert [s.source for s in report.summands] == ["vanishing", "n0_assembly"]
