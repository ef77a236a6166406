import pytest

from fa_graphs.conf import job_settings
from fa_graphs.exceptions import ConsistencyError, InvalidSpec
from fa_graphs.famod import FAModuleSpec
from fa_graphs.graphs.enumerate import clear_caches
from fa_graphs.homology import (
    CohomologyReport,
    RationalCochainComplex,
    VirtualComplex,
    build_complex,
    cohomology,
    colored_complex,
    compute_report,
    isotypic_data,
    resolution_complex,
)
from fa_graphs.graphs.enumerate import vanishing_predicate
from fa_graphs.models import canonical_json
from fa_graphs.symcore import Partition

SWAP = [(1, 1), (0, 1)]


@pytest.fixture(autouse=True)
def fresh_generation_caches():
    clear_caches()
    yield
    clear_caches()


@pytest.fixture
def two_point_complex():
    """``a + b -> c`` with S_2 swapping ``a`` and ``b`` and fixing ``c``."""
    return RationalCochainComplex(
        n=2,
        bases={0: ["a", "b"], 1: ["c"]},
        differentials={0: {0: {0: 1}, 1: {0: 1}}},
        actions={0: [SWAP], 1: [[(0, 1)]]},
        label="two-point",
    )


def decompositions(report):
    return {e: dec.as_json() for e, dec in report.decompositions.items()}


def test_isotypic_multiplicities():
    data = isotypic_data(2, [SWAP], 2)
    assert data.multiplicities == {Partition([2]): 1, Partition([1, 1]): 1}
    assert isotypic_data(2, [], 0).multiplicities == {}


def test_hand_built_complex(two_point_complex):
    two_point_complex.check_d_squared()
    two_point_complex.check_equivariance()
    report = cohomology(two_point_complex)
    assert decompositions(report) == {0: {"1,1": 1}}
    assert report.cochain_dimensions == {0: 2, 1: 1}
    assert report.euler.schur_integers() == {Partition([1, 1]): 1}


def test_d_squared_gate():
    cx = RationalCochainComplex(
        n=1,
        bases={0: ["a"], 1: ["b"], 2: ["c"]},
        differentials={0: {0: {0: 1}}, 1: {0: {0: 1}}},
        label="broken",
    )
    with pytest.raises(ConsistencyError):
        cx.check_d_squared()


def test_equivariance_gate():
    cx = RationalCochainComplex(
        n=2,
        bases={0: ["a", "b"], 1: ["c"]},
        differentials={0: {0: {0: 1}}},
        actions={0: [SWAP], 1: [[(0, 1)]]},
        label="lopsided",
    )
    with pytest.raises(ConsistencyError):
        cx.check_equivariance()


def test_tripod():
    report = compute_report(FAModuleSpec.c([1, 1, 1]), 0, 3)
    assert decompositions(report) == {0: {"1,1,1": 1}}
    assert report.provenance["variant"] == "full"


def test_vanishing_cell_is_empty():
    report = compute_report(FAModuleSpec.c([2] * 7), 5, 5)
    assert report.dimensions == {}
    assert report.euler.is_zero()


@pytest.mark.parametrize("m,g,n,degree", [(2, 2, 0, 2), (3, 2, 0, 3)])
def test_tilde_genus_two(m, g, n, degree):
    report = compute_report(FAModuleSpec.tilde(m), g, n)
    assert report.dimensions == {degree: 1}


def test_tilde_builds_a_quotient():
    cx = build_complex(FAModuleSpec.tilde(2), 1, 2)
    cx.check_chain_map()
    assert cx.relations.n == cx.cover.n == 2


def test_tilde_star_rejected():
    with pytest.raises(InvalidSpec):
        build_complex(FAModuleSpec.tilde(2), 1, 2, variant="star")


@pytest.mark.parametrize("m,g,n", [(2, 1, 2), (3, 1, 3)])
def test_resolution_matches_quotient(m, g, n):
    spec = FAModuleSpec.tilde(m)
    quotient = cohomology(build_complex(spec, g, n), spec, g)
    oracle = cohomology(resolution_complex(m, g, n), None, g)
    assert quotient.decompositions == oracle.decompositions


@pytest.mark.parametrize("lam,g,n", [((1, 1), 1, 2), ((1, 1, 1), 1, 3)])
def test_star_matches_full(lam, g, n):
    spec = FAModuleSpec.c(lam)
    full = compute_report(spec, g, n)
    star = compute_report(spec, g, n, variant="star")
    assert full.decompositions == star.decompositions
    assert star.provenance["variant"] == "star"


def test_hat_matches_full():
    spec = FAModuleSpec.c([1, 1])
    assert compute_report(spec, 1, 2, hat=True).decompositions == compute_report(spec, 1, 2).decompositions


def test_multi_column_module_is_a_signed_sum():
    spec = FAModuleSpec.c([2, 1])
    cx = build_complex(spec, 1, 3)
    assert isinstance(cx, VirtualComplex)
    assert [sign for sign, _ in cx.terms] == [1, -1]
    report = cohomology(cx, spec, 1)
    assert all(dec.is_genuine() for dec in report.decompositions.values())
    assert [term["sign"] for term in report.provenance["terms"]] == [1, -1]


def test_report_json():
    report = compute_report(FAModuleSpec.c([1, 1]), 1, 2)
    payload = report.as_json()
    assert "seconds" not in payload
    assert "seconds" in report.as_json(timings=True)
    again = CohomologyReport.from_json(payload)
    assert again.decompositions == report.decompositions
    assert again.euler == report.euler
    assert again.as_json() == payload


def test_unknown_variant():
    with pytest.raises(InvalidSpec):
        build_complex(FAModuleSpec.c([1]), 1, 1, variant="planar")


def test_sign_module_one_leg_past_its_size():
    report = compute_report(FAModuleSpec.c([1, 1, 1]), 0, 4)
    assert decompositions(report) == {0: {"1,1,1,1": 1}, 1: {"3,1": 1}}


def _low_cells(size):
    cells = [(0, size), (0, size + 1), (0, size + 2), (1, size - 2), (1, size - 1), (1, size), (1, size + 1)]
    return [(g, n) for g, n in cells if n >= 0]


def _low_degree_expected(lam, g, n):
    """Degree 0 and 1 cohomology of the low cells, or ``None`` where it is left open for two columns."""
    size = lam.size
    if lam.columns() <= 1:
        expected = {}
        if g == 0 and n in (size, size + 1):
            expected[0] = {Partition([1] * n).label(): 1}
        if g == 0 and n == size + 1 and size >= 2:
            expected[1] = {Partition([3] + [1] * (size - 2)).label(): 1}
        if g == 0 and n == size + 2:
            expected[1] = {Partition([3] + [1] * (size - 1)).label(): 1}
        return expected
    if (g, n) in ((0, size + 1), (0, size + 2), (1, size - 2), (1, size - 1)):
        return None
    return {0: {lam.label(): 1}} if (g, n) == (0, size) else {}


LOW_CELL_PARTITIONS = [
    (1,),
    (1, 1),
    (1, 1, 1),
    (1, 1, 1, 1),
    (1, 1, 1, 1, 1),
    (2,),
    (2, 1),
    (2, 2),
    (2, 1, 1),
    (2, 2, 1),
    (2, 1, 1, 1),
]
LOW_CELL_CASES = [(lam, g, n) for lam in LOW_CELL_PARTITIONS for g, n in _low_cells(sum(lam))]


@pytest.mark.slow
@pytest.mark.parametrize("lam,g,n", LOW_CELL_CASES)
def test_low_degree_cohomology(lam, g, n):
    lam = Partition(lam)
    report = compute_report(FAModuleSpec.c(lam), g, n)
    low = {e: dec for e, dec in decompositions(report).items() if e <= 1}
    expected = _low_degree_expected(lam, g, n)
    if expected is None:
        assert 0 not in low
    else:
        assert low == expected


@pytest.mark.slow
@pytest.mark.parametrize("size", [1, 2, 3, 4, 5, 6])
def test_cohomology_vanishes_below_the_bound(size):
    spec = FAModuleSpec.c([1] * size)
    for g in range(4):
        for n in range(7):
            if not vanishing_predicate(spec, g, n):
                continue
            raw = colored_complex((size,), g, n, label=f"raw {spec.label()}({g},{n})")
            assert cohomology(raw).dimensions == {}, (g, n)


@pytest.mark.parametrize("lam,g,n", [((1, 1, 1), 1, 3), ((2, 1), 1, 3), ((1, 1), 2, 2)])
def test_replay_is_identical_across_worker_counts(lam, g, n):
    spec = FAModuleSpec.c(lam)
    texts = []
    for workers in (1, 4):
        clear_caches()
        with job_settings({"WORKERS": workers}):
            texts.append(canonical_json(compute_report(spec, g, n).as_json()))
    assert texts[0] == texts[1]
