import pytest

from fa_graphs.exceptions import BudgetExceeded, InvalidSpec
from fa_graphs.famod import FAModuleSpec, jacobi_trudi_products
from fa_graphs.graphs import (
    STAR,
    DecoratedGraph,
    TermKey,
    all_moves,
    blow_up,
    canonicalize,
    enumerate_basis,
    excess,
    is_star_graph,
    reattach,
    total_excess,
    vanishing_predicate,
)
from fa_graphs.graphs.enumerate import clear_caches, degree_range, generate, module_r, seeds
from fa_graphs.symcore import partitions

OMEGA = (STAR, 1)
EPS = (STAR, 0)


@pytest.fixture
def triangle():
    """Two black vertices joined to each other and by ω-edges to the special vertex."""
    return DecoratedGraph(
        genera=(0, 0),
        edges=((OMEGA, (1, 0)), (OMEGA, (2, 0)), ((1, 0), (2, 0))),
        legs=((1, 0), (2, 0), OMEGA),
        colors=(3,),
    )


@pytest.fixture
def tripod():
    return DecoratedGraph(genera=(), edges=(), legs=(OMEGA, OMEGA, OMEGA), colors=(3,))


@pytest.fixture(autouse=True)
def fresh_generation_caches():
    clear_caches()
    yield
    clear_caches()


def test_relabelled_vertices_share_a_key(triangle):
    swapped = DecoratedGraph(
        genera=(0, 0),
        edges=((OMEGA, (2, 0)), (OMEGA, (1, 0)), ((2, 0), (1, 0))),
        legs=((2, 0), (1, 0), OMEGA),
        colors=(3,),
    )
    key, sign = canonicalize(triangle)
    other, other_sign = canonicalize(swapped)
    assert key == other
    assert sign in (1, -1) and other_sign in (1, -1)
    assert not key.null


def test_key_json(triangle):
    key, _ = canonicalize(triangle)
    assert type(key).from_json(key.as_json()) == key
    assert canonicalize(key.graph())[0] == key


@pytest.mark.parametrize(
    "graph",
    [
        DecoratedGraph((0, 0), (((1, 0), (2, 0)), ((1, 0), (2, 0)), (EPS, (1, 0))), ((2, 0), (2, 0)), ()),
        DecoratedGraph((), ((OMEGA, OMEGA),), (), (2,)),
    ],
    ids=["double-edge", "omega-loop"],
)
def test_null_classes(graph):
    key, _ = canonicalize(graph)
    assert key.null


def test_mixed_loop_is_not_null():
    key, _ = canonicalize(DecoratedGraph((), ((OMEGA, EPS),), (EPS,), (1,)))
    assert not key.null


def test_leg_transposition_flips_sign(tripod):
    permuted, sign = tripod.permute_legs((1, 0, 2))
    assert sign == -1
    assert canonicalize(permuted)[0] == canonicalize(tripod)[0]


def test_blow_up(triangle, tripod):
    components = blow_up(triangle)
    assert [excess(c) for c in components] == [3, 0]
    assert total_excess(triangle) == 3
    assert total_excess(tripod) == 0
    assert is_star_graph(triangle)
    assert canonicalize(reattach(components, triangle.colors))[0] == canonicalize(triangle)[0]


def test_epsilon_component_with_vertex_is_not_star():
    graph = DecoratedGraph(
        genera=(0,),
        edges=((EPS, (1, 0)),),
        legs=((1, 0), (1, 0), OMEGA),
        colors=(1,),
    )
    assert not is_star_graph(graph)


@pytest.mark.parametrize("hat", [False, True])
def test_moves_raise_degree_and_keep_genus(hat):
    graphs = list(seeds((2,), 1, 2))
    graphs += [raw for seed in graphs for raw, _ in all_moves(seed, hat=hat)]
    for seed in graphs:
        for raw, sign in all_moves(seed, hat=hat):
            assert raw.degree == seed.degree + 1
            assert raw.genus == seed.genus
            assert raw.n == seed.n
            assert sign in (1, -1)


@pytest.mark.parametrize(
    "lam,g,n,expected",
    [
        ((2,) * 7, 5, 5, True),
        ((1, 1, 1), 0, 3, False),
        ((1, 1, 1), 0, 1, True),
        ((2,), 0, 1, True),
    ],
)
def test_vanishing_predicate(lam, g, n, expected):
    assert vanishing_predicate(FAModuleSpec.c(lam), g, n) is expected


def test_module_r():
    assert module_r(FAModuleSpec.c([2] * 7)) == 1
    assert module_r(FAModuleSpec.tilde(5)) == 0
    assert module_r(FAModuleSpec.product(1, 1)) == 1


def test_degree_range():
    assert list(degree_range(FAModuleSpec.c([1, 1]), 1, 2)) == [1, 2, 3]


def test_tripod_basis():
    spec = FAModuleSpec.c([1, 1, 1])
    assert len(enumerate_basis(spec, 0, 3, 0)) == 1
    assert enumerate_basis(spec, 0, 3, 1) == []


@pytest.mark.parametrize(
    "kwargs",
    [
        {"variant": "planar"},
        {"variant": "star", "hat": True},
    ],
)
def test_enumerate_rejects(kwargs):
    with pytest.raises(InvalidSpec):
        enumerate_basis(FAModuleSpec.c([1, 1]), 1, 2, 1, **kwargs)


def test_enumerate_rejects_negative_genus():
    with pytest.raises(InvalidSpec):
        enumerate_basis(FAModuleSpec.c([1]), -1, 2, 0)


def test_star_for_tilde_rejected():
    with pytest.raises(InvalidSpec):
        enumerate_basis(FAModuleSpec.tilde(2), 1, 2, 1, variant="star")


@pytest.mark.parametrize("lam,g,n", [((1, 1), 1, 2), ((1, 1, 1), 1, 3)])
def test_star_basis_is_the_star_part_of_the_full_basis(lam, g, n):
    spec = FAModuleSpec.c(lam)
    for degree in degree_range(spec, g, n):
        full = enumerate_basis(spec, g, n, degree)
        star = enumerate_basis(spec, g, n, degree, variant="star")
        assert {k.data for k in star} == {k.data for k in full if is_star_graph(k.graph())}


def test_generation_levels_are_sorted():
    levels = generate((2,), 1, 2)
    for keys in levels.values():
        assert [k.data for k in keys] == sorted(k.data for k in keys)


def test_generator_budget(settings):
    settings.FA_GRAPHS = {**settings.FA_GRAPHS, "MAX_GENERATORS": 3}
    with pytest.raises(BudgetExceeded) as err:
        generate((2,), 2, 2)
    assert err.value.exit_code == 3


def test_two_column_basis_is_signed_by_term():
    spec = FAModuleSpec.c([2, 1])
    terms = jacobi_trudi_products(spec.partition)
    assert [(sign, term.label()) for sign, term in terms] == [(1, "Product(2,1)"), (-1, "Product(3)")]
    basis = enumerate_basis(spec, 1, 3, 1)
    assert basis
    assert all(isinstance(key, TermKey) for key in basis)
    assert basis == [TermKey(sign, term, key) for sign, term in terms for key in enumerate_basis(term, 1, 3, 1)]


def test_two_column_basis_is_empty_where_the_module_vanishes():
    assert enumerate_basis(FAModuleSpec.c([2, 1]), 0, 2, 0) == []


def _bounded_cells(top):
    for size in range(1, 7):
        for g in range(7):
            for n in range(7):
                if 3 * g + n - size <= top:
                    yield size, g, n


@pytest.mark.slow
@pytest.mark.parametrize("size,g,n", list(_bounded_cells(3)))
def test_degree_support(size, g, n):
    for parts in partitions(size):
        levels = generate(tuple(parts), g, n)
        assert all(g <= degree <= 3 * g + n - size for degree in levels), (parts, sorted(levels))
