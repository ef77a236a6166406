"""
Generators of the graph complexes up to isomorphism.

Every generator of ``G`` with a black vertex contracts, along an edge between
that vertex and the special vertex, to a generator with one black vertex less.
So the whole set is the closure of the one-vertex graphs (special vertex with
loops and legs) under splits of the special vertex, level by level in the
number of edges. Null classes are kept as intermediates of the closure and
dropped only from the returned bases.

For ``Ĝ`` the seeds also carry positive-genus satellites joined only to the
special vertex, and the closure uses every move of the differential.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from loguru import logger
from sympy.utilities.iterables import multiset_permutations

from ..conf import get_setting
from ..exceptions import BudgetExceeded, InvalidSpec
from ..famod import FAModuleSpec, c_arity, jacobi_trudi_products
from ..symcore import r_lambda
from ..tasks import check_wall_clock, chunked, run_parallel
from .canonical import STAR, DecoratedGraph, GraphKey, canonicalize
from .moves import all_moves, black_splits, star_splits

VARIANTS = ("full", "star")


def module_r(spec: FAModuleSpec) -> int:
    """
    The ``r`` entering the vanishing bound: ``r_lambda`` for ``C(lambda)``,
    zero for ``Tilde(m)``, and the largest ``r_mu`` over the constituents of the
    top arity for a product module.
    """
    if spec.kind == "C":
        return r_lambda(spec.partition)
    if spec.kind == "Tilde":
        return 0
    return max((r_lambda(mu) for mu in c_arity(spec, spec.weight).terms), default=0)


def vanishing_predicate(spec: FAModuleSpec, g: int, n: int) -> bool:
    """
    True when the complex is known to be zero: ``3g + 2n + min(r, g) < 2N``.

    >>> vanishing_predicate(FAModuleSpec.c([2] * 7), 5, 5)
    True
    >>> vanishing_predicate(FAModuleSpec.c([1, 1, 1]), 0, 3)
    False
    """
    return 3 * g + 2 * n + min(module_r(spec), g) < 2 * spec.weight


def degree_range(spec: FAModuleSpec, g: int, n: int) -> range:
    """Cohomological degrees that can carry generators: ``g <= e <= 3g + n - N``."""
    return range(g, 3 * g + n - spec.weight + 1)


def _star_slots(genera, edges, legs):
    """Positions of the unmarked special-vertex ends of a template."""
    slots = []
    for i, (a, b) in enumerate(edges):
        if a[0] == STAR:
            slots.append((0, i, 0))
        if b[0] == STAR:
            slots.append((0, i, 1))
    for j, end in enumerate(legs):
        if end[0] == STAR:
            slots.append((1, j, 0))
    return slots


def _marked(genera, edges, legs, colors: tuple):
    """All ways of marking the special-vertex ends of a template with the decoration."""
    slots = _star_slots(genera, edges, legs)
    total = sum(colors)
    if len(slots) < total:
        return
    marks = [0] * (len(slots) - total)
    for c, count in enumerate(colors, start=1):
        marks.extend([c] * count)
    for assignment in multiset_permutations(marks):
        by_slot = dict(zip(slots, assignment))
        new_edges = tuple(
            tuple((STAR, by_slot[(0, i, side)]) if end[0] == STAR else end for side, end in enumerate(pair))
            for i, pair in enumerate(edges)
        )
        new_legs = tuple((STAR, by_slot[(1, j, 0)]) if end[0] == STAR else end for j, end in enumerate(legs))
        yield DecoratedGraph(tuple(genera), new_edges, new_legs, colors)


def seeds(colors: tuple, g: int, n: int) -> list[DecoratedGraph]:
    """One-vertex graphs: ``g`` loops and ``n`` legs at the special vertex."""
    edges = tuple(((STAR, 0), (STAR, 0)) for _ in range(g))
    legs = tuple((STAR, 0) for _ in range(n))
    return list(_marked((), edges, legs, colors))


def _satellite_shapes(budget: int):
    """Nondecreasing lists of ``(genus, edge count)`` with ``sum(genus + edges - 1) <= budget``."""

    def grow(start, remaining, acc):
        yield list(acc)
        options = [(h, a) for h in range(1, remaining + 1) for a in range(1, remaining - h + 2)]
        for shape in options:
            if shape < start:
                continue
            cost = shape[0] + shape[1] - 1
            if cost <= remaining:
                yield from grow(shape, remaining - cost, acc + [shape])

    yield from grow((0, 0), budget, [])


def hat_seeds(colors: tuple, g: int, n: int) -> list[DecoratedGraph]:
    """
    Seeds of the closure for ``Ĝ``: the special vertex with loops, legs and
    satellites of positive genus attached to it by edges only.
    """
    out = []
    for shapes in _satellite_shapes(g):
        loops = g - sum(h + a - 1 for h, a in shapes)
        genera = tuple(h for h, _ in shapes)
        edges = [((STAR, 0), (STAR, 0)) for _ in range(loops)]
        for v, (_, a) in enumerate(shapes, start=1):
            edges.extend(((STAR, 0), (v, 0)) for _ in range(a))
        for places in product(range(len(shapes) + 1), repeat=n):
            legs = tuple((place, 0) for place in places)
            out.extend(_marked(genera, tuple(edges), legs, colors))
    return out


CLOSURE_MOVES = {
    "star": star_splits,
    "hat": lambda graph: all_moves(graph, hat=True),
    "black": black_splits,
}


def _expand(job) -> list[tuple]:
    data_list, kind = job
    found = set()
    for data in data_list:
        graph = GraphKey(data).graph()
        for raw, _ in CLOSURE_MOVES[kind](graph):
            key, _ = canonicalize(raw)
            found.add((key.data, key.null))
    return sorted(found)


def close(initial, kind: str, workers: int = 1) -> dict[int, tuple[GraphKey, ...]]:
    """
    Closes a set of graphs under one family of moves, level by level in the
    number of edges. Every class met is kept, null classes flagged.

    Args:
        initial (Iterable[DecoratedGraph]): The seeds.
        kind (str): ``"star"``, ``"hat"`` or ``"black"``, see ``CLOSURE_MOVES``.
        workers (int): Pool size for expanding a level.

    Raises:
        BudgetExceeded: If more than ``MAX_GENERATORS`` classes are produced.
    """
    limit = get_setting("MAX_GENERATORS")
    pending: dict[int, dict[tuple, GraphKey]] = {}
    for graph in initial:
        key, _ = canonicalize(graph)
        pending.setdefault(graph.degree, {})[key.data] = key

    levels: dict[int, tuple[GraphKey, ...]] = {}
    total = 0
    degree = min(pending, default=0)
    while pending:
        check_wall_clock()
        current = pending.pop(degree, {})
        if current:
            ordered = tuple(current[data] for data in sorted(current))
            levels[degree] = ordered
            total += len(ordered)
            if total > limit:
                raise BudgetExceeded("generators", limit, total)
            jobs = [(chunk, kind) for chunk in chunked([k.data for k in ordered], 256)]
            for found in run_parallel(_expand, jobs, workers):
                nxt = pending.setdefault(degree + 1, {})
                for data, null in found:
                    nxt.setdefault(data, GraphKey(data, null=null))
            if not pending.get(degree + 1):
                pending.pop(degree + 1, None)
        degree += 1
    return levels


@lru_cache(maxsize=64)
def generate(colors: tuple, g: int, n: int, hat: bool = False, workers: int = 1) -> dict[int, tuple[GraphKey, ...]]:
    """
    All isomorphism classes of generators with the given decoration, genus and
    arity, grouped by degree and sorted by canonical key. Null classes are
    included and flagged.
    """
    started = time.monotonic()
    if hat:
        levels = close(hat_seeds(colors, g, n), "hat", workers)
    else:
        levels = close(seeds(colors, g, n), "star", workers)
    logger.debug(
        "Generated {} classes for colors={} g={} n={} hat={} in {:.2f}s",
        sum(len(keys) for keys in levels.values()),
        colors,
        g,
        n,
        hat,
        time.monotonic() - started,
    )
    return levels


def levels_as_json(levels: dict[int, tuple[GraphKey, ...]]) -> dict[str, list]:
    """The cache payload of :func:`generate`: per degree, each key with its null flag and automorphism count."""
    return {
        str(degree): [[key.as_json(), key.null, key.automorphisms] for key in keys]
        for degree, keys in sorted(levels.items())
    }


def levels_from_json(payload: dict[str, list]) -> dict[int, tuple[GraphKey, ...]]:
    return {
        int(degree): tuple(
            GraphKey(GraphKey.from_json(data).data, null=bool(null), automorphisms=int(automorphisms))
            for data, null, automorphisms in keys
        )
        for degree, keys in payload.items()
    }


def cached_levels(
    colors: tuple, g: int, n: int, hat: bool = False, use_cache: bool = False
) -> dict[int, tuple[GraphKey, ...]]:
    """
    :func:`generate` with the ``WORKERS`` setting, read from and written to the
    persistent cache when ``use_cache`` is set.
    """
    workers = int(get_setting("WORKERS"))
    if not use_cache:
        return generate(colors, g, n, hat, workers)
    from ..models import compute_cached

    params = {"colors": list(colors), "g": g, "n": n, "hat": hat}
    return levels_from_json(
        compute_cached("basis", params, lambda: levels_as_json(generate(colors, g, n, hat, workers)))
    )


@dataclass(frozen=True)
class TermKey:
    """
    A generator of one term of a signed sum of complexes.

    Attributes:
        sign (int): The sign of the term.
        term (FAModuleSpec): The module of the term.
        key (GraphKey): The generator of that term's complex.
    """

    sign: int
    term: FAModuleSpec
    key: GraphKey


def _colors_for(spec: FAModuleSpec) -> tuple:
    if spec.kind == "Tilde":
        return (spec.m,)
    return spec.colors


def enumerate_basis(
    spec: FAModuleSpec, g: int, n: int, degree: int, variant: str = "full", hat: bool = False
) -> list[GraphKey] | list[TermKey]:
    """
    The non-null generators of one degree, in canonical order.

    The decoration is part of each key: an ω-mark of color ``c`` on an end at
    the special vertex says that the end lies in the ``c``-th subset of the
    summand. For ``Tilde(m)`` the returned basis is that of ``G_{1^m}``, whose
    quotient the homology layer takes. ``C(lambda)`` with more than one column
    has no colored-leg model of its own; its basis is that of the signed sum of
    products ``V_lambda = sum ± V_{1^a} ⊗ V_{1^b} ⊗ ...``, one :class:`TermKey`
    per generator of each term, terms in the order of
    :func:`~fa_graphs.famod.jacobi_trudi_products`.

    Args:
        spec (FAModuleSpec): Any ``C``, ``Tilde`` or ``Product`` module.
        g (int): The genus.
        n (int): The arity.
        degree (int): The number of edges.
        variant (str): ``"full"`` or ``"star"``.
        hat (bool): Allow genus at black vertices and black loops.

    Returns:
        A list of keys; empty outside the degree range or when the vanishing
        bound applies.

    Raises:
        InvalidSpec: For an unknown variant, or the star variant of a module it is not defined for.
        BudgetExceeded: If generation runs over budget.
    """
    if variant not in VARIANTS:
        raise InvalidSpec(f"Unknown variant {variant}")
    if g < 0 or n < 0:
        raise InvalidSpec(f"Invalid genus/arity ({g},{n})")
    if degree not in degree_range(spec, g, n) or vanishing_predicate(spec, g, n):
        return []
    if spec.kind == "C" and spec.partition.columns() > 1:
        return [
            TermKey(sign, term, key)
            for sign, term in jacobi_trudi_products(spec.partition)
            for key in enumerate_basis(term, g, n, degree, variant, hat)
        ]
    colors = _colors_for(spec)
    if variant == "star":
        if hat or spec.kind == "Tilde":
            raise InvalidSpec("The star variant is defined for G of a colored-leg module only")
        from .catalog import star_levels

        return list(star_levels(colors, g, n).get(degree, ()))
    levels = cached_levels(colors, g, n, hat)
    return [key for key in levels.get(degree, ()) if not key.null]


def clear_caches() -> None:
    from .catalog import component_catalog, star_levels

    generate.cache_clear()
    star_levels.cache_clear()
    component_catalog.cache_clear()
