"""
Star generators assembled from catalogs of blown-up components.

A star generator has no black vertices in components without ω-legs and at
most one numbered leg among those components, so it is a union, glued at the
special vertex, of

- components with black vertices and at least one ω-leg,
- loops at the special vertex with marks ``(a, b)``, at most one ``(ε, ε)``,
- numbered legs at the special vertex, at most one of them marked ε.

Each unit has an excess and the excesses of a generator add up to
``3g + 2n - 2N``; only ω-ω loops have negative excess, which bounds the
components worth cataloguing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterator

from loguru import logger
from sympy.utilities.iterables import multiset_permutations

from ..conf import get_setting
from ..exceptions import BudgetExceeded
from .canonical import STAR, DecoratedGraph, GraphKey, canonicalize
from .enumerate import close


@dataclass(frozen=True, order=True)
class Signature:
    """
    Shape of a blown-up component with black vertices.

    Attributes:
        loops (int): Its loop order.
        numbered (int): Number of numbered legs.
        epsilon (int): Number of ε-legs.
        omega (tuple[int, ...]): Number of ω-legs of each color.
    """

    loops: int
    numbered: int
    epsilon: int
    omega: tuple

    @property
    def attachments(self) -> int:
        return self.epsilon + sum(self.omega)

    @property
    def genus_cost(self) -> int:
        return self.loops + self.attachments - 1

    @property
    def excess(self) -> int:
        return 3 * (self.loops - 1) + 2 * self.numbered + 3 * self.epsilon + sum(self.omega)


@dataclass(frozen=True)
class Unit:
    """
    One building block of a star generator.

    Attributes:
        kind (str): ``"omega_omega"``, ``"loop"``, ``"leg"`` or ``"component"``.
        marks (tuple[int, ...]): Marks of the special-vertex ends of a loop or leg.
        signature (Signature | None): The shape of a component.
    """

    kind: str
    marks: tuple = ()
    signature: Signature | None = None

    def omega_use(self, width: int) -> tuple[int, ...]:
        if self.signature is not None:
            return self.signature.omega
        use = [0] * width
        for mark in self.marks:
            if mark:
                use[mark - 1] += 1
        return tuple(use)

    @property
    def genus_cost(self) -> int:
        if self.signature is not None:
            return self.signature.genus_cost
        return 1 if self.kind in ("omega_omega", "loop") else 0

    @property
    def numbered(self) -> int:
        if self.signature is not None:
            return self.signature.numbered
        return 1 if self.kind == "leg" else 0

    @property
    def excess(self) -> int:
        if self.signature is not None:
            return self.signature.excess
        if self.kind == "leg":
            return -3 + 2 + (3 if self.marks[0] == 0 else 1)
        return -3 + sum(3 if mark == 0 else 1 for mark in self.marks)


def _vector_le(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _omega_vectors(colors: tuple) -> Iterator[tuple[int, ...]]:
    for vector in product(*(range(c + 1) for c in colors)):
        if sum(vector):
            yield vector


def candidate_units(colors: tuple, g: int, n: int) -> list[Unit]:
    """The units that can occur in a star generator of this shape, ω-ω loops first."""
    width = len(colors)
    total_excess = 3 * g + 2 * n - 2 * sum(colors)
    omega_omega = [
        Unit("omega_omega", (a, b)) for a in range(1, width + 1) for b in range(a + 1, width + 1)
    ]
    max_negative = min(g, sum(colors) // 2) if omega_omega else 0
    bound = total_excess + max_negative

    units = list(omega_omega)
    for a in range(0, width + 1):
        if a == 0 or colors[a - 1]:
            units.append(Unit("loop", (0, a)))
    for mark in range(0, width + 1):
        if mark == 0 or colors[mark - 1]:
            units.append(Unit("leg", (mark,)))
    for omega in _omega_vectors(colors):
        for loops in range(0, g + 1):
            for epsilon in range(0, g + 2):
                for numbered in range(0, n + 1):
                    sig = Signature(loops, numbered, epsilon, omega)
                    if sig.genus_cost > g or 2 * loops + sig.attachments + numbered < 3:
                        continue
                    if sig.excess > bound:
                        continue
                    units.append(Unit("component", signature=sig))
    return [unit for unit in units if unit.excess <= bound]


def unit_multisets(colors: tuple, g: int, n: int) -> Iterator[tuple[Unit, ...]]:
    """Multisets of units whose genus, arity and decoration add up."""
    units = candidate_units(colors, g, n)
    width = len(colors)
    uses = [unit.omega_use(width) for unit in units]
    total_excess = 3 * g + 2 * n - 2 * sum(colors)

    def search(start, genus, numbered, omega, excess, chosen, eps_loop, eps_leg):
        if genus == 0 and numbered == 0 and not any(omega):
            if excess == 0:
                yield tuple(chosen)
            return
        for i in range(start, len(units)):
            unit = units[i]
            if unit.excess > excess:
                continue
            if unit.genus_cost > genus or unit.numbered > numbered or not _vector_le(uses[i], omega):
                continue
            if unit.genus_cost == 0 and unit.numbered == 0:
                continue
            is_eps_loop = unit.kind == "loop" and unit.marks == (0, 0)
            is_eps_leg = unit.kind == "leg" and unit.marks == (0,)
            if (is_eps_loop and eps_loop) or (is_eps_leg and eps_leg):
                continue
            remaining = tuple(o - u for o, u in zip(omega, uses[i]))
            chosen.append(unit)
            yield from search(
                i,
                genus - unit.genus_cost,
                numbered - unit.numbered,
                remaining,
                excess - unit.excess,
                chosen,
                eps_loop or is_eps_loop,
                eps_leg or is_eps_leg,
            )
            chosen.pop()

    yield from search(0, g, n, tuple(colors), total_excess, [], False, False)


def _seed(sig: Signature) -> DecoratedGraph:
    edges = [((1, 0), (1, 0)) for _ in range(sig.loops)]
    for color, count in enumerate(sig.omega, start=1):
        edges.extend(((STAR, color), (1, 0)) for _ in range(count))
    edges.extend(((STAR, 0), (1, 0)) for _ in range(sig.epsilon))
    legs = tuple((1, 0) for _ in range(sig.numbered))
    return DecoratedGraph((0,), tuple(edges), legs, sig.omega)


def _has_black_loop(graph: DecoratedGraph) -> bool:
    return any(a == b and a[0] != STAR for a, b in graph.edges)


@lru_cache(maxsize=None)
def component_catalog(sig: Signature) -> tuple[DecoratedGraph, ...]:
    """
    All non-null components of the given shape without loops at black
    vertices, as graphs whose special vertex carries only their ω- and ε-legs.
    """
    levels = close([_seed(sig)], "black")
    out = []
    for keys in levels.values():
        for key in keys:
            graph = key.graph()
            if not key.null and not _has_black_loop(graph):
                out.append(graph)
    return tuple(out)


def _glue(parts: list, labels: list[tuple[int, ...]], colors: tuple) -> DecoratedGraph:
    """
    Glues units at a common special vertex. ``parts`` holds component graphs
    or vertexless units, ``labels`` the global leg labels each part receives.
    """
    genera: list[int] = []
    edges: list = []
    legs: dict[int, tuple[int, int]] = {}
    for part, own in zip(parts, labels):
        if isinstance(part, Unit):
            if part.kind == "leg":
                legs[own[0]] = (STAR, part.marks[0])
            else:
                edges.append(((STAR, part.marks[0]), (STAR, part.marks[1])))
            continue
        offset = len(genera)
        genera.extend(part.genera)

        def shift(end, offset=offset):
            return end if end[0] == STAR else (end[0] + offset, end[1])

        edges.extend((shift(a), shift(b)) for a, b in part.edges)
        for local, end in enumerate(part.legs):
            legs[own[local]] = shift(end)
    return DecoratedGraph(tuple(genera), tuple(edges), tuple(legs[j] for j in sorted(legs)), colors)


def _label_splits(sizes: list[int]) -> Iterator[list[tuple[int, ...]]]:
    owners = [i for i, size in enumerate(sizes) for _ in range(size)]
    if not owners:
        yield [() for _ in sizes]
        return
    for assignment in multiset_permutations(owners):
        split: list[list[int]] = [[] for _ in sizes]
        for label, owner in enumerate(assignment, start=1):
            split[owner].append(label)
        yield [tuple(s) for s in split]


def _component_choices(units: tuple[Unit, ...]) -> Iterator[list]:
    groups: dict[Unit, int] = {}
    for unit in units:
        groups[unit] = groups.get(unit, 0) + 1
    options = []
    for unit, count in groups.items():
        if unit.signature is None:
            options.append([[unit] * count])
            continue
        catalog = component_catalog(unit.signature)
        options.append([list(choice) for choice in combinations_with_replacement(catalog, count)])
    for picked in product(*options):
        yield [part for group in picked for part in group]


@lru_cache(maxsize=32)
def star_levels(colors: tuple, g: int, n: int) -> dict[int, tuple[GraphKey, ...]]:
    """
    The non-null star generators of a colored-leg complex, by degree.

    Raises:
        BudgetExceeded: If more than ``MAX_GENERATORS`` classes are produced.
    """
    limit = get_setting("MAX_GENERATORS")
    started = time.monotonic()
    found: dict[int, dict[tuple, GraphKey]] = {}
    count = 0
    for units in unit_multisets(colors, g, n):
        for parts in _component_choices(units):
            sizes = [part.numbered if isinstance(part, Unit) else part.n for part in parts]
            for labels in _label_splits(sizes):
                key, _ = canonicalize(_glue(parts, labels, colors))
                if key.null:
                    continue
                level = found.setdefault(len(key.data[2]), {})
                if key.data not in level:
                    level[key.data] = key
                    count += 1
                    if count > limit:
                        raise BudgetExceeded("star_generators", limit, count)
    logger.debug(
        "Assembled {} star generators for colors={} g={} n={} in {:.2f}s",
        count,
        colors,
        g,
        n,
        time.monotonic() - started,
    )
    return {degree: tuple(level[data] for data in sorted(level)) for degree, level in sorted(found.items())}
