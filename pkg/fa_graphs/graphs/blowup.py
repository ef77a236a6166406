"""
The blown-up picture: delete the special vertex and keep its half-edges as
ω-legs (in the decoration) or ε-legs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import STAR, DecoratedGraph

NUMBERED = "num"
OMEGA = "omega"
EPSILON = "eps"


def _kind(mark: int) -> str:
    return OMEGA if mark > 0 else EPSILON


@dataclass(frozen=True)
class BlownComponent:
    """
    One connected component of a generator with the special vertex removed.

    Attributes:
        genera (tuple[int, ...]): Genus of each local vertex; empty for a bare edge or leg.
        edges (tuple[tuple[int, int], ...]): Internal edges between local vertices.
        legs (tuple[tuple[int, str, int], ...]): ``(local vertex or -1, kind, label)``; the
            label is the leg number for numbered legs and the color (0 for ε) otherwise.
    """

    genera: tuple
    edges: tuple
    legs: tuple

    @property
    def loop_order(self) -> int:
        if not self.genera:
            return 0
        return len(self.edges) - len(self.genera) + 1 + sum(self.genera)

    def count(self, kind: str) -> int:
        return sum(1 for leg in self.legs if leg[1] == kind)

    @property
    def n_numbered(self) -> int:
        return self.count(NUMBERED)

    @property
    def n_omega(self) -> int:
        return self.count(OMEGA)

    @property
    def n_epsilon(self) -> int:
        return self.count(EPSILON)

    def is_epsilon_component(self) -> bool:
        return self.n_omega == 0


def excess(component: BlownComponent) -> int:
    """
    ``3(h-1) + 2 n_i + 3 n_eps + n_omega``.

    >>> excess(BlownComponent((), (), ((-1, "omega", 1), (-1, "omega", 2))))
    -1
    """
    return (
        3 * (component.loop_order - 1)
        + 2 * component.n_numbered
        + 3 * component.n_epsilon
        + component.n_omega
    )


def blow_up(graph: DecoratedGraph) -> list[BlownComponent]:
    """Splits a generator into its blown-up components."""
    parent = list(range(graph.vertex_count + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in graph.edges:
        if a[0] != STAR and b[0] != STAR:
            parent[find(a[0])] = find(b[0])

    groups: dict[int, list[int]] = {}
    for v in range(1, graph.vertex_count + 1):
        groups.setdefault(find(v), []).append(v)

    components = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        members = groups[root]
        local = {v: i for i, v in enumerate(members)}
        edges = []
        legs = []
        for a, b in graph.edges:
            if a[0] in local and b[0] in local:
                edges.append((local[a[0]], local[b[0]]))
            elif a[0] == STAR and b[0] in local:
                legs.append((local[b[0]], _kind(a[1]), a[1]))
            elif b[0] == STAR and a[0] in local:
                legs.append((local[a[0]], _kind(b[1]), b[1]))
        for j, end in enumerate(graph.legs):
            if end[0] in local:
                legs.append((local[end[0]], NUMBERED, j + 1))
        genera = tuple(graph.genera[v - 1] for v in members)
        components.append(BlownComponent(genera, tuple(edges), tuple(legs)))

    for a, b in graph.edges:
        if a[0] == STAR and b[0] == STAR:
            components.append(BlownComponent((), (), ((-1, _kind(a[1]), a[1]), (-1, _kind(b[1]), b[1]))))
    for j, end in enumerate(graph.legs):
        if end[0] == STAR:
            components.append(BlownComponent((), (), ((-1, NUMBERED, j + 1), (-1, _kind(end[1]), end[1]))))
    return components


def reattach(components: list[BlownComponent], colors: tuple) -> DecoratedGraph:
    """Glues blown-up components back onto a fresh special vertex."""
    genera: list[int] = []
    edges: list = []
    legs: dict[int, tuple[int, int]] = {}
    for comp in components:
        if not comp.genera:
            numbered = [leg for leg in comp.legs if leg[1] == NUMBERED]
            marks = [leg[2] for leg in comp.legs if leg[1] != NUMBERED]
            if numbered:
                legs[numbered[0][2]] = (STAR, marks[0])
            else:
                edges.append(((STAR, marks[0]), (STAR, marks[1])))
            continue
        offset = len(genera) + 1
        genera.extend(comp.genera)
        for a, b in comp.edges:
            edges.append(((a + offset, 0), (b + offset, 0)))
        for vertex, kind, label in comp.legs:
            if kind == NUMBERED:
                legs[label] = (vertex + offset, 0)
            else:
                edges.append(((STAR, label), (vertex + offset, 0)))
    return DecoratedGraph(
        genera=tuple(genera),
        edges=tuple(edges),
        legs=tuple(legs[j] for j in sorted(legs)),
        colors=colors,
    )


def is_star_graph(graph: DecoratedGraph) -> bool:
    """
    No vertices in ε-components and at most one numbered leg among all of
    them.
    """
    numbered = 0
    for comp in blow_up(graph):
        if comp.is_epsilon_component():
            if comp.genera:
                return False
            numbered += comp.n_numbered
    return numbered <= 1


def total_excess(graph: DecoratedGraph) -> int:
    return sum(excess(comp) for comp in blow_up(graph))
