"""
Decorated graphs and their canonical forms.

A graph has the special vertex ``0`` and black vertices ``1..v``. Every edge is
a pair of ends ``(vertex, mark)``; a mark ``c >= 1`` on an end at the special
vertex is an ω-half-edge of color ``c``, mark ``0`` is ε (or any end at a black
vertex). Numbered legs are ends as well, leg ``i`` stored at position ``i - 1``.

The orientation of a graph is the order of its edges together with, for each
color, the order in which its ω-half-edges are met when scanning edges in order
(side 0 before side 1) and then the legs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterator

from ..conf import get_setting
from ..exceptions import BudgetExceeded

STAR = 0


def parity(perm) -> int:
    """Sign of a permutation given as a sequence of images."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class DecoratedGraph:
    """
    A graph with the special vertex, genus-labeled black vertices, numbered
    legs and a colored-leg decoration at the special vertex.

    Attributes:
        genera (tuple[int, ...]): Genus of black vertex ``i + 1`` at index ``i``.
        edges (tuple): Pairs of ends ``((vertex, mark), (vertex, mark))`` in orientation order.
        legs (tuple): End of numbered leg ``i + 1`` at index ``i``.
        colors (tuple[int, ...]): Number of ω-half-edges of each color the decoration carries.
    """

    genera: tuple
    edges: tuple
    legs: tuple
    colors: tuple

    @property
    def vertex_count(self) -> int:
        return len(self.genera)

    @property
    def degree(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return len(self.legs)

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.genera) + sum(self.genera)

    def half_edges(self) -> Iterator[tuple[tuple, tuple[int, int]]]:
        """Yields ``(id, end)`` in scan order; ids are ``(0, edge, side)`` or ``(1, leg, 0)``."""
        for i, pair in enumerate(self.edges):
            yield (0, i, 0), pair[0]
            yield (0, i, 1), pair[1]
        for j, end in enumerate(self.legs):
            yield (1, j, 0), end

    def star_half_edges(self) -> list[tuple[tuple, int]]:
        return [(hid, end[1]) for hid, end in self.half_edges() if end[0] == STAR]

    def half_edges_at(self, vertex: int) -> list[tuple]:
        return [hid for hid, end in self.half_edges() if end[0] == vertex]

    def omega_order(self, color: int) -> list[tuple]:
        return [hid for hid, end in self.half_edges() if end[0] == STAR and end[1] == color]

    def valence(self, vertex: int) -> int:
        return sum(1 for _, end in self.half_edges() if end[0] == vertex)

    def with_half_edges(self, moves: dict, new_edge=None, genera=None) -> DecoratedGraph:
        """
        Returns a raw copy with some half-edges moved to other ends and an
        optional new edge placed first in the orientation.
        """
        edges = []
        for i, (a, b) in enumerate(self.edges):
            edges.append((moves.get((0, i, 0), a), moves.get((0, i, 1), b)))
        legs = tuple(moves.get((1, j, 0), end) for j, end in enumerate(self.legs))
        if new_edge is not None:
            edges.insert(0, new_edge)
        return DecoratedGraph(
            genera=self.genera if genera is None else tuple(genera),
            edges=tuple(edges),
            legs=legs,
            colors=self.colors,
        )

    def permute_legs(self, sigma) -> tuple[DecoratedGraph, int]:
        """
        Renames leg ``i`` to ``sigma[i]`` (0-based). The returned sign accounts
        for the ω-half-edges on legs changing their scan position.
        """
        legs = [None] * len(self.legs)
        for i, end in enumerate(self.legs):
            legs[sigma[i]] = end
        sign = 1
        for color in range(1, len(self.colors) + 1):
            old = [j for j, end in enumerate(self.legs) if end == (STAR, color)]
            if len(old) > 1:
                images = [sigma[j] for j in old]
                order = sorted(images)
                sign *= parity([order.index(x) for x in images])
        graph = DecoratedGraph(self.genera, self.edges, tuple(legs), self.colors)
        return graph, sign


@dataclass(frozen=True)
class GraphKey:
    """
    Canonical representative of an isomorphism class.

    Attributes:
        data (tuple): ``(colors, genera, edges, legs)`` of the canonical labeling.
        null (bool): True if an automorphism acts by -1 on the orientation.
        automorphisms (int): Order of the group of vertex relabelings fixing the graph.
    """

    data: tuple
    null: bool = field(default=False, compare=False)
    automorphisms: int = field(default=1, compare=False)

    @property
    def encoded(self) -> bytes:
        return repr(self.data).encode()

    def graph(self) -> DecoratedGraph:
        colors, genera, edges, legs = self.data
        return DecoratedGraph(genera=genera, edges=edges, legs=legs, colors=colors)

    def as_json(self) -> list:
        colors, genera, edges, legs = self.data
        return [
            list(colors),
            list(genera),
            [[list(a), list(b)] for a, b in edges],
            [list(end) for end in legs],
        ]

    @classmethod
    def from_json(cls, payload) -> GraphKey:
        colors, genera, edges, legs = payload
        data = (
            tuple(colors),
            tuple(genera),
            tuple((tuple(a), tuple(b)) for a, b in edges),
            tuple(tuple(end) for end in legs),
        )
        return cls(data)


def _adjacency(graph: DecoratedGraph) -> dict[int, list[tuple[int, int, int]]]:
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(1, graph.vertex_count + 1)}
    for a, b in graph.edges:
        if a[0] != STAR:
            adj[a[0]].append((a[1], b[0], b[1]))
        if b[0] != STAR:
            adj[b[0]].append((b[1], a[0], a[1]))
    return adj


def _initial_colors(graph: DecoratedGraph) -> dict[int, int]:
    legs_at: dict[int, list[int]] = {v: [] for v in range(1, graph.vertex_count + 1)}
    for j, end in enumerate(graph.legs):
        if end[0] != STAR:
            legs_at[end[0]].append(j)
    adj = _adjacency(graph)
    raw = {
        v: (graph.genera[v - 1], len(adj[v]), tuple(legs_at[v]))
        for v in range(1, graph.vertex_count + 1)
    }
    return _normalize(raw)


def _normalize(raw: dict) -> dict[int, int]:
    ranks = {value: i for i, value in enumerate(sorted(set(raw.values())))}
    return {v: ranks[value] for v, value in raw.items()}


def _refine(adj, colors: dict[int, int]) -> dict[int, int]:
    while True:
        signatures = {}
        for v, neighbours in adj.items():
            around = sorted(
                (mine, -1 if other == STAR else colors[other], other_mark)
                for mine, other, other_mark in neighbours
            )
            signatures[v] = (colors[v], tuple(around))
        refined = _normalize(signatures)
        if len(set(refined.values())) == len(set(colors.values())):
            return refined
        colors = refined


def _leaves(adj, colors: dict[int, int], budget: list[int]) -> Iterator[dict[int, int]]:
    colors = _refine(adj, colors)
    cells: dict[int, list[int]] = {}
    for v, c in colors.items():
        cells.setdefault(c, []).append(v)
    target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("canonical_leaves", get_setting("MAX_GENERATORS"), budget[0])
        yield colors
        return
    for v in sorted(cells[target]):
        split = {u: (c, 0 if u == v else 1) for u, c in colors.items()}
        yield from _leaves(adj, _normalize(split), budget)


def _encode(graph: DecoratedGraph, labels: dict[int, int]) -> tuple[tuple, int]:
    def relabel(end):
        return (STAR if end[0] == STAR else labels[end[0]], end[1])

    normalized = []
    for a, b in graph.edges:
        ra, rb = relabel(a), relabel(b)
        normalized.append(((rb, ra), True) if rb < ra else ((ra, rb), False))
    order = sorted(range(len(normalized)), key=lambda i: normalized[i][0])
    edges = tuple(normalized[i][0] for i in order)
    legs = tuple(relabel(end) for end in graph.legs)
    inverse = {new: old for old, new in labels.items()}
    genera = tuple(graph.genera[inverse[k] - 1] for k in range(1, graph.vertex_count + 1))

    sign = parity(order)
    ends = {hid: end for hid, end in graph.half_edges()}
    for color in range(1, len(graph.colors) + 1):
        original = [hid for hid, end in ends.items() if end == (STAR, color)]
        if len(original) < 2:
            continue
        canonical = []
        for i in order:
            sides = (1, 0) if normalized[i][1] else (0, 1)
            for side in sides:
                if ends[(0, i, side)] == (STAR, color):
                    canonical.append((0, i, side))
        canonical.extend(hid for hid in original if hid[0] == 1)
        position = {hid: k for k, hid in enumerate(sorted(original))}
        sign *= parity([position[hid] for hid in canonical])
    return (graph.colors, genera, edges, legs), sign


def _edge_null(edges: tuple) -> bool:
    for edge, group in groupby(edges):
        omegas = sum(1 for end in edge if end[0] == STAR and end[1] > 0)
        if edge[0] == edge[1] and edge[0][1] > 0 and edge[0][0] == STAR:
            return True
        if len(list(group)) > 1 and omegas != 1:
            return True
    return False


def canonicalize(graph: DecoratedGraph) -> tuple[GraphKey, int]:
    """
    Computes the canonical key of a graph and the sign relating the graph's
    orientation to the orientation of the canonical representative.

    Returns:
        The key (null-flagged when the class vanishes) and a sign of +1 or -1.
    """
    adj = _adjacency(graph)
    budget = [get_setting("MAX_GENERATORS")]
    best = None
    signs = set()
    count = 0
    if graph.vertex_count == 0:
        leaves = iter([{}])
    else:
        leaves = _leaves(adj, _initial_colors(graph), budget)
    for colors in leaves:
        labels = {v: c + 1 for v, c in colors.items()}
        data, sign = _encode(graph, labels)
        if best is None or data < best:
            best, signs, count = data, {sign}, 1
        elif data == best:
            signs.add(sign)
            count += 1
    null = len(signs) > 1 or _edge_null(best[2])
    first = min(signs) if null else next(iter(signs))
    return GraphKey(best, null=null, automorphisms=count), first
