"""
Local moves on decorated graphs. Each yields raw graphs (not canonicalized)
with the sign of the move; the new edge is always placed first.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .canonical import STAR, DecoratedGraph


def _subsets(items, min_size=0):
    for size in range(min_size, len(items) + 1):
        yield from combinations(items, size)


def star_splits(graph: DecoratedGraph, allow_black_loops: bool = False) -> Iterator[tuple[DecoratedGraph, int]]:
    """
    Splits the special vertex into itself and a new genus-0 black vertex
    carrying a block ``B`` of its half-edges, ``|B| >= 2``. The decoration is
    collapsed along ``B``: a block holding two ω-half-edges gives zero, a block
    holding one passes its color to the new half-edge at the special vertex.
    """
    star = graph.star_half_edges()
    eps = [hid for hid, mark in star if mark == 0]
    omegas = [(hid, mark) for hid, mark in star if mark > 0]
    new_vertex = graph.vertex_count + 1
    genera = graph.genera + (0,)
    # blocks with two ω-half-edges vanish, so at most one is carried
    choices: list = [None] + omegas
    for carried in choices:
        hits = 0 if carried is None else 1
        for eps_block in _subsets(eps, max(0, 2 - hits)):
            block = list(eps_block)
            mark = 0
            sign = 1
            if carried is not None:
                hid, mark = carried
                block.append(hid)
                sign = -1 if graph.omega_order(mark).index(hid) % 2 else 1
            if not allow_black_loops and _contains_whole_edge(block):
                continue
            moves = {hid: (new_vertex, 0) for hid in block}
            new_edge = ((STAR, mark), (new_vertex, 0))
            yield graph.with_half_edges(moves, new_edge=new_edge, genera=genera), sign


def _contains_whole_edge(block) -> bool:
    edges = [hid[1] for hid in block if hid[0] == 0]
    return len(edges) != len(set(edges))


def black_splits(graph: DecoratedGraph, with_genus: bool = False) -> Iterator[tuple[DecoratedGraph, int]]:
    """
    Splits a black vertex ``v`` into ``v`` and a new vertex joined by a new edge,
    summing over unordered 2-partitions of its half-edges. The smallest
    half-edge always stays at ``v``. Without genus, both sides need at least two
    of the old half-edges; with genus, the genus is distributed and each side
    must be stable.
    """
    new_vertex = graph.vertex_count + 1
    for v in range(1, graph.vertex_count + 1):
        around = graph.half_edges_at(v)
        if not around:
            continue
        rest = around[1:]
        genus = graph.genera[v - 1]
        for moved in _subsets(rest):
            kept_count = len(around) - len(moved) + 1
            moved_count = len(moved) + 1
            splits = [(0, 0)] if not with_genus else [(h, genus - h) for h in range(genus + 1)]
            for kept_genus, moved_genus in splits:
                if not _stable(kept_genus, kept_count) or not _stable(moved_genus, moved_count):
                    continue
                genera = list(graph.genera) + [moved_genus]
                genera[v - 1] = kept_genus
                moves = {hid: (new_vertex, 0) for hid in moved}
                new_edge = ((v, 0), (new_vertex, 0))
                yield graph.with_half_edges(moves, new_edge=new_edge, genera=genera), 1


def _stable(genus: int, valence: int) -> bool:
    return 2 * genus - 2 + valence > 0


def loop_expansions(graph: DecoratedGraph) -> Iterator[tuple[DecoratedGraph, int]]:
    """Trades one unit of genus at a black vertex for a new loop there."""
    for v in range(1, graph.vertex_count + 1):
        if graph.genera[v - 1] < 1:
            continue
        genera = list(graph.genera)
        genera[v - 1] -= 1
        yield graph.with_half_edges({}, new_edge=((v, 0), (v, 0)), genera=genera), 1


def all_moves(graph: DecoratedGraph, hat: bool = False) -> Iterator[tuple[DecoratedGraph, int]]:
    """Every term of the differential, before canonicalization."""
    yield from star_splits(graph, allow_black_loops=hat)
    yield from black_splits(graph, with_genus=hat)
    if hat:
        yield from loop_expansions(graph)
