from .blowup import BlownComponent, blow_up, excess, is_star_graph, reattach, total_excess
from .canonical import STAR, DecoratedGraph, GraphKey, canonicalize
from .catalog import component_catalog, star_levels
from .enumerate import TermKey, cached_levels, enumerate_basis, generate, vanishing_predicate
from .moves import all_moves, black_splits, loop_expansions, star_splits

__all__ = [
    "STAR",
    "TermKey",
    "BlownComponent",
    "DecoratedGraph",
    "GraphKey",
    "all_moves",
    "black_splits",
    "blow_up",
    "cached_levels",
    "canonicalize",
    "component_catalog",
    "enumerate_basis",
    "excess",
    "generate",
    "is_star_graph",
    "loop_expansions",
    "reattach",
    "star_levels",
    "star_splits",
    "total_excess",
    "vanishing_predicate",
]
