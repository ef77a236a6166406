"""
Cochain complexes of decorated graphs and their equivariant cohomology.

Matrices are stored column-major as ``{column: {row: coefficient}}`` with
integer coefficients. The symmetric group acts on every degree by signed
permutations of the basis, given on the adjacent transpositions.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Optional

from loguru import logger

from .conf import get_setting
from .exceptions import BudgetExceeded, ConsistencyError, InvalidSpec
from .famod import FAModuleSpec, jacobi_trudi_products
from .graphs.canonical import STAR, DecoratedGraph, GraphKey, canonicalize
from .graphs.catalog import star_levels
from .graphs.enumerate import VARIANTS, cached_levels, vanishing_predicate
from .graphs.moves import all_moves
from .linalg import cached_rank
from .symcore import (
    IrrDecomposition,
    Partition,
    SymFunction,
    character,
    class_size,
    hook_dimension,
    partitions,
)
from .tasks import check_wall_clock, chunked, run_parallel


def _add(column: dict, row: int, value: int) -> None:
    total = column.get(row, 0) + value
    if total:
        column[row] = total
    else:
        column.pop(row, None)


def multiply(left: dict, right: dict) -> dict:
    """The product ``left @ right`` of two column-major matrices."""
    out = {}
    for col, entries in right.items():
        column: dict[int, int] = {}
        for mid, coef in entries.items():
            for row, value in left.get(mid, {}).items():
                _add(column, row, coef * value)
        if column:
            out[col] = column
    return out


def entries(columns: dict, offset: int = 0) -> dict[tuple[int, int], int]:
    return {(row, col + offset): value for col, column in columns.items() for row, value in column.items()}


def _permute(action: list, columns: dict) -> dict:
    """``P @ M`` for a signed permutation ``P`` given as ``[(row, sign), ...]``."""
    out = {}
    for col, column in columns.items():
        out[col] = {action[row][0]: action[row][1] * value for row, value in column.items()}
    return out


def _permute_columns(columns: dict, action: list) -> dict:
    """``M @ P``."""
    out = {}
    for col, (image, sign) in enumerate(action):
        column = columns.get(image)
        if column:
            out[col] = {row: sign * value for row, value in column.items()}
    return out


@dataclass
class RationalCochainComplex:
    """
    A finite cochain complex with a signed-permutation action of ``S_n``.

    Attributes:
        n (int): The arity; ``S_n`` acts.
        bases (dict[int, list]): Generators of each degree.
        differentials (dict[int, dict]): ``D_e`` from degree ``e`` to ``e + 1``, column-major.
        actions (dict[int, list]): Per degree, one signed permutation per adjacent
            transposition ``(k, k + 1)``.
        label (str): Human-readable name of the complex.
    """

    n: int
    bases: dict = field(default_factory=dict)
    differentials: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    label: str = ""

    def degrees(self) -> list[int]:
        return sorted(e for e, basis in self.bases.items() if basis)

    def dimension(self, degree: int) -> int:
        return len(self.bases.get(degree, ()))

    def differential(self, degree: int) -> dict:
        return self.differentials.get(degree, {})

    def action(self, degree: int) -> list:
        return self.actions.get(degree, [])

    def check_d_squared(self) -> None:
        """
        Raises:
            ConsistencyError: If ``D_{e+1} D_e`` is nonzero for some ``e``.
        """
        for e in self.degrees():
            square = multiply(self.differential(e + 1), self.differential(e))
            if square:
                col = min(square)
                raise ConsistencyError(
                    f"{self.label}: d^2 != 0 from degree {e}, generator {self.bases[e][col]!r}"
                )

    def check_equivariance(self) -> None:
        """
        Raises:
            ConsistencyError: If a transposition does not commute with the differential.
        """
        for e in self.degrees():
            source = self.action(e)
            target = self.action(e + 1)
            if not source or not target:
                continue
            for k, (p_source, p_target) in enumerate(zip(source, target)):
                left = _permute(p_target, self.differential(e))
                right = _permute_columns(self.differential(e), p_source)
                if left != right:
                    raise ConsistencyError(f"{self.label}: transposition {k} does not commute with D_{e}")


@dataclass
class QuotientComplex:
    """
    The cokernel of a chain map ``relations -> cover``.

    Attributes:
        cover (RationalCochainComplex): The target of the map.
        relations (RationalCochainComplex): The source of the map.
        maps (dict[int, dict]): Per degree, the chain map, column-major.
        label (str): Human-readable name of the complex.
    """

    cover: RationalCochainComplex
    relations: RationalCochainComplex
    maps: dict = field(default_factory=dict)
    label: str = ""

    @property
    def n(self) -> int:
        return self.cover.n

    def check_chain_map(self) -> None:
        for e in self.relations.degrees():
            left = multiply(self.cover.differential(e), self.maps.get(e, {}))
            right = multiply(self.maps.get(e + 1, {}), self.relations.differential(e))
            if left != right:
                raise ConsistencyError(f"{self.label}: the quotient map is not a chain map in degree {e}")


@dataclass
class VirtualComplex:
    """
    A signed sum of complexes, standing for a module that is a signed sum of
    product modules.

    Attributes:
        n (int): The arity.
        terms (list[tuple[int, RationalCochainComplex]]): Signs and complexes.
        label (str): Human-readable name.
    """

    n: int
    terms: list = field(default_factory=list)
    label: str = ""


def _differential_columns(job) -> list[dict]:
    data_list, hat = job
    out = []
    for data in data_list:
        terms: dict[tuple, int] = {}
        for raw, sign in all_moves(GraphKey(data).graph(), hat=hat):
            key, canonical_sign = canonicalize(raw)
            if key.null:
                continue
            total = terms.get(key.data, 0) + sign * canonical_sign
            if total:
                terms[key.data] = total
            else:
                terms.pop(key.data)
        out.append(terms)
    return out


def _transposition_images(job) -> list[list[tuple]]:
    data_list, n = job
    out = []
    for data in data_list:
        graph = GraphKey(data).graph()
        images = []
        for k in range(n - 1):
            sigma = list(range(n))
            sigma[k], sigma[k + 1] = k + 1, k
            moved, sign = graph.permute_legs(sigma)
            key, canonical_sign = canonicalize(moved)
            images.append((key.data, sign * canonical_sign))
        out.append(images)
    return out


def _run_chunked(func, items: list, extra, workers: int) -> list:
    jobs = [(chunk, extra) for chunk in chunked(items, 64)]
    return [result for batch in run_parallel(func, jobs, workers) for result in batch]


def _signed_action(images: list, index: dict, label: str, degree: int) -> list:
    if not images:
        return []
    action = []
    for k in range(len(images[0])):
        column = []
        for per_generator in images:
            data, sign = per_generator[k]
            if data not in index:
                raise ConsistencyError(f"{label}: S_n does not preserve the basis in degree {degree}")
            column.append((index[data], sign))
        action.append(column)
    return action


def colored_complex(
    colors: tuple,
    g: int,
    n: int,
    variant: str = "full",
    hat: bool = False,
    label: str = "",
    use_cache: bool = False,
) -> RationalCochainComplex:
    """
    The graph complex whose decoration is a product of sign representations,
    one per color, realized by ω-marks. With ``use_cache`` the generators of the
    full variant are read from and written to the persistent cache.

    Raises:
        ConsistencyError: If a term of the differential leaves the basis with a
            nonzero coefficient (in particular, if the star basis is not closed).
        BudgetExceeded: If generation runs over budget.
    """
    workers = int(get_setting("WORKERS"))
    started = time.monotonic()
    if variant == "star":
        if hat:
            raise InvalidSpec("The star variant is defined for G only")
        levels = star_levels(colors, g, n)
    else:
        levels = cached_levels(colors, g, n, hat, use_cache)
    bases = {}
    for degree, keys in levels.items():
        basis = [key for key in keys if not key.null]
        if basis:
            bases[degree] = basis
    index = {degree: {key.data: i for i, key in enumerate(basis)} for degree, basis in bases.items()}

    differentials = {}
    actions = {}
    for degree, basis in bases.items():
        data_list = [key.data for key in basis]
        target = index.get(degree + 1, {})
        columns = {}
        for col, terms in enumerate(_run_chunked(_differential_columns, data_list, hat, workers)):
            column = {}
            for data, coef in terms.items():
                if data not in target:
                    raise ConsistencyError(
                        f"{label}: differential of {basis[col].data!r} leaves the {variant} basis"
                    )
                column[target[data]] = coef
            if column:
                columns[col] = column
        differentials[degree] = columns
        if n > 1:
            images = _run_chunked(_transposition_images, data_list, n, workers)
            actions[degree] = _signed_action(images, index[degree], label, degree)

    logger.debug(
        "Built {} with dimensions {} in {:.2f}s",
        label or f"colors={colors}",
        {e: len(b) for e, b in sorted(bases.items())},
        time.monotonic() - started,
    )
    return RationalCochainComplex(n=n, bases=bases, differentials=differentials, actions=actions, label=label)


def forget_omega(graph: DecoratedGraph):
    """
    The map ``G_{1^(j+1)} -> G_{1^j}`` on one generator: each ω-half-edge in
    turn becomes ε, with the sign of its position in the ω order.
    """
    order = graph.omega_order(1)
    colors = (len(order) - 1,) if len(order) > 1 else ()
    for i, hid in enumerate(order):
        raw = graph.with_half_edges({hid: (STAR, 0)})
        yield DecoratedGraph(raw.genera, raw.edges, raw.legs, colors), -1 if i % 2 else 1


def _forget_columns(job) -> list[dict]:
    data_list, _ = job
    out = []
    for data in data_list:
        terms: dict[tuple, int] = {}
        for raw, sign in forget_omega(GraphKey(data).graph()):
            key, canonical_sign = canonicalize(raw)
            if key.null:
                continue
            total = terms.get(key.data, 0) + sign * canonical_sign
            if total:
                terms[key.data] = total
            else:
                terms.pop(key.data)
        out.append(terms)
    return out


def forget_maps(source: RationalCochainComplex, target: RationalCochainComplex) -> dict:
    """The ω-forgetting chain map between two one-color complexes, per degree."""
    workers = int(get_setting("WORKERS"))
    maps = {}
    for degree in source.degrees():
        index = {key.data: i for i, key in enumerate(target.bases.get(degree, ()))}
        columns = {}
        data_list = [key.data for key in source.bases[degree]]
        for col, terms in enumerate(_run_chunked(_forget_columns, data_list, None, workers)):
            column = {}
            for data, coef in terms.items():
                if data not in index:
                    raise ConsistencyError(f"{target.label}: forgetting an ω leaves the basis")
                column[index[data]] = coef
            if column:
                columns[col] = column
        maps[degree] = columns
    return maps


def _column_colors(j: int) -> tuple:
    return (j,) if j else ()


def _gate(cx: RationalCochainComplex) -> RationalCochainComplex:
    cx.check_d_squared()
    cx.check_equivariance()
    return cx


def build_complex(
    spec: FAModuleSpec, g: int, n: int, variant: str = "full", hat: bool = False, use_cache: bool = False
):
    """
    Builds the graph complex of a module at genus ``g`` and arity ``n``.

    ``Product`` and one-column ``C`` modules give a :class:`RationalCochainComplex`;
    ``Tilde(m)`` gives the :class:`QuotientComplex` of ``G_{1^m}`` by the image of
    ``G_{1^(m+1)}``; any other ``C(lambda)`` gives the :class:`VirtualComplex` of
    its expansion into product modules.

    Raises:
        InvalidSpec: For an unknown variant or the star variant of a quotient.
        ConsistencyError: If ``d^2 != 0`` or the action does not commute with ``D``.
        BudgetExceeded: If generation runs over budget.
    """
    if variant not in VARIANTS:
        raise InvalidSpec(f"Unknown variant {variant}")
    label = f"{spec.label()}({g},{n})"
    if vanishing_predicate(spec, g, n):
        logger.debug("{} vanishes by the excess bound", label)
        return RationalCochainComplex(n=n, label=label)
    if spec.kind == "Tilde":
        if variant == "star":
            raise InvalidSpec("The star variant is not defined for Tilde modules")
        cover = _gate(
            colored_complex(_column_colors(spec.m), g, n, "full", hat, f"G_1^{spec.m}({g},{n})", use_cache)
        )
        relations = _gate(
            colored_complex(
                _column_colors(spec.m + 1), g, n, "full", hat, f"G_1^{spec.m + 1}({g},{n})", use_cache
            )
        )
        quotient = QuotientComplex(cover, relations, forget_maps(relations, cover), label)
        quotient.check_chain_map()
        return quotient
    if spec.kind == "C" and spec.partition.columns() > 1:
        terms = []
        for sign, product_spec in jacobi_trudi_products(spec.partition):
            sub_label = f"{product_spec.label()}({g},{n})"
            sub = colored_complex(product_spec.colors, g, n, variant, hat, sub_label, use_cache)
            terms.append((sign, _gate(sub)))
        return VirtualComplex(n=n, terms=terms, label=label)
    return _gate(colored_complex(spec.colors, g, n, variant, hat, label, use_cache))


def resolution_complex(m: int, g: int, n: int) -> RationalCochainComplex:
    """
    The total complex of ``G_{1^(m-1)} -> ... -> G_{1^0}``, column ``c`` holding
    ``G_{1^(m-1-c)}`` and total degree being the number of edges plus ``c``.
    Its cohomology is that of ``G_{Tilde(m)}`` whenever ``2g + n > 0``.
    """
    if m < 1:
        raise InvalidSpec("Tilde(m) needs m >= 1")
    columns = [
        _gate(colored_complex(_column_colors(m - 1 - c), g, n, "full", False, f"G_1^{m - 1 - c}({g},{n})"))
        for c in range(m)
    ]
    maps = [forget_maps(columns[c], columns[c + 1]) for c in range(m - 1)]

    bases: dict[int, list] = {}
    offsets: dict[tuple[int, int], int] = {}
    for c, cx in enumerate(columns):
        for e in cx.degrees():
            total = e + c
            offsets[(c, e)] = len(bases.setdefault(total, []))
            bases[total].extend((c, key) for key in cx.bases[e])

    differentials: dict[int, dict] = {}
    for c, cx in enumerate(columns):
        sign = -1 if c % 2 else 1
        for e in cx.degrees():
            total = e + c
            out = differentials.setdefault(total, {})
            base = offsets[(c, e)]
            for col, column in cx.differential(e).items():
                target = out.setdefault(base + col, {})
                for row, value in column.items():
                    _add(target, offsets[(c, e + 1)] + row, sign * value)
            if c + 1 < len(columns):
                for col, column in maps[c].get(e, {}).items():
                    target = out.setdefault(base + col, {})
                    for row, value in column.items():
                        _add(target, offsets[(c + 1, e)] + row, value)
    for total in list(differentials):
        differentials[total] = {col: column for col, column in differentials[total].items() if column}

    actions: dict[int, list] = {}
    if n > 1:
        for total, basis in bases.items():
            action = [[None] * len(basis) for _ in range(n - 1)]
            for c, cx in enumerate(columns):
                e = total - c
                if (c, e) not in offsets:
                    continue
                base = offsets[(c, e)]
                for k, generator in enumerate(cx.action(e)):
                    for col, (row, s) in enumerate(generator):
                        action[k][base + col] = (base + row, s)
            actions[total] = action
    total_cx = RationalCochainComplex(n, bases, differentials, actions, f"Res_Tilde({m})({g},{n})")
    return _gate(total_cx)


def _cycle_type(perm: tuple[int, ...]) -> Partition:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        j = start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        parts.append(length)
    return Partition(parts)


def group_action(n: int, generators: list, dim: int) -> dict[tuple[int, ...], list]:
    """
    Every element of ``S_n`` as a signed permutation of a basis of size
    ``dim``, generated from the adjacent transpositions.

    Raises:
        BudgetExceeded: If ``n! * dim`` exceeds ``MAX_MATRIX_ENTRIES``.
    """
    limit = get_setting("MAX_MATRIX_ENTRIES")
    if factorial(n) * dim > limit:
        raise BudgetExceeded("group_action", limit, factorial(n) * dim)
    identity = tuple(range(n))
    elements = {identity: [(i, 1) for i in range(dim)]}
    if not generators:
        return elements
    queue = deque([identity])
    while queue:
        perm = queue.popleft()
        images = elements[perm]
        for k, generator in enumerate(generators):
            swapped = tuple(k + 1 if x == k else k if x == k + 1 else x for x in perm)
            if swapped in elements:
                continue
            elements[swapped] = [(generator[row][0], sign * generator[row][1]) for row, sign in images]
            queue.append(swapped)
    return elements


@dataclass
class IsotypicData:
    """
    Multiplicities of the irreducibles in one cochain space and the
    (unnormalized) central idempotents ``sum chi_mu(sigma) sigma``.

    Attributes:
        multiplicities (dict[Partition, int]): Nonzero multiplicities.
        projectors (dict[Partition, dict]): Column-major projector per irreducible.
    """

    multiplicities: dict = field(default_factory=dict)
    projectors: dict = field(default_factory=dict)


def isotypic_data(n: int, generators: list, dim: int) -> IsotypicData:
    """
    Raises:
        ConsistencyError: If a multiplicity computed from traces is not an integer.
    """
    if dim == 0:
        return IsotypicData()
    elements = group_action(n, generators, dim)
    traces: dict[Partition, int] = {}
    types = {}
    for perm, images in elements.items():
        ct = _cycle_type(perm)
        types[perm] = ct
        if ct not in traces:
            traces[ct] = sum(sign for col, (row, sign) in enumerate(images) if row == col)

    order = factorial(n)
    multiplicities = {}
    for mu in partitions(n):
        total = sum(class_size(ct) * character(mu, ct) * trace for ct, trace in traces.items())
        if total % order:
            raise ConsistencyError(f"Non-integral multiplicity of {mu.label()}: {total}/{order}")
        if total:
            multiplicities[mu] = total // order

    chars = {ct: {mu: character(mu, ct) for mu in multiplicities} for ct in traces}
    projectors: dict[Partition, dict] = {mu: {} for mu in multiplicities}
    for perm, images in elements.items():
        row_chars = chars[types[perm]]
        for mu, projector in projectors.items():
            chi = row_chars[mu]
            if not chi:
                continue
            for col, (row, sign) in enumerate(images):
                _add(projector.setdefault(col, {}), row, chi * sign)
    for mu in projectors:
        projectors[mu] = {col: column for col, column in projectors[mu].items() if column}
    return IsotypicData(multiplicities, projectors)


class _RankLog:
    """Collects certification data of every rank computed for a report."""

    def __init__(self, use_cache: bool = False):
        self.use_cache = use_cache
        self.primes: set[int] = set()
        self.exact = 0
        self.count = 0

    def rank(self, matrix_entries: dict, shape: tuple[int, int]) -> int:
        if not matrix_entries:
            return 0
        check_wall_clock()
        result = cached_rank(matrix_entries, shape, self.use_cache)
        self.primes.update(result.primes)
        self.exact += int(result.exact)
        self.count += 1
        return result.rank

    def as_json(self) -> dict:
        return {"primes": sorted(self.primes), "exact_fallbacks": self.exact, "ranks": self.count}


@dataclass
class CohomologyReport:
    """
    Cohomology of one graph complex, degree by degree.

    Attributes:
        spec (FAModuleSpec | None): The module, if the complex came from one.
        g (int): The genus.
        n (int): The arity.
        dimensions (dict[int, int]): Nonzero cohomology dimensions.
        decompositions (dict[int, IrrDecomposition]): The ``S_n``-module of each nonzero degree.
        cochain_dimensions (dict[int, int]): Sizes of the cochain spaces.
        euler (SymFunction): Alternating sum of the cochain Frobenius characteristics.
        provenance (dict): Variant, primes used and budget statistics.
        seconds (float): Wall-clock time of the computation, left out of the JSON by default.
    """

    spec: Optional[FAModuleSpec]
    g: int
    n: int
    dimensions: dict = field(default_factory=dict)
    decompositions: dict = field(default_factory=dict)
    cochain_dimensions: dict = field(default_factory=dict)
    euler: SymFunction = field(default_factory=SymFunction.zero)
    provenance: dict = field(default_factory=dict)
    seconds: float = 0.0

    def degrees(self) -> list[int]:
        return sorted(self.dimensions)

    def total_dimension(self) -> int:
        return sum(self.dimensions.values())

    def decomposition(self, degree: int) -> IrrDecomposition:
        return self.decompositions.get(degree, IrrDecomposition.zero(self.n))

    def as_json(self, timings: bool = False) -> dict[str, Any]:
        payload = {
            "spec": self.spec.as_json() if self.spec else None,
            "g": self.g,
            "n": self.n,
            "dimensions": {str(e): d for e, d in sorted(self.dimensions.items())},
            "decompositions": {str(e): dec.as_json() for e, dec in sorted(self.decompositions.items())},
            "cochain_dimensions": {str(e): d for e, d in sorted(self.cochain_dimensions.items())},
            "euler": self.euler.as_json(),
            "provenance": self.provenance,
        }
        if timings:
            payload["seconds"] = self.seconds
        return payload

    @classmethod
    def from_json(cls, payload: dict) -> CohomologyReport:
        spec = FAModuleSpec.from_json(payload["spec"]) if payload.get("spec") else None
        n = payload["n"]
        return cls(
            spec=spec,
            g=payload["g"],
            n=n,
            dimensions={int(e): d for e, d in payload["dimensions"].items()},
            decompositions={
                int(e): IrrDecomposition.from_json(n, dec) for e, dec in payload["decompositions"].items()
            },
            cochain_dimensions={int(e): d for e, d in payload["cochain_dimensions"].items()},
            euler=SymFunction.from_json("schur", payload["euler"]),
            provenance=payload.get("provenance", {}),
            seconds=payload.get("seconds", 0.0),
        )


def _finish(report: CohomologyReport, cochain_mults: dict, label: str) -> CohomologyReport:
    """Fills in the Euler characteristic and checks it against the cohomology."""
    euler = IrrDecomposition.zero(report.n)
    for e, mults in cochain_mults.items():
        term = IrrDecomposition(report.n, mults)
        euler = euler + (term if e % 2 == 0 else -term)
    from_cohomology = IrrDecomposition.zero(report.n)
    for e, dec in report.decompositions.items():
        from_cohomology = from_cohomology + (dec if e % 2 == 0 else -dec)
    if euler != from_cohomology:
        raise ConsistencyError(f"{label}: Euler characteristic of cochains and cohomology differ")
    report.euler = euler.to_symfunction()
    return report


def _record(report: CohomologyReport, degree: int, dec: IrrDecomposition, dimension: int, label: str) -> None:
    if not dec.is_genuine() or dec.dimension() != dimension:
        raise ConsistencyError(f"{label}: degree {degree} decomposes as {dec.as_json()} of dimension {dimension}")
    if dimension:
        report.dimensions[degree] = dimension
        report.decompositions[degree] = dec


def _cohomology_of_complex(cx: RationalCochainComplex, report: CohomologyReport, log: _RankLog) -> CohomologyReport:
    degrees = cx.degrees()
    iso = {e: isotypic_data(cx.n, cx.action(e), cx.dimension(e)) for e in degrees}
    ranks = {}
    projected: dict[tuple[int, Partition], int] = {}
    for e in degrees:
        shape = (cx.dimension(e + 1), cx.dimension(e))
        ranks[e] = log.rank(entries(cx.differential(e)), shape)
        for mu, projector in iso[e].projectors.items():
            product = multiply(cx.differential(e), projector)
            projected[(e, mu)] = log.rank(entries(product), shape)

    for e in degrees:
        report.cochain_dimensions[e] = cx.dimension(e)
        dimension = cx.dimension(e) - ranks[e] - ranks.get(e - 1, 0)
        terms = {}
        for mu, mult in iso[e].multiplicities.items():
            dim_mu = hook_dimension(mu)
            block = dim_mu * mult - projected[(e, mu)] - projected.get((e - 1, mu), 0)
            if block % dim_mu:
                raise ConsistencyError(f"{cx.label}: isotypic block of {mu.label()} in degree {e} is not a multiple")
            terms[mu] = block // dim_mu
        _record(report, e, IrrDecomposition(cx.n, terms), dimension, cx.label)
    return _finish(report, {e: iso[e].multiplicities for e in degrees}, cx.label)


def _cohomology_of_quotient(cx: QuotientComplex, report: CohomologyReport, log: _RankLog) -> CohomologyReport:
    cover, relations = cx.cover, cx.relations
    degrees = cover.degrees()
    iso_b = {e: isotypic_data(cx.n, cover.action(e), cover.dimension(e)) for e in degrees}
    iso_a = {e: isotypic_data(cx.n, relations.action(e), relations.dimension(e)) for e in relations.degrees()}
    empty = IsotypicData()

    def image_rank(e, mu=None):
        maps = cx.maps.get(e, {})
        if mu is not None:
            projector = iso_a.get(e, empty).projectors.get(mu)
            if projector is None:
                return 0
            maps = multiply(maps, projector)
        return log.rank(entries(maps), (cover.dimension(e), relations.dimension(e)))

    def stacked_rank(e, mu=None):
        differential = cover.differential(e)
        maps = cx.maps.get(e + 1, {})
        if mu is not None:
            differential = multiply(differential, iso_b[e].projectors.get(mu, {}))
            projector = iso_a.get(e + 1, empty).projectors.get(mu)
            maps = multiply(maps, projector) if projector is not None else {}
        shape = (cover.dimension(e + 1), cover.dimension(e) + relations.dimension(e + 1))
        return log.rank({**entries(differential), **entries(maps, cover.dimension(e))}, shape)

    quotient_dim = {}
    quotient_rank = {}
    quotient_mults: dict[int, dict[Partition, int]] = {}
    block_rank: dict[tuple[int, Partition], int] = {}
    for e in degrees:
        quotient_dim[e] = cover.dimension(e) - image_rank(e)
        quotient_rank[e] = stacked_rank(e) - image_rank(e + 1)
        quotient_mults[e] = {}
        for mu, mult in iso_b[e].multiplicities.items():
            dim_mu = hook_dimension(mu)
            size = dim_mu * mult - image_rank(e, mu)
            if size % dim_mu:
                raise ConsistencyError(f"{cx.label}: quotient block of {mu.label()} in degree {e} is not a multiple")
            if size:
                quotient_mults[e][mu] = size // dim_mu
                block_rank[(e, mu)] = stacked_rank(e, mu) - image_rank(e + 1, mu)

    for e in degrees:
        if quotient_dim[e]:
            report.cochain_dimensions[e] = quotient_dim[e]
        dimension = quotient_dim[e] - quotient_rank[e] - quotient_rank.get(e - 1, 0)
        terms = {}
        for mu, mult in quotient_mults[e].items():
            dim_mu = hook_dimension(mu)
            block = dim_mu * mult - block_rank[(e, mu)] - block_rank.get((e - 1, mu), 0)
            if block % dim_mu:
                raise ConsistencyError(f"{cx.label}: isotypic block of {mu.label()} in degree {e} is not a multiple")
            terms[mu] = block // dim_mu
        _record(report, e, IrrDecomposition(cx.n, terms), dimension, cx.label)
    return _finish(report, quotient_mults, cx.label)


def cohomology(
    cx,
    spec: Optional[FAModuleSpec] = None,
    g: int = 0,
    variant: str = "full",
    hat: bool = False,
    use_cache: bool = False,
) -> CohomologyReport:
    """
    Computes the cohomology of a built complex with its ``S_n``-decomposition.

    Args:
        cx: A :class:`RationalCochainComplex`, :class:`QuotientComplex` or
            :class:`VirtualComplex`.
        spec (FAModuleSpec | None): Recorded in the report.
        g (int): Recorded in the report.
        variant (str): Recorded in the provenance.
        hat (bool): Recorded in the provenance.
        use_cache (bool): Read and write ranks through the persistent cache.

    Raises:
        ConsistencyError: If a multiplicity is not an integer, a degree does not
            decompose into a genuine representation, or the Euler characteristics
            of cochains and cohomology disagree.
    """
    started = time.monotonic()
    log = _RankLog(use_cache)
    report = CohomologyReport(spec=spec, g=g, n=cx.n, euler=SymFunction.zero())
    if isinstance(cx, VirtualComplex):
        euler = SymFunction.zero()
        decompositions: dict[int, IrrDecomposition] = {}
        cochains: dict[int, int] = {}
        parts = []
        for sign, term in cx.terms:
            sub = cohomology(term, None, g, variant, hat, use_cache)
            parts.append({"sign": sign, "label": term.label, "provenance": sub.provenance})
            euler = euler + sub.euler.scale(sign)
            for e, dec in sub.decompositions.items():
                decompositions[e] = decompositions.get(e, IrrDecomposition.zero(cx.n)) + dec.scale(sign)
            for e, d in sub.cochain_dimensions.items():
                cochains[e] = cochains.get(e, 0) + sign * d
        for e, dec in sorted(decompositions.items()):
            if not dec.is_genuine():
                raise ConsistencyError(f"{cx.label}: signed sum in degree {e} is not genuine: {dec.as_json()}")
            if not dec.is_zero():
                report.decompositions[e] = dec
                report.dimensions[e] = dec.dimension()
        report.cochain_dimensions = {e: d for e, d in sorted(cochains.items()) if d}
        report.euler = euler
        report.provenance = {"variant": variant, "hat": hat, "terms": parts}
    elif isinstance(cx, QuotientComplex):
        _cohomology_of_quotient(cx, report, log)
        report.provenance = {"variant": variant, "hat": hat, **log.as_json()}
    else:
        _cohomology_of_complex(cx, report, log)
        report.provenance = {"variant": variant, "hat": hat, **log.as_json()}
    report.provenance["label"] = cx.label
    report.seconds = round(time.monotonic() - started, 3)
    return report


def compute_report(
    spec: FAModuleSpec, g: int, n: int, variant: str = "full", hat: bool = False, use_cache: bool = False
) -> CohomologyReport:
    """
    Builds and solves one complex. With ``use_cache`` the report, the graph
    bases and every rank go through the persistent cache.
    """

    def run() -> dict:
        cx = build_complex(spec, g, n, variant, hat, use_cache)
        return cohomology(cx, spec, g, variant, hat, use_cache).as_json()

    if not use_cache:
        return CohomologyReport.from_json(run())
    from .models import compute_cached

    params = {"spec": spec.as_json(), "g": g, "n": n, "variant": variant, "hat": hat}
    return CohomologyReport.from_json(compute_cached("report", params, run))
