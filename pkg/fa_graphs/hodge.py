"""
Hodge weight ``(k, 0)`` cohomology reports assembled from graph cohomology.

``gr_{k,0} H_c^j(M_{g,n})`` splits as ``H^{j-k}(G_{Tilde(k)}(g-1, n))`` plus
``H^{j-k}(G_lambda(g-2, n))`` for the two-column shape ``lambda`` of the genus
two forms of degree ``k``. Each summand is taken from the cheapest source that
applies: a vanishing bound, the low-genus statement for ``Tilde(k)`` at
``n = 0``, the ``n = 0`` assembly from weight-zero data, or a direct
computation under the configured budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from loguru import logger
from sympy import QQ
from sympy.polys.rings import xring

from .eulerchar import CONDITIONAL_HYPOTHESIS, WEIGHTS, ec_weight
from .exceptions import BudgetExceeded, ConsistencyError, CoverageError, InvalidSpec
from .famod import FAModuleSpec, c_arity
from .graphs.enumerate import vanishing_predicate
from .symcore import IrrDecomposition, Partition, SymFunction, r_lambda

MAX_FORM_DEGREE = 20


@dataclass(frozen=True)
class FormsClass:
    """
    The FA-module of holomorphic ``k``-forms in genus ``g``.

    Attributes:
        spec (FAModuleSpec | None): The module, ``None`` when it vanishes.
        conditional (bool): Whether the statement depends on the genus-three hypothesis.
    """

    spec: Optional[FAModuleSpec]
    conditional: bool = False

    @property
    def is_zero(self) -> bool:
        return self.spec is None


def classify_forms(k: int, g: int) -> FormsClass:
    """
    The FA-module of ``H^{k,0}`` in genus ``g`` for ``k <= 20``.

    >>> classify_forms(17, 2).spec.label()
    'C(2,2,2,2,2,2,2)'
    >>> classify_forms(16, 1).is_zero
    True

    Raises:
        InvalidSpec: For ``k > 20`` or a negative argument.
    """
    if k > MAX_FORM_DEGREE:
        raise InvalidSpec(f"Forms of degree {k} > {MAX_FORM_DEGREE} are not classified")
    if k < 0 or g < 0:
        raise InvalidSpec(f"Invalid degree/genus ({k},{g})")
    conditional = k >= 19 and g >= 3
    if g == 1 and k in (11, 15, 17, 19):
        return FormsClass(FAModuleSpec.tilde(k))
    if g == 2 and k == 17:
        return FormsClass(FAModuleSpec.c([2] * 7))
    if g == 2 and k == 19:
        return FormsClass(FAModuleSpec.c([2] * 5 + [1] * 6))
    return FormsClass(None, conditional)


def cusp_form_count(k: int) -> int:
    """
    ``N_k``, the dimension of level one cusp forms of weight ``k + 1``.

    >>> [cusp_form_count(k) for k in (9, 11, 13, 15, 23)]
    [0, 1, 0, 1, 2]
    """
    weight = k + 1
    if weight < 12 or weight % 2:
        return 0
    if weight % 12 == 2:
        return weight // 12 - 1
    return weight // 12


def forms_dimension(g: int, k: int, n: int) -> IrrDecomposition:
    """
    ``H^{k,0}`` of the compactified moduli space of genus ``g`` with ``n`` points.

    Raises:
        InvalidSpec: Outside genus one and two, or for odd ``k`` in genus two
            other than 17 and 19.
    """
    if n < 0 or k < 0:
        raise InvalidSpec(f"Invalid degree/arity ({k},{n})")
    if g == 1:
        count = cusp_form_count(k)
        if not count or n < k or k < 1:
            return IrrDecomposition.zero(n)
        return IrrDecomposition.irreducible(Partition([n - k + 1] + [1] * (k - 1))).scale(count)
    if g == 2:
        if k % 2 == 0:
            return IrrDecomposition.zero(n)
        if k == 17:
            return c_arity(FAModuleSpec.c([2] * 7), n)
        if k == 19:
            return c_arity(FAModuleSpec.c([2] * 5 + [1] * 6), n)
    raise InvalidSpec(f"forms_dimension does not cover genus {g}, degree {k}")


def weight_vanishes(k: int, g: int, n: int) -> bool:
    """
    The vanishing bound for weight 17: ``3g + 2n + min(1, g - 2) < 34``.

    >>> weight_vanishes(17, 11, 0), weight_vanishes(17, 10, 0)
    (False, True)
    """
    if k != 17:
        return False
    return 3 * g + 2 * n + min(1, g - 2) < 34


def low_genus_tilde(k: int, g: int) -> Optional[dict[int, int]]:
    """
    ``H(G_{Tilde(k)}(g, 0))`` where it is known: zero for ``3g < 2k`` and one
    class in degree ``k`` at ``g = ceil(2k/3)``. ``None`` elsewhere.

    >>> low_genus_tilde(17, 12), low_genus_tilde(17, 11), low_genus_tilde(17, 13)
    ({17: 1}, {}, None)
    """
    if 3 * g < 2 * k:
        return {}
    if g == ceil(2 * k / 3):
        return {k: 1}
    return None


def _cell_excess(h: int, n: int) -> int:
    return 3 * (h - 1) + n


@dataclass
class W0Dataset:
    """
    Weight-zero compactly supported cohomology of ``M_{h,n}``, degree by degree.

    Attributes:
        cells (dict[tuple[int, int], list[tuple[int, IrrDecomposition]]]): Per ``(h, n)``.
        source (str): Where the numbers come from.
        max_excess (int): Every stable ``(h, n)`` with ``3(h - 1) + n <= max_excess``
            is covered; absent cells inside the bound are zero.
    """

    cells: dict = field(default_factory=dict)
    source: str = ""
    max_excess: int = -1

    def covers(self, h: int, n: int) -> bool:
        return _cell_excess(h, n) <= self.max_excess

    def cell(self, h: int, n: int) -> list[tuple[int, IrrDecomposition]]:
        """
        Raises:
            CoverageError: If the cell lies outside the declared coverage.
        """
        if not self.covers(h, n) and (h, n) not in self.cells:
            raise CoverageError([(h, n)])
        return self.cells.get((h, n), [])

    def require(self, bound: int, genus: int, arity: int) -> None:
        """
        Checks every stable cell of excess at most ``bound`` that glues to
        genus at most ``genus`` with at most ``arity`` legs.

        Raises:
            CoverageError: Listing the cells that are not covered.
        """
        missing = []
        for excess in range(self.max_excess + 1, bound + 1):
            for h in range(0, excess // 3 + 2):
                n = excess - 3 * (h - 1)
                if n < 0 or 2 * h + n < 3 or n > arity or h + n - 1 > genus:
                    continue
                if (h, n) not in self.cells:
                    missing.append((h, n))
        if missing:
            raise CoverageError(sorted(missing))

    @classmethod
    def from_json(cls, payload: dict) -> W0Dataset:
        """
        Raises:
            InvalidSpec: On a malformed record or a negative multiplicity.
        """
        cells: dict[tuple[int, int], list] = {}
        try:
            for record in payload["cells"]:
                h, n = int(record["g"]), int(record["n"])
                entries = []
                for item in record["degrees"]:
                    terms = {}
                    for term in item["decomposition"]:
                        mult = int(term["multiplicity"])
                        if mult < 0:
                            raise InvalidSpec(f"Negative multiplicity in W0 cell ({h},{n})")
                        terms[Partition(term["partition"])] = mult
                    entries.append((int(item["degree"]), IrrDecomposition(n, terms)))
                cells[(h, n)] = sorted(entries, key=lambda entry: entry[0])
            return cls(cells, payload.get("source", ""), int(payload.get("max_excess", -1)))
        except (KeyError, TypeError, ValueError) as err:
            raise InvalidSpec(f"Malformed W0 dataset: {err}") from err

    @classmethod
    def load(cls, path: Union[str, Path]) -> W0Dataset:
        with open(path, encoding="utf-8") as handle:
            return cls.from_json(json.load(handle))

    def as_json(self) -> dict:
        return {
            "source": self.source,
            "max_excess": self.max_excess,
            "cells": [
                {
                    "g": h,
                    "n": n,
                    "degrees": [
                        {
                            "degree": degree,
                            "decomposition": [
                                {"partition": list(lam), "multiplicity": mult}
                                for lam, mult in sorted(dec.terms.items(), reverse=True)
                            ],
                        }
                        for degree, dec in entries
                    ],
                }
                for (h, n), entries in sorted(self.cells.items())
            ],
        }


class _GradedSequences:
    """
    Genus- and degree-graded symmetric sequences as polynomials in
    ``p_1..p_N``, a genus variable ``t`` and a degree variable ``y``, cut at
    arity ``N`` and genus ``g``.
    """

    def __init__(self, arity: int, genus: int):
        self.arity = arity
        self.genus = genus
        self.depth = max(arity, 1)
        self.ring, gens = xring([f"p{d}" for d in range(1, self.depth + 1)] + ["t", "y"], QQ)

    def _keep(self, monom) -> bool:
        weight = sum((i + 1) * e for i, e in enumerate(monom[: self.depth]))
        return weight <= self.arity and monom[self.depth] <= self.genus

    def truncate(self, poly):
        return self.ring.from_dict({m: c for m, c in poly.items() if self._keep(m)})

    def term(self, f: SymFunction, genus: int, degree: int):
        """The character ``f`` placed in one genus and one degree."""
        out = {}
        for mu, c in f.in_basis("powersum").coefficients.items():
            monom = [0] * (self.depth + 2)
            for part, mult in mu.counts().items():
                monom[part - 1] = mult
            monom[self.depth] = genus
            monom[self.depth + 1] = degree
            out[tuple(monom)] = c
        return self.truncate(self.ring.from_dict(out))

    def adams(self, poly, d: int):
        """``p_i -> p_{id}``, ``t -> t^d`` and ``y -> (-1)^(d-1) y^d``."""
        out = {}
        for monom, c in poly.items():
            if any(e and (i + 1) * d > self.depth for i, e in enumerate(monom[: self.depth])):
                continue
            new = [0] * (self.depth + 2)
            for i, e in enumerate(monom[: self.depth]):
                if e:
                    new[(i + 1) * d - 1] += e
            new[self.depth] = monom[self.depth] * d
            new[self.depth + 1] = monom[self.depth + 1] * d
            sign = -1 if (d - 1) * monom[self.depth + 1] % 2 else 1
            key = tuple(new)
            out[key] = out.get(key, QQ(0)) + sign * c
        return self.truncate(self.ring.from_dict(out))

    def plethystic_exp(self, poly):
        """``Exp(A) = exp(sum_d psi^d(A)/d)`` for ``A`` of positive genus, with Koszul signs."""
        log = self.ring.zero
        for d in range(1, self.genus + 1):
            log += self.adams(poly, d) * QQ(1, d)
        out = self.ring.one
        power = self.ring.one
        for k in range(1, self.genus + 1):
            power = self.truncate(power * log) * QQ(1, k)
            if not power:
                break
            out += power
        return out

    def graded_character(self, poly, genus: int, arity: int) -> dict[int, SymFunction]:
        """Degree to Frobenius characteristic of the ``(genus, arity)`` part."""
        found: dict[int, dict[Partition, Any]] = {}
        for monom, c in poly.items():
            if monom[self.depth] != genus:
                continue
            mu = Partition.from_counts({i + 1: e for i, e in enumerate(monom[: self.depth]) if e})
            if mu.size != arity:
                continue
            found.setdefault(monom[self.depth + 1], {})[mu] = c
        return {degree: SymFunction("powersum", coeffs).in_basis("schur") for degree, coeffs in found.items()}


def n0_bound(lam: Partition, g: int) -> int:
    """Largest excess of a blown-up component in ``G_lambda(g, 0)``: ``3g + r_lambda - 2|lambda|``."""
    lam = Partition(lam)
    return 3 * g + r_lambda(lam) - 2 * lam.size


def n0_assembly(lam, g: int, data: W0Dataset) -> dict[int, int]:
    """
    ``H(G_lambda(g, 0))`` by degree, as the multiplicity of ``V_lambda`` in
    ``((1 + V_1[-1]) x Exp(W)) (g, |lambda|)``. ``W`` holds the weight-zero data
    with the genus counted after gluing the legs to one vertex, twisted by the
    sign representation and shifted by the arity, plus one-edge generators for
    an ε-ε edge (genus one, arity zero) and an ω-ω edge (genus one, arity two,
    trivial action).

    Raises:
        CoverageError: If the dataset does not reach the excess the assembly needs.
    """
    lam = Partition(lam)
    size = lam.size
    if g < 0:
        raise InvalidSpec(f"Invalid genus {g}")
    bound = n0_bound(lam, g)
    if bound < 0:
        return {}
    data.require(bound, g, size)

    seq = _GradedSequences(size, g)
    base = seq.term(SymFunction.schur(Partition()), 1, 1) + seq.term(SymFunction.schur(Partition([2])), 1, 1)
    for (h, n), entries in sorted(data.cells.items()):
        glued_genus = h + n - 1
        if _cell_excess(h, n) > bound or glued_genus > g or n > size or glued_genus < 1:
            continue
        for degree, dec in entries:
            twisted = SymFunction("schur", {mu.conjugate(): m for mu, m in dec.terms.items()})
            base += seq.term(twisted, glued_genus, degree + n)
    total = seq.truncate((seq.ring.one + seq.term(SymFunction.schur(Partition([1])), 1, 1)) * seq.plethystic_exp(base))
    out = {}
    for degree, character in seq.graded_character(total, g, size).items():
        mult = character.schur_integers().get(lam, 0)
        if mult < 0:
            raise ConsistencyError(f"Negative multiplicity {mult} of {lam.label()} in degree {degree}")
        if mult:
            out[degree] = mult
    logger.debug("n=0 assembly for {} at genus {}: {}", lam.label(), g, out)
    return dict(sorted(out.items()))


@dataclass
class Summand:
    """
    One constituent complex of a Hodge report.

    Attributes:
        spec (FAModuleSpec): The decoration.
        g (int): Genus of the graph complex.
        n (int): Arity.
        source (str): ``"vanishing"``, ``"low_genus"``, ``"n0_assembly"``, ``"cohomology"`` or ``"gap"``.
        decompositions (dict[int, IrrDecomposition]): Graph cohomology by degree.
        detail (str): Why a gap is a gap.
    """

    spec: FAModuleSpec
    g: int
    n: int
    source: str
    decompositions: dict = field(default_factory=dict)
    detail: str = ""

    def as_json(self) -> dict:
        return {
            "spec": self.spec.as_json(),
            "g": self.g,
            "n": self.n,
            "source": self.source,
            "decompositions": {str(e): dec.as_json() for e, dec in sorted(self.decompositions.items())},
            "detail": self.detail,
        }


@dataclass
class HodgeReport:
    """
    ``gr_{k,0} H_c(M_{g,n})`` degree by degree.

    Attributes:
        k (int): The Hodge weight.
        g (int): The genus of ``M_{g,n}``.
        n (int): The number of markings.
        dimensions (dict[int, int]): Nonzero dimensions by cohomological degree.
        decompositions (dict[int, IrrDecomposition]): The ``S_n``-modules.
        conditional (bool): Whether the answer assumes the genus-three hypothesis.
        summands (list[Summand]): Provenance of each constituent complex.
        complete (bool): False when a summand could not be computed.
    """

    k: int
    g: int
    n: int
    dimensions: dict = field(default_factory=dict)
    decompositions: dict = field(default_factory=dict)
    conditional: bool = False
    summands: list = field(default_factory=list)
    complete: bool = True

    @property
    def hypothesis(self) -> Optional[str]:
        return CONDITIONAL_HYPOTHESIS if self.conditional else None

    def euler(self) -> SymFunction:
        total = SymFunction.zero()
        for degree, dec in self.decompositions.items():
            total = total + dec.to_symfunction().scale(-1 if degree % 2 else 1)
        return total

    def as_json(self) -> dict:
        return {
            "k": self.k,
            "g": self.g,
            "n": self.n,
            "complete": self.complete,
            "conditional": self.conditional,
            "hypothesis": self.hypothesis,
            "dimensions": {str(j): d for j, d in sorted(self.dimensions.items())},
            "decompositions": {str(j): dec.as_json() for j, dec in sorted(self.decompositions.items())},
            "summands": [summand.as_json() for summand in self.summands],
        }


def _direct(spec: FAModuleSpec, g: int, n: int, variant: str, use_cache: bool) -> Summand:
    from .homology import compute_report

    try:
        report = compute_report(spec, g, n, variant=variant, use_cache=use_cache)
    except BudgetExceeded as err:
        logger.warning("{} at ({},{}) is over budget: {}", spec.label(), g, n, err)
        return Summand(spec, g, n, "gap", detail=str(err))
    return Summand(spec, g, n, "cohomology", dict(report.decompositions))


def _tilde_summand(k: int, g: int, n: int, use_cache: bool) -> Summand:
    spec = FAModuleSpec.tilde(k)
    if g < 0 or vanishing_predicate(spec, g, n):
        return Summand(spec, g, n, "vanishing")
    if n == 0:
        known = low_genus_tilde(k, g)
        if known is not None:
            decs = {e: IrrDecomposition.irreducible(Partition()).scale(d) for e, d in known.items()}
            return Summand(spec, g, n, "low_genus", decs)
    return _direct(spec, g, n, "full", use_cache)


def _two_column_summand(
    lam: Partition, g: int, n: int, w0: Optional[W0Dataset], use_cache: bool
) -> Summand:
    spec = FAModuleSpec.c(lam)
    if g < 0 or vanishing_predicate(spec, g, n):
        return Summand(spec, g, n, "vanishing")
    if n == 0 and w0 is not None:
        try:
            dims = n0_assembly(lam, g, w0)
        except CoverageError as err:
            return Summand(spec, g, n, "gap", detail=str(err))
        decs = {e: IrrDecomposition.irreducible(Partition()).scale(d) for e, d in dims.items()}
        return Summand(spec, g, n, "n0_assembly", decs)
    return _direct(spec, g, n, "star", use_cache)


def hodge_weight(
    k: int,
    g: int,
    n: int,
    assume_conjecture: bool = False,
    w0: Optional[W0Dataset] = None,
    use_cache: bool = False,
    check_euler: bool = True,
) -> HodgeReport:
    """
    Computes ``gr_{k,0} H_c(M_{g,n})`` for ``k`` in ``{17, 19}``.

    Args:
        k (int): The weight.
        g (int): The genus.
        n (int): The number of markings.
        assume_conjecture (bool): Required for ``k = 19``.
        w0 (W0Dataset | None): Weight-zero data for the ``n = 0`` assembly.
        use_cache (bool): Route direct computations through the persistent cache.
        check_euler (bool): Compare a complete report with the generating function.

    Raises:
        InvalidSpec: For an unsupported weight, or ``k = 19`` without the hypothesis.
        ConsistencyError: If a complete report disagrees with the Euler characteristic.
    """
    if k not in WEIGHTS:
        raise InvalidSpec(f"Weight {k} is not supported; use 17 or 19")
    if g < 0 or n < 0:
        raise InvalidSpec(f"Invalid genus/arity ({g},{n})")
    info = WEIGHTS[k]
    if info["conditional"] and not assume_conjecture:
        raise InvalidSpec(f"Weight {k} depends on {CONDITIONAL_HYPOTHESIS}; pass assume_conjecture")
    report = HodgeReport(k, g, n, conditional=info["conditional"])
    kk, ll = info["two_column"]
    lam = Partition([2] * kk + [1] * ll)
    if weight_vanishes(k, g, n):
        report.summands = [
            Summand(FAModuleSpec.tilde(k), g - 1, n, "vanishing"),
            Summand(FAModuleSpec.c(lam), g - 2, n, "vanishing"),
        ]
        return report

    report.summands = [
        _tilde_summand(k, g - 1, n, use_cache),
        _two_column_summand(lam, g - 2, n, w0, use_cache),
    ]
    for summand in report.summands:
        if summand.source == "gap":
            report.complete = False
            continue
        for e, dec in summand.decompositions.items():
            j = e + k
            report.decompositions[j] = report.decompositions.get(j, IrrDecomposition.zero(n)) + dec
    report.decompositions = {j: dec for j, dec in sorted(report.decompositions.items()) if not dec.is_zero()}
    report.dimensions = {j: dec.dimension() for j, dec in report.decompositions.items()}

    if report.complete and check_euler:
        expected = ec_weight(k, g, n, assume_conjecture).cell(g, n)
        if report.euler() != expected:
            raise ConsistencyError(
                f"gr_{k},0 H_c(M_{g},{n}): Euler characteristic {report.euler().as_json()} "
                f"differs from the generating function {expected.as_json()}"
            )
    elif not report.complete:
        logger.warning("Report for weight {} at ({},{}) is partial", k, g, n)
    return report


def hodge_table(
    k: int, g_values: Iterable[int], n_values: Iterable[int], **kwargs
) -> list[HodgeReport]:
    return [hodge_weight(k, g, n, **kwargs) for g in g_values for n in n_values]
