"""
Arity-wise data of the FA-modules ``C(lambda)``, ``Tilde(m)`` and the product
modules ``Product(a_1, ..., a_k)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

from sympy.combinatorics import Permutation

from .exceptions import InvalidSpec
from .symcore import IrrDecomposition, Partition, hook_dimension, induce_decomposition

KINDS = ("C", "Tilde", "Product")


@dataclass(frozen=True)
class FAModuleSpec:
    """
    One of the three module kinds the graph complexes are built from.

    Attributes:
        kind (str): ``"C"``, ``"Tilde"`` or ``"Product"``.
        partition (Partition): The shape for ``C``.
        m (int): The column length for ``Tilde``.
        parts (tuple[int, ...]): Column lengths of the factors for ``Product``.
    """

    kind: str
    partition: Partition = field(default_factory=Partition)
    m: int = 0
    parts: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"Unknown module kind {self.kind}")
        if self.kind == "Tilde" and self.m < 1:
            raise InvalidSpec("Tilde(m) needs m >= 1")
        if self.kind == "Product":
            if any(a < 1 for a in self.parts):
                raise InvalidSpec(f"Product factors must be positive: {self.parts}")
            object.__setattr__(self, "parts", tuple(self.parts))
        if self.kind == "C":
            object.__setattr__(self, "partition", Partition(self.partition))

    @classmethod
    def c(cls, lam) -> FAModuleSpec:
        return cls("C", partition=Partition(lam))

    @classmethod
    def tilde(cls, m: int) -> FAModuleSpec:
        return cls("Tilde", m=m)

    @classmethod
    def product(cls, *parts: int) -> FAModuleSpec:
        return cls("Product", parts=tuple(parts))

    @property
    def weight(self) -> int:
        if self.kind == "C":
            return self.partition.size
        if self.kind == "Tilde":
            return self.m
        return sum(self.parts)

    @property
    def colors(self) -> tuple[int, ...]:
        """ω-leg counts per color when the module is realized by colored legs."""
        if self.kind == "Product":
            return self.parts
        if self.kind == "C" and self.partition.columns() <= 1:
            return (self.partition.size,) if self.partition.size else ()
        raise InvalidSpec(f"{self.label()} is not a colored-leg module")

    def label(self) -> str:
        if self.kind == "C":
            return f"C({self.partition.label()})"
        if self.kind == "Tilde":
            return f"Tilde({self.m})"
        return f"Product({','.join(str(a) for a in self.parts)})"

    def as_json(self) -> dict:
        if self.kind == "C":
            return {"kind": "C", "partition": list(self.partition)}
        if self.kind == "Tilde":
            return {"kind": "Tilde", "m": self.m}
        return {"kind": "Product", "parts": list(self.parts)}

    @classmethod
    def from_json(cls, payload: dict) -> FAModuleSpec:
        kind = payload.get("kind")
        if kind == "C":
            return cls.c(payload.get("partition", ()))
        if kind == "Tilde":
            return cls.tilde(int(payload["m"]))
        if kind == "Product":
            return cls.product(*payload.get("parts", ()))
        raise InvalidSpec(f"Unknown module kind {kind}")


def c_arity(spec: FAModuleSpec, n: int) -> IrrDecomposition:
    """
    The ``S_n``-representation of a module at arity ``n``.

    >>> c_arity(FAModuleSpec.c([1, 1]), 4).as_json()
    {'3,1': 1, '2,1,1': 1}
    >>> c_arity(FAModuleSpec.tilde(3), 5).as_json()
    {'3,1,1': 1}
    """
    if n < spec.weight:
        return IrrDecomposition.zero(n)
    if spec.kind == "Tilde":
        return IrrDecomposition.irreducible(Partition([n - spec.m + 1] + [1] * (spec.m - 1)))
    if spec.kind == "C":
        base = IrrDecomposition.irreducible(spec.partition)
    else:
        base = IrrDecomposition.irreducible(Partition())
        for a in spec.parts:
            base = induce_decomposition(base, Partition([1] * a))
    return induce_decomposition(base, Partition([n - spec.weight]))


@dataclass(frozen=True)
class SummandBasis:
    """
    The subset summands of ``C(lambda)(r)``: one copy of ``V_lambda`` per
    subset ``A`` of ``{0..r-1}`` with ``|A| = |lambda|``.

    Attributes:
        weight (int): ``|lambda|``.
        arity (int): ``r``.
    """

    weight: int
    arity: int

    @property
    def subsets(self) -> tuple[tuple[int, ...], ...]:
        return _subsets(self.arity, self.weight)

    def index(self, subset) -> int:
        return _subset_index(self.arity, self.weight)[tuple(sorted(subset))]

    def dimension(self, lam: Partition) -> int:
        return comb(self.arity, self.weight) * hook_dimension(lam)

    def __len__(self):
        return comb(self.arity, self.weight)


@lru_cache(maxsize=None)
def _subsets(r: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(r), m))


@lru_cache(maxsize=None)
def _subset_index(r: int, m: int) -> dict[tuple[int, ...], int]:
    return {subset: i for i, subset in enumerate(_subsets(r, m))}


def permutation_sign(perm) -> int:
    return Permutation(list(perm)).signature() if len(perm) > 1 else 1


@dataclass(frozen=True)
class SummandMap:
    """
    The action of a surjection on subset summands.

    Attributes:
        weight (int): ``|lambda|``.
        source_arity (int): Arity of the domain.
        target_arity (int): Arity of the codomain.
        entries (dict[int, tuple[int, tuple[int, ...]]]): Source summand index mapped to the
            target index and the permutation of ``V_lambda`` labels it induces. Summands
            sent to zero are absent.
    """

    weight: int
    source_arity: int
    target_arity: int
    entries: dict

    def compose(self, first: SummandMap) -> SummandMap:
        """Returns ``self o first``."""
        if first.target_arity != self.source_arity:
            raise InvalidSpec("Arity mismatch in composition")
        out = {}
        for src, (mid, perm1) in first.entries.items():
            if mid in self.entries:
                tgt, perm2 = self.entries[mid]
                out[src] = (tgt, tuple(perm2[i] for i in perm1))
        return SummandMap(self.weight, first.source_arity, self.target_arity, out)

    def matrix(self, lam: Partition) -> dict[tuple[int, int], int]:
        """
        Sparse ``(row, col) -> entry`` matrix for one-row or one-column shapes,
        where ``V_lambda`` is one-dimensional.

        Raises:
            InvalidSpec: If ``V_lambda`` has dimension > 1.
        """
        lam = Partition(lam)
        if hook_dimension(lam) != 1:
            raise InvalidSpec(f"Explicit matrices need a one-dimensional V_lambda, got {lam.label()}")
        signed = len(lam) > 1
        return {
            (tgt, src): permutation_sign(perm) if signed else 1
            for src, (tgt, perm) in self.entries.items()
        }


def surjection_action(weight: int, surjection: tuple[int, ...]) -> SummandMap:
    """
    Action of a surjection ``f: {0..r-1} -> {0..s-1}`` on subset summands.
    A summand ``A`` goes to ``f(A)`` when ``f`` is injective on ``A`` and to
    zero otherwise.
    """
    r = len(surjection)
    s = max(surjection) + 1 if surjection else 0
    if set(surjection) != set(range(s)):
        raise InvalidSpec(f"{surjection} is not a surjection")
    entries = {}
    index = _subset_index(s, weight)
    for src, subset in enumerate(_subsets(r, weight)):
        images = [surjection[a] for a in subset]
        if len(set(images)) < weight:
            continue
        target = tuple(sorted(images))
        perm = tuple(target.index(x) for x in images)
        entries[src] = (index[target], perm)
    return SummandMap(weight, r, s, entries)


def collapse_surjection(r: int, block) -> tuple[int, ...]:
    """
    The surjection collapsing ``block`` onto the slot of its smallest element,
    keeping the order of everything else.
    """
    block = set(block)
    if not block or not block <= set(range(r)):
        raise InvalidSpec(f"Invalid block {sorted(block)} for arity {r}")
    out = []
    next_slot = 0
    anchor_slot = None
    for i in range(r):
        if i in block:
            if anchor_slot is None:
                anchor_slot = next_slot
                next_slot += 1
            out.append(anchor_slot)
        else:
            out.append(next_slot)
            next_slot += 1
    return tuple(out)


def collapse_action(lam, r: int, block) -> SummandMap:
    """
    Collapses ``block`` to a single new point. A summand meeting the block
    twice or more goes to zero; one meeting it once has that point replaced by
    the new one.

    Explicit matrices (:meth:`SummandMap.matrix`) exist only where ``V_lambda``
    is one-dimensional, that is for one row or one column. Any other ``lambda``
    is handled through its signed expansion into products of sign
    representations, each of which is one-dimensional.

    >>> m = collapse_action(Partition([1, 1]), 3, {0, 1})
    >>> sorted(m.entries.items())
    [(1, (0, (0, 1))), (2, (0, (0, 1)))]
    """
    lam = Partition(lam)
    return surjection_action(lam.size, collapse_surjection(r, block))


@dataclass(frozen=True)
class ResolutionStep:
    """
    One term ``C(1^j)`` of the finite resolution of ``Tilde(m)``.

    Attributes:
        spec (FAModuleSpec): The module ``C(1^j)``.
        j (int): Its column length.
    """

    spec: FAModuleSpec
    j: int

    def boundary(self, n: int) -> dict[tuple[int, int], int]:
        """
        Matrix of ``C(1^(j+1))(n) -> C(1^j)(n)``, removing one marked point with
        the alternating sign of its position.
        """
        return resolution_boundary(self.j, n)


def resolution_boundary(j: int, n: int) -> dict[tuple[int, int], int]:
    index = _subset_index(n, j)
    out = {}
    for col, subset in enumerate(_subsets(n, j + 1)):
        for pos in range(len(subset)):
            face = subset[:pos] + subset[pos + 1 :]
            out[(index[face], col)] = (-1) ** pos
    return out


def tilde_resolution(m: int) -> list[ResolutionStep]:
    """
    The resolution ``C(1^(m-1)) -> ... -> C(1^0)`` of ``Tilde(m)``.

    >>> [step.spec.label() for step in tilde_resolution(3)]
    ['C(1,1)', 'C(1)', 'C()']
    """
    if m < 1:
        raise InvalidSpec("Tilde(m) needs m >= 1")
    return [ResolutionStep(FAModuleSpec.c([1] * j), j) for j in range(m - 1, -1, -1)]


def jacobi_trudi_products(lam) -> list[tuple[int, FAModuleSpec]]:
    """
    Writes ``V_lambda`` as a signed sum of products of sign representations
    using ``s_lambda = det(e_{lambda'_i - i + j})``. Each entry is a sign and
    the ``Product`` module of the nonzero column lengths.

    >>> [(s, p.label()) for s, p in jacobi_trudi_products(Partition([2] * 7))]
    [(1, 'Product(7,7)'), (-1, 'Product(8,6)')]
    """
    lam = Partition(lam)
    conj = lam.conjugate()
    size = len(conj)
    totals: Counter = Counter()
    for sigma in permutations(range(size)):
        indices = [conj[i] - i + sigma[i] for i in range(size)]
        if any(k < 0 for k in indices):
            continue
        parts = tuple(sorted((k for k in indices if k > 0), reverse=True))
        totals[parts] += permutation_sign(sigma)
    return [
        (sign, FAModuleSpec.product(*parts))
        for parts, sign in sorted(totals.items(), key=lambda kv: kv[0][0] if kv[0] else 0)
        if sign
    ]
