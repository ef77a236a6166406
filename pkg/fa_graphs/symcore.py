"""
Partitions, characters of the symmetric groups and symmetric functions.

Everything here is exact: multiplicities are Python integers and symmetric
function coefficients are elements of sympy's ``QQ`` domain.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod
from typing import Any, Iterable, Iterator, Mapping

from sympy import QQ
from sympy.utilities.iterables import partitions as _sympy_partitions

from .conf import get_setting
from .exceptions import InvalidSpec


class Partition(tuple):
    """
    An integer partition stored as a weakly decreasing tuple of positive parts.

    >>> Partition([1, 2, 2])
    Partition(2, 2, 1)
    >>> Partition([2, 1]).conjugate()
    Partition(2, 1)
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = sorted((int(p) for p in parts), reverse=True)
        if parts and parts[-1] < 0:
            raise InvalidSpec(f"Partition parts must be positive: {parts}")
        return super().__new__(cls, (p for p in parts if p > 0))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> Partition:
        """Builds a partition from a ``{part: multiplicity}`` map."""
        return cls(p for p, m in counts.items() for _ in range(m))

    @classmethod
    def parse(cls, text: str) -> Partition:
        """
        Parses ``"2,2,1"``, ``"2^7"`` or ``"2^5,1^6"`` style notation.

        >>> Partition.parse("2^2,1")
        Partition(2, 2, 1)
        """
        text = text.strip()
        if not text:
            return cls()
        parts: list[int] = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if "^" in chunk:
                base, exp = chunk.split("^", 1)
                parts.extend([int(base)] * int(exp))
            else:
                parts.append(int(chunk))
        return cls(parts)

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> Partition:
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > i) for i in range(self[0]))

    def counts(self) -> Counter:
        return Counter(self)

    def contains(self, other: Partition) -> bool:
        """True when the Young diagram of ``other`` fits inside this one."""
        if len(other) > len(self):
            return False
        return all(o <= s for o, s in zip(other, self))

    def is_hook(self) -> bool:
        return len(self) <= 1 or all(p == 1 for p in self[1:])

    def columns(self) -> int:
        return self[0] if self else 0

    def label(self) -> str:
        """Comma separated form used as a JSON key."""
        return ",".join(str(p) for p in self)

    def __repr__(self):  # pragma: nocover
        return f"Partition({', '.join(str(p) for p in self)})"


def partitions(n: int) -> Iterator[Partition]:
    """Yields all partitions of ``n`` in sympy's enumeration order."""
    for counts in _sympy_partitions(n):
        yield Partition.from_counts(counts)


def z_value(mu: Partition) -> int:
    """Size of the centralizer of a permutation of cycle type ``mu``."""
    return prod(part**m * factorial(m) for part, m in mu.counts().items())


def class_size(mu: Partition) -> int:
    return factorial(mu.size) // z_value(mu)


def hook_dimension(lam: Partition) -> int:
    """
    Dimension of the Specht module by the hook length formula.

    >>> hook_dimension(Partition([2] * 7))
    429
    """
    lam = Partition(lam)
    conj = lam.conjugate()
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return factorial(lam.size) // hooks


def _beta_set(lam: Partition) -> tuple[int, ...]:
    length = len(lam)
    return tuple(sorted(part + length - 1 - i for i, part in enumerate(lam)))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        height = sum(1 for c in beta if target < c < b)
        moved = tuple(sorted((beads - {b}) | {target}))
        total += (-1) ** height * _mn(moved, rest)
    return total


def character(lam: Partition, mu: Partition) -> int:
    """
    Character of the Specht module ``lam`` on the class of cycle type ``mu``,
    by the Murnaghan-Nakayama rule on beta sets.

    >>> character(Partition([2, 1]), Partition([3]))
    -1

    Raises:
        InvalidSpec: If the sizes differ.
    """
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise InvalidSpec(f"Size mismatch between {lam} and {mu}")
    return _mn(_beta_set(lam), tuple(mu))


@dataclass(frozen=True)
class IrrDecomposition:
    """
    A representation of ``S_n`` as multiplicities of irreducibles. Virtual
    representations (negative multiplicities) are allowed as intermediate
    values; ``is_genuine`` tells them apart.

    Attributes:
        n (int): The arity.
        terms (dict[Partition, int]): Nonzero multiplicities keyed by partition of n.
    """

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for lam, mult in self.terms.items():
            lam = Partition(lam)
            if lam.size != self.n:
                raise InvalidSpec(f"{lam} is not a partition of {self.n}")
            if mult:
                clean[lam] = int(mult)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, n: int) -> IrrDecomposition:
        return cls(n, {})

    @classmethod
    def irreducible(cls, lam: Partition) -> IrrDecomposition:
        lam = Partition(lam)
        return cls(lam.size, {lam: 1})

    def dimension(self) -> int:
        return sum(mult * hook_dimension(lam) for lam, mult in self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def is_genuine(self) -> bool:
        return all(mult > 0 for mult in self.terms.values())

    def __add__(self, other: IrrDecomposition) -> IrrDecomposition:
        if self.n != other.n:
            raise InvalidSpec(f"Cannot add arities {self.n} and {other.n}")
        merged = Counter(self.terms)
        merged.update(other.terms)
        return IrrDecomposition(self.n, dict(merged))

    def __neg__(self) -> IrrDecomposition:
        return IrrDecomposition(self.n, {lam: -m for lam, m in self.terms.items()})

    def __sub__(self, other: IrrDecomposition) -> IrrDecomposition:
        return self + (-other)

    def scale(self, factor: int) -> IrrDecomposition:
        return IrrDecomposition(self.n, {lam: factor * m for lam, m in self.terms.items()})

    def to_symfunction(self) -> SymFunction:
        return SymFunction("schur", {lam: QQ(m) for lam, m in self.terms.items()})

    def as_json(self) -> dict[str, int]:
        return {lam.label(): m for lam, m in sorted(self.terms.items(), reverse=True)}

    @classmethod
    def from_json(cls, n: int, payload: Mapping[str, int]) -> IrrDecomposition:
        return cls(n, {Partition.parse(label): int(m) for label, m in payload.items()})


def _horizontal_strips(shape: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
    rows = list(shape) + [0]

    def place(i: int, remaining: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if i == len(rows):
            if remaining == 0:
                yield tuple(r for r in acc if r > 0)
            return
        cap = remaining if i == 0 else min(remaining, rows[i - 1] - rows[i])
        for add in range(cap, -1, -1):
            yield from place(i + 1, remaining - add, acc + [rows[i] + add])

    yield from place(0, k, [])


def _is_lattice(filling: list[list[int]]) -> bool:
    seen: Counter = Counter()
    for row in filling:
        for label in reversed(row):
            seen[label] += 1
            if label > 0 and seen[label] > seen[label - 1]:
                return False
    return True


@lru_cache(maxsize=4096)
def _lr(alpha: tuple[int, ...], beta: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    result: Counter = Counter()

    def grow(shape: tuple[int, ...], filling: list[list[int]], label: int) -> None:
        if label == len(beta):
            result[shape] += 1
            return
        for new_shape in _horizontal_strips(shape, beta[label]):
            new_filling = [list(row) for row in filling]
            while len(new_filling) < len(new_shape):
                new_filling.append([])
            for r, length in enumerate(new_shape):
                old = shape[r] if r < len(shape) else 0
                new_filling[r].extend([label] * (length - old))
            if _is_lattice(new_filling):
                grow(new_shape, new_filling, label + 1)

    grow(alpha, [[] for _ in alpha], 0)
    return tuple(sorted(result.items()))


def induction_product(alpha: Partition, beta: Partition) -> IrrDecomposition:
    """
    Decomposes ``Ind(V_alpha x V_beta)`` with the Littlewood-Richardson rule.

    >>> induction_product(Partition([1, 1]), Partition([2])).as_json()
    {'3,1': 1, '2,1,1': 1}
    """
    alpha, beta = Partition(alpha), Partition(beta)
    terms = {Partition(shape): c for shape, c in _lr(tuple(alpha), tuple(beta))}
    return IrrDecomposition(alpha.size + beta.size, terms)


def induce_decomposition(dec: IrrDecomposition, beta: Partition) -> IrrDecomposition:
    """Extends :func:`induction_product` linearly in the first factor."""
    beta = Partition(beta)
    out = IrrDecomposition.zero(dec.n + beta.size)
    for lam, mult in dec.terms.items():
        out = out + induction_product(lam, beta).scale(mult)
    return out


@dataclass(frozen=True)
class SymFunction:
    """
    A symmetric function with exact rational coefficients.

    Attributes:
        basis (str): Either ``"schur"`` or ``"powersum"``.
        coefficients (dict[Partition, QQ]): Schur index or power-sum monomial ``p_mu``.
    """

    basis: str
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("schur", "powersum"):
            raise InvalidSpec(f"Unknown basis {self.basis}")
        clean = {}
        for mu, c in self.coefficients.items():
            c = QQ.convert(c)
            if c:
                clean[Partition(mu)] = c
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def zero(cls, basis: str = "schur") -> SymFunction:
        return cls(basis, {})

    @classmethod
    def power(cls, mu: Partition) -> SymFunction:
        return cls("powersum", {Partition(mu): QQ(1)})

    @classmethod
    def schur(cls, lam: Partition) -> SymFunction:
        return cls("schur", {Partition(lam): QQ(1)})

    def is_zero(self) -> bool:
        return not self.coefficients

    def degrees(self) -> set[int]:
        return {mu.size for mu in self.coefficients}

    def homogeneous_part(self, n: int) -> SymFunction:
        return SymFunction(self.basis, {mu: c for mu, c in self.coefficients.items() if mu.size == n})

    def _combine(self, other: SymFunction, sign: int) -> SymFunction:
        other = other.in_basis(self.basis)
        merged = dict(self.coefficients)
        for mu, c in other.coefficients.items():
            merged[mu] = merged.get(mu, QQ(0)) + sign * c
        return SymFunction(self.basis, merged)

    def __add__(self, other: SymFunction) -> SymFunction:
        return self._combine(other, 1)

    def __sub__(self, other: SymFunction) -> SymFunction:
        return self._combine(other, -1)

    def __neg__(self) -> SymFunction:
        return self.scale(-1)

    def scale(self, factor: Any) -> SymFunction:
        factor = QQ.convert(factor)
        return SymFunction(self.basis, {mu: factor * c for mu, c in self.coefficients.items()})

    def __mul__(self, other: SymFunction) -> SymFunction:
        left = self.in_basis("powersum")
        right = other.in_basis("powersum")
        out: dict[Partition, Any] = {}
        for mu, a in left.coefficients.items():
            for nu, b in right.coefficients.items():
                key = Partition(tuple(mu) + tuple(nu))
                out[key] = out.get(key, QQ(0)) + a * b
        return SymFunction("powersum", out)

    def in_basis(self, basis: str) -> SymFunction:
        if basis == self.basis:
            return self
        return schur_powersum_convert(self, basis)

    def schur_integers(self) -> dict[Partition, int]:
        """
        Schur coefficients as integers.

        Raises:
            InvalidSpec: If a coefficient is not integral.
        """
        out = {}
        for lam, c in self.in_basis("schur").coefficients.items():
            if QQ.denom(c) != 1:
                raise InvalidSpec(f"Non-integral Schur coefficient {c} at {lam}")
            out[lam] = int(QQ.numer(c))
        return out

    def to_decomposition(self, n: int) -> IrrDecomposition:
        return IrrDecomposition(n, self.homogeneous_part(n).schur_integers())

    def as_json(self) -> dict[str, str]:
        """
        Coefficients keyed by partition label, rationals as ``"num/den"``.

        >>> SymFunction("schur", {Partition([1, 1]): QQ(-2, 3)}).as_json()
        {'1,1': '-2/3'}
        """
        return {mu.label(): rational_str(c) for mu, c in sorted(self.coefficients.items(), reverse=True)}

    @classmethod
    def from_json(cls, basis: str, payload: Mapping[str, str]) -> SymFunction:
        return cls(basis, {Partition.parse(label): parse_rational(text) for label, text in payload.items()})

    def __eq__(self, other):
        if not isinstance(other, SymFunction):
            return NotImplemented
        return self.coefficients == other.in_basis(self.basis).coefficients

    __hash__ = None  # type: ignore[assignment]


def rational_str(c: Any) -> str:
    """
    >>> rational_str(QQ(3, 1)), rational_str(QQ(-1, 2))
    ('3', '-1/2')
    """
    c = QQ.convert(c)
    num, den = int(QQ.numer(c)), int(QQ.denom(c))
    return str(num) if den == 1 else f"{num}/{den}"


def parse_rational(text: Any) -> Any:
    if isinstance(text, int):
        return QQ(text)
    num, _, den = str(text).partition("/")
    return QQ(int(num), int(den or 1))


def exponent_vector(mu: Partition, depth: int) -> tuple[int, ...]:
    """Exponents of ``p_1 .. p_depth`` in the power-sum monomial ``p_mu``."""
    counts = Partition(mu).counts()
    return tuple(counts.get(d, 0) for d in range(1, depth + 1))


def schur_powersum_convert(f: SymFunction, target: str) -> SymFunction:
    """
    Converts between the Schur and power-sum bases with the character table.

    >>> s11 = SymFunction.schur(Partition([1, 1]))
    >>> sorted((mu.label(), str(c)) for mu, c in schur_powersum_convert(s11, "powersum").coefficients.items())
    [('1,1', '1/2'), ('2', '-1/2')]

    Raises:
        InvalidSpec: If the degree exceeds the configured bound.
    """
    if target == f.basis:
        return f
    max_degree = get_setting("MAX_SYM_DEGREE")
    for n in f.degrees():
        if n > max_degree:
            raise InvalidSpec(f"Degree {n} exceeds MAX_SYM_DEGREE={max_degree}")
    out: dict[Partition, Any] = {}
    if target == "powersum":
        for lam, c in f.coefficients.items():
            for mu in partitions(lam.size):
                chi = character(lam, mu)
                if chi:
                    out[mu] = out.get(mu, QQ(0)) + c * QQ(chi, z_value(mu))
    else:
        for mu, c in f.coefficients.items():
            for lam in partitions(mu.size):
                chi = character(lam, mu)
                if chi:
                    out[lam] = out.get(lam, QQ(0)) + c * chi
    return SymFunction(target, out)


@lru_cache(maxsize=None)
def _wedge_sym2(r: int) -> tuple[tuple[Partition, int], ...]:
    # e_r[h_2] = sum over mu |- r of sign(mu)/z_mu prod_i (p_{mu_i}^2 + p_{2 mu_i}) / 2
    total = SymFunction.zero("powersum")
    for mu in partitions(r):
        sign = (-1) ** (r - len(mu))
        term = SymFunction("powersum", {Partition(): QQ(sign, z_value(mu))})
        for part in mu:
            h2 = SymFunction("powersum", {Partition([part, part]): QQ(1, 2), Partition([2 * part]): QQ(1, 2)})
            term = term * h2
        total = total + term
    return tuple(sorted(total.schur_integers().items()))


def plethysm_wedge_sym2(r: int) -> IrrDecomposition:
    """
    Decomposes ``V_{1^r} o V_2``, the sign-twisted induction from the wreath
    product ``S_2 wr S_r`` to ``S_{2r}``.

    >>> plethysm_wedge_sym2(2).as_json()
    {'3,1': 1}
    """
    return IrrDecomposition(2 * r, dict(_wedge_sym2(r)))


@lru_cache(maxsize=None)
def r_lambda(lam: Partition) -> int:
    """
    The largest ``r <= |lam|/2`` such that some constituent of
    ``V_{1^r} o V_2`` fits inside ``lam``.

    >>> r_lambda(Partition([2] * 7))
    1
    """
    lam = Partition(lam)
    for r in range(lam.size // 2, 0, -1):
        if any(lam.contains(nu) for nu in plethysm_wedge_sym2(r).terms):
            return r
    return 0
