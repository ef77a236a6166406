"""
Equivariant Euler characteristics of the graph complexes from their closed
form generating functions.

The generating functions live in Laurent series in ``u`` whose coefficients are
polynomials in the power sums ``p_d`` and the marker variables ``w_i``. Every
computation is truncated three ways, each along an ideal: ``u``-order at
``g_max + n_max``, ``p``-weight (``p_d`` has weight ``d``) at ``n_max``, and the
degree of ``w_i`` at the largest exponent the extraction reads.

``log U_l(X)`` is expanded as ``sum_j a_j(u) X^j`` where the ``a_j`` are scalar
series in ``z = 1/E_l``; ``a_j`` has valuation at least ``(j - 1) l``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Any, Iterable, Optional

from loguru import logger
from sympy import QQ, bernoulli, divisors, factorint
from sympy.polys.rings import xring

from .exceptions import InvalidSpec
from .symcore import Partition, SymFunction, parse_rational

WEIGHTS = {
    17: {"tilde": 17, "two_column": (7, 0), "conditional": False},
    19: {"tilde": 19, "two_column": (5, 6), "conditional": True},
}

CONDITIONAL_HYPOTHESIS = "H^{19,0}(M̄_{3,15}) = 0"


def mobius(n: int) -> int:
    """
    >>> [mobius(k) for k in range(1, 7)]
    [1, -1, -1, 0, -1, 1]
    """
    factors = factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


class CoefficientRing:
    """
    ``QQ[p_1..p_D, w_1..w_k]`` truncated to ``p``-weight ``<= n_max`` and
    ``w_i``-degree ``<= caps[i]``.

    Attributes:
        n_max (int): The largest arity read from the series.
        caps (tuple[int, ...]): Degree caps of the marker variables.
    """

    def __init__(self, n_max: int, caps: Iterable[int]):
        self.n_max = n_max
        self.caps = tuple(caps)
        self.depth = max(n_max, 1)
        names = [f"p{d}" for d in range(1, self.depth + 1)] + [f"w{i}" for i in range(1, len(self.caps) + 1)]
        self.ring, gens = xring(names, QQ)
        self.p = gens[: self.depth]
        self.w = gens[self.depth :]

    @property
    def zero(self):
        return self.ring.zero

    @property
    def one(self):
        return self.ring.one

    def power_sum(self, d: int):
        return self.p[d - 1] if d <= self.n_max else self.ring.zero

    def _keep(self, monom: tuple[int, ...]) -> bool:
        weight = sum((i + 1) * e for i, e in enumerate(monom[: self.depth]))
        if weight > self.n_max:
            return False
        return all(e <= cap for e, cap in zip(monom[self.depth :], self.caps))

    def truncate(self, poly):
        if not hasattr(poly, "ring"):
            return poly
        if all(self._keep(monom) for monom in poly):
            return poly
        return self.ring.from_dict({monom: c for monom, c in poly.items() if self._keep(monom)})

    def marker_coefficient(self, poly, exponents: tuple[int, ...]) -> dict[Partition, Any]:
        """The coefficient of ``w^exponents`` in ``poly``, as ``{p-monomial: rational}``."""
        out = {}
        if not hasattr(poly, "ring"):
            if poly and not any(exponents):
                out[Partition()] = QQ.convert(poly)
            return out
        for monom, c in poly.items():
            if tuple(monom[self.depth :]) != tuple(exponents):
                continue
            mu = Partition.from_counts({d + 1: e for d, e in enumerate(monom[: self.depth]) if e})
            out[mu] = out.get(mu, QQ(0)) + c
        return out


class TruncatedLaurentSeries:
    """
    A Laurent series in ``u`` truncated above ``order``.

    All series entering one computation share the truncation order; a factor
    with negative valuation is taken to be exact (a Laurent polynomial), so
    products stay correct up to ``order``.

    Attributes:
        coefficients (dict[int, Any]): Exponent to coefficient, rationals or ring elements.
        order (int): Largest exponent kept.
        ring (CoefficientRing | None): Truncates polynomial coefficients after products.
    """

    __slots__ = ("coefficients", "order", "ring")

    def __init__(self, coefficients: Optional[dict] = None, order: int = 0, ring: Optional[CoefficientRing] = None):
        self.order = order
        self.ring = ring
        self.coefficients = {e: c for e, c in (coefficients or {}).items() if e <= order and c}

    @classmethod
    def monomial(cls, exponent: int, coefficient: Any, order: int, ring=None) -> TruncatedLaurentSeries:
        return cls({exponent: coefficient}, order, ring)

    @classmethod
    def constant(cls, value: Any, order: int, ring=None) -> TruncatedLaurentSeries:
        return cls({0: value}, order, ring)

    def valuation(self) -> int:
        return min(self.coefficients, default=self.order + 1)

    def coefficient(self, exponent: int) -> Any:
        return self.coefficients.get(exponent, QQ(0))

    def is_zero(self) -> bool:
        return not self.coefficients

    def _ring(self, other) -> Optional[CoefficientRing]:
        return self.ring if self.ring is not None else getattr(other, "ring", None)

    def _coerce(self, other) -> TruncatedLaurentSeries:
        if isinstance(other, TruncatedLaurentSeries):
            return other
        return TruncatedLaurentSeries.constant(other, self.order, self.ring)

    def __add__(self, other) -> TruncatedLaurentSeries:
        other = self._coerce(other)
        out = dict(self.coefficients)
        for e, c in other.coefficients.items():
            out[e] = out[e] + c if e in out else c
        return TruncatedLaurentSeries(out, min(self.order, other.order), self._ring(other))

    __radd__ = __add__

    def __neg__(self) -> TruncatedLaurentSeries:
        return self.scale(-1)

    def __sub__(self, other) -> TruncatedLaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> TruncatedLaurentSeries:
        return self._coerce(other) - self

    def scale(self, factor: Any) -> TruncatedLaurentSeries:
        return TruncatedLaurentSeries({e: factor * c for e, c in self.coefficients.items()}, self.order, self.ring)

    def __mul__(self, other) -> TruncatedLaurentSeries:
        if not isinstance(other, TruncatedLaurentSeries):
            return self.scale(other)
        order = min(self.order, other.order)
        ring = self._ring(other)
        out: dict[int, Any] = {}
        for ea, ca in self.coefficients.items():
            for eb, cb in other.coefficients.items():
                e = ea + eb
                if e > order:
                    continue
                term = ca * cb
                out[e] = out[e] + term if e in out else term
        if ring is not None:
            out = {e: ring.truncate(c) for e, c in out.items()}
        return TruncatedLaurentSeries(out, order, ring)

    __rmul__ = __mul__

    def shift(self, k: int) -> TruncatedLaurentSeries:
        """Multiplies by ``u^k``."""
        return TruncatedLaurentSeries({e + k: c for e, c in self.coefficients.items()}, self.order, self.ring)

    def truncated(self, order: int) -> TruncatedLaurentSeries:
        return TruncatedLaurentSeries(self.coefficients, min(order, self.order), self.ring)

    def power(self, k: int) -> TruncatedLaurentSeries:
        out = TruncatedLaurentSeries.constant(QQ(1), self.order, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> TruncatedLaurentSeries:
        """
        Raises:
            InvalidSpec: If the series is zero or its leading coefficient is not a scalar.
        """
        if self.is_zero():
            raise InvalidSpec("Cannot invert the zero series")
        v = self.valuation()
        unit = self.shift(-v)
        lead = unit.coefficients[0]
        if hasattr(lead, "ring"):
            raise InvalidSpec("Only series with a scalar leading coefficient are invertible")
        inv_lead = QQ(1) / QQ.convert(lead)
        b = {0: inv_lead}
        for m in range(1, self.order + abs(v) + 1):
            total = sum((unit.coefficients.get(i, 0) * b[m - i] for i in range(1, m + 1)), QQ(0))
            b[m] = -inv_lead * total
        return TruncatedLaurentSeries(b, self.order + abs(v), self.ring).shift(-v).truncated(self.order)

    def log(self) -> TruncatedLaurentSeries:
        """
        Raises:
            InvalidSpec: If the series is not ``1`` plus terms of positive valuation.
        """
        h = self - QQ(1)
        if h.valuation() < 1:
            raise InvalidSpec("log needs a series of the form 1 + O(u)")
        out = TruncatedLaurentSeries({}, self.order, self.ring)
        term = TruncatedLaurentSeries.constant(QQ(1), self.order, self.ring)
        for k in range(1, self.order + 1):
            term = term * h
            if term.is_zero():
                break
            out = out + term.scale(QQ((-1) ** (k + 1), k))
        return out

    def exp(self) -> TruncatedLaurentSeries:
        """
        Raises:
            InvalidSpec: If the series has terms of valuation below one.
        """
        if self.valuation() < 1:
            raise InvalidSpec("exp needs a series of positive valuation")
        one = self.ring.one if self.ring is not None else QQ(1)
        g = {0: one}
        for m in range(1, self.order + 1):
            total = None
            for i in range(1, m + 1):
                s = self.coefficients.get(i)
                if not s or m - i not in g:
                    continue
                term = (i * s) * g[m - i]
                total = term if total is None else total + term
            if total is not None:
                value = total * QQ(1, m)
                if self.ring is not None:
                    value = self.ring.truncate(value)
                if value:
                    g[m] = value
        return TruncatedLaurentSeries(g, self.order, self.ring)

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.truncated(order).coefficients == other.truncated(order).coefficients

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):  # pragma: nocover
        terms = " + ".join(f"({c})*u^{e}" for e, c in sorted(self.coefficients.items()))
        return f"TruncatedLaurentSeries({terms or 0}, order={self.order})"


def _scalar(coefficients: dict, order: int) -> TruncatedLaurentSeries:
    return TruncatedLaurentSeries({e: QQ.convert(c) for e, c in coefficients.items()}, order)


@dataclass(frozen=True)
class SpecialFunctions:
    """
    ``E_l``, ``lambda_l`` and the Bernoulli tail for one ``l`` at one order.

    Attributes:
        ell (int): The index ``l``.
        order (int): The truncation order.
        E (TruncatedLaurentSeries): ``(1/l) sum_{d | l} mu(l/d) u^-d``.
        lam (TruncatedLaurentSeries): ``u^l (1 - u^l) l``.
    """

    ell: int
    order: int
    E: TruncatedLaurentSeries
    lam: TruncatedLaurentSeries

    @property
    def unit(self) -> TruncatedLaurentSeries:
        """``lambda_l E_l = (1 - u^l) sum_{d | l} mu(l/d) u^(l-d)``, computed exactly below the order."""
        base = {self.ell - d: mobius(self.ell // d) for d in divisors(self.ell)}
        out: dict[int, int] = {}
        for e, c in base.items():
            out[e] = out.get(e, 0) + c
            out[e + self.ell] = out.get(e + self.ell, 0) - c
        return _scalar(out, self.order)

    @property
    def z(self) -> TruncatedLaurentSeries:
        return _inverse_E(self.ell, self.order)

    def bernoulli_terms(self) -> range:
        """The ``r`` whose Bernoulli terms reach ``u``-degree ``<= order``: ``r l <= order``."""
        return range(2, self.order // self.ell + 1)

    def bernoulli_difference(self, X) -> TruncatedLaurentSeries:
        """``B(-E_l + X) - B(-E_l)`` as a series."""
        return _apply(_bernoulli_coefficients(self.ell, self.order), X, self.order)

    def expansion(self) -> list[TruncatedLaurentSeries]:
        """The scalar series ``a_1, a_2, ...`` with ``log U_l(X) = sum_j a_j X^j``."""
        return list(_log_u_coefficients(self.ell, self.order))


@lru_cache(maxsize=None)
def _inverse_E(ell: int, order: int) -> TruncatedLaurentSeries:
    return special_functions(ell, order).E.inverse()


@lru_cache(maxsize=None)
def special_functions(ell: int, order: int) -> SpecialFunctions:
    """
    >>> special_functions(2, 3).E.coefficients == {-2: QQ(1, 2), -1: QQ(-1, 2)}
    True

    Raises:
        InvalidSpec: Unless ``ell >= 1`` and ``order >= 1``.
    """
    if ell < 1 or order < 1:
        raise InvalidSpec(f"special_functions needs ell >= 1 and order >= 1, got {ell}, {order}")
    E = _scalar({-d: QQ(mobius(ell // d), ell) for d in divisors(ell)}, order)
    lam = _scalar({ell: ell, 2 * ell: -ell}, order)
    return SpecialFunctions(ell, order, E, lam)


def _bernoulli(r: int):
    return QQ.from_sympy(bernoulli(r))


@lru_cache(maxsize=None)
def _bernoulli_coefficients(ell: int, order: int) -> tuple[TruncatedLaurentSeries, ...]:
    # B(-E+X) - B(-E) = sum_{r>=2} sum_{j>=1} B_r/(r(r-1)) (-1)^(r-1) C(r+j-2, j) X^j z^(r-1+j)
    sf = special_functions(ell, order)
    z = sf.z
    out = []
    j = 1
    while ell * j <= order:
        total = TruncatedLaurentSeries({}, order)
        for r in sf.bernoulli_terms():
            if (r - 1 + j) * ell > order:
                break
            b = _bernoulli(r)
            if not b:
                continue
            c = b * QQ((-1) ** (r - 1) * comb(r + j - 2, j), r * (r - 1))
            total = total + z.power(r - 1 + j).scale(c)
        out.append(total)
        j += 1
    return tuple(out)


@lru_cache(maxsize=None)
def _log_u_coefficients(ell: int, order: int) -> tuple[TruncatedLaurentSeries, ...]:
    sf = special_functions(ell, order)
    z = sf.z
    L = sf.unit.log()
    tail = _bernoulli_coefficients(ell, order)
    out = []
    j = 1
    while (j - 1) * ell <= order:
        a = z.power(j).scale(QQ(1, 2 * j))
        if j == 1:
            a = a + L
        else:
            a = a - z.power(j - 1).scale(QQ(1, j * (j - 1)))
        if j - 1 < len(tail):
            a = a + tail[j - 1]
        out.append(a)
        j += 1
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def _as_series(X, order: int, ring=None) -> TruncatedLaurentSeries:
    if isinstance(X, TruncatedLaurentSeries):
        return X
    return TruncatedLaurentSeries.constant(X, order, ring)


def _apply(coefficients: Iterable[TruncatedLaurentSeries], X, order: int) -> TruncatedLaurentSeries:
    X = _as_series(X, order)
    out = TruncatedLaurentSeries({}, order, X.ring)
    power = TruncatedLaurentSeries.constant(QQ(1), order, X.ring)
    for a in coefficients:
        power = power * X
        out = out + a * power
    return out


def log_U(X, ell: int, order: int) -> TruncatedLaurentSeries:
    """
    ``log U_l(X, u) = X(log(lambda_l E_l) - 1) + (-E_l + X - 1/2) log(1 - X/E_l)
    + B(-E_l + X) - B(-E_l)``.

    Args:
        X: A rational, a ring element or a :class:`TruncatedLaurentSeries`.
        ell (int): The index ``l``.
        order (int): The truncation order.

    Raises:
        InvalidSpec: If ``X`` has negative ``u``-valuation, so ``X/E_l`` would not
            have positive valuation.
    """
    X = _as_series(X, order)
    if X.valuation() < 0:
        raise InvalidSpec("log_U needs an argument of nonnegative u-valuation")
    return _apply(_log_u_coefficients(ell, order), X, order)


def _argument(ring: CoefficientRing, ell: int, with_markers: bool):
    """``(1/l) sum_{d | l} mu(l/d) (-p_d + 1 - sum_i w_i^d)``, or only its ``-p_d`` part."""
    total = ring.zero
    for d in divisors(ell):
        m = mobius(ell // d)
        if not m:
            continue
        term = -ring.power_sum(d)
        if with_markers:
            term = term + 1 - sum((w**d for w in ring.w), ring.zero)
        total = total + term * m
    return ring.truncate(total * QQ(1, ell))


def _log_difference(ring: CoefficientRing, ell: int, order: int) -> dict[int, Any]:
    """``u``-coefficients of ``log U_l(X_l) - log U_l(Y_l)``."""
    coefficients = _log_u_coefficients(ell, order)
    X = _argument(ring, ell, True)
    Y = _argument(ring, ell, False)
    out: dict[int, Any] = {}
    x_power, y_power = ring.one, ring.one
    for a in coefficients:
        x_power = ring.truncate(x_power * X)
        y_power = ring.truncate(y_power * Y)
        diff = x_power - y_power
        if not diff:
            continue
        for e, c in a.coefficients.items():
            term = diff * c
            out[e] = out[e] + term if e in out else term
    return out


@lru_cache(maxsize=16)
def generating_series(caps: tuple[int, ...], g_max: int, n_max: int) -> tuple[CoefficientRing, TruncatedLaurentSeries]:
    """
    ``prod_l U_l(X_l)/U_l(Y_l) - 1`` truncated for ``g + n <= g_max + n_max``,
    arity ``<= n_max`` and marker degrees ``<= caps``.
    """
    order = g_max + n_max
    ring = CoefficientRing(n_max, caps)
    if order < 1:
        return ring, TruncatedLaurentSeries({}, order, ring)
    total: dict[int, Any] = {}
    # the factor for l has valuation at least l/2
    for ell in range(1, 2 * order + 1):
        for e, c in _log_difference(ring, ell, order).items():
            total[e] = total[e] + c if e in total else c
    log_series = TruncatedLaurentSeries({e: ring.truncate(c) for e, c in total.items()}, order, ring)
    series = log_series.exp() - ring.one
    logger.debug("Expanded the generating series for caps={} to order {}", caps, order)
    return ring, series


@dataclass
class ECTable:
    """
    Equivariant Euler characteristics indexed by ``(g, n)``.

    Attributes:
        entries (dict[tuple[int, int], SymFunction]): Schur expansions, one per cell.
        g_max (int): Largest genus.
        n_max (int): Largest arity.
        metadata (dict): Which formula, its parameters and the truncation orders.
        sheets (dict[str, ECTable]): Named summands of a combined table.
    """

    entries: dict = field(default_factory=dict)
    g_max: int = 0
    n_max: int = 0
    metadata: dict = field(default_factory=dict)
    sheets: dict = field(default_factory=dict)

    def cell(self, g: int, n: int) -> SymFunction:
        return self.entries.get((g, n), SymFunction.zero())

    def schur_integers(self, g: int, n: int) -> dict[Partition, int]:
        return self.cell(g, n).schur_integers()

    def as_json(self) -> dict[str, Any]:
        return {
            "g_max": self.g_max,
            "n_max": self.n_max,
            "metadata": self.metadata,
            "entries": {
                f"{g},{n}": {lam.label(): value for lam, value in sorted(cell.schur_integers().items())}
                for (g, n), cell in sorted(self.entries.items())
            },
            "sheets": {name: sheet.as_json() for name, sheet in self.sheets.items()},
        }

    @classmethod
    def from_json(cls, payload: dict) -> ECTable:
        entries = {}
        for key, cell in payload["entries"].items():
            g, n = (int(x) for x in key.split(","))
            entries[(g, n)] = SymFunction("schur", {Partition.parse(lam): parse_rational(v) for lam, v in cell.items()})
        return cls(
            entries=entries,
            g_max=payload["g_max"],
            n_max=payload["n_max"],
            metadata=payload.get("metadata", {}),
            sheets={name: cls.from_json(sheet) for name, sheet in payload.get("sheets", {}).items()},
        )

    def rows(self) -> list[list[str]]:
        header = ["g,n"] + [str(n) for n in range(self.n_max + 1)]
        body = [
            [str(g)] + [render_schur(self.cell(g, n)) for n in range(self.n_max + 1)] for g in range(self.g_max + 1)
        ]
        return [header] + body

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerows(self.rows())
        return buffer.getvalue()

    def to_text(self) -> str:
        rows = self.rows()
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = [" | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "-+-".join("-" * width for width in widths))
        return "\n".join(lines) + "\n"


def render_schur(f: SymFunction) -> str:
    """
    Schur expansion in the layout of published tables.

    >>> render_schur(SymFunction("schur", {Partition([1, 1]): -1, Partition([2]): 3}))
    '-s_{1,1} + 3 s_{2}'
    >>> render_schur(SymFunction.zero())
    '0'
    """
    terms = sorted(f.schur_integers().items())
    if not terms:
        return "0"
    out = []
    for i, (lam, c) in enumerate(terms):
        body = f"s_{{{lam.label()}}}"
        magnitude = abs(c)
        text = body if magnitude == 1 else f"{magnitude} {body}"
        if i == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append(("- " if c < 0 else "+ ") + text)
    return " ".join(out)


def _extract(
    caps: tuple[int, ...],
    selectors: list[tuple[int, tuple[int, ...]]],
    g_max: int,
    n_max: int,
) -> dict[tuple[int, int], SymFunction]:
    ring, series = generating_series(caps, g_max, n_max)
    entries = {}
    for g in range(g_max + 1):
        for n in range(n_max + 1):
            poly = series.coefficients.get(g + n)
            coefficients: dict[Partition, Any] = {}
            if poly:
                for sign, exponents in selectors:
                    for mu, c in ring.marker_coefficient(poly, exponents).items():
                        if mu.size == n:
                            coefficients[mu] = coefficients.get(mu, QQ(0)) + sign * c
            entries[(g, n)] = SymFunction("powersum", coefficients).in_basis("schur")
    return entries


def _check_range(g_max: int, n_max: int) -> None:
    if g_max < 0 or n_max < 0:
        raise InvalidSpec(f"Invalid table range g_max={g_max}, n_max={n_max}")


def ec_general(parts: Iterable[int], g_max: int, n_max: int) -> ECTable:
    """
    Euler characteristics of ``G_{1^a_1 x ... x 1^a_k}`` for ``g <= g_max`` and
    ``n <= n_max``.

    Raises:
        InvalidSpec: For a negative part or range.
    """
    parts = tuple(parts)
    if any(a < 0 for a in parts):
        raise InvalidSpec(f"Column lengths must be nonnegative: {parts}")
    _check_range(g_max, n_max)
    sign = -1 if sum(parts) % 2 else 1
    entries = _extract(parts, [(sign, parts)], g_max, n_max)
    meta = {"formula": "general", "parts": list(parts), "order": g_max + n_max, "w_caps": list(parts)}
    return ECTable(entries, g_max, n_max, meta)


def ec_tilde(a: int, g_max: int, n_max: int) -> ECTable:
    """
    Euler characteristics of ``G_{Tilde(a)}``: ``(-1)^(a-1) T_{<= a-1}`` of the
    one-marker series.

    Raises:
        InvalidSpec: Unless ``a >= 1``.
    """
    if a < 1:
        raise InvalidSpec("Tilde(a) needs a >= 1")
    _check_range(g_max, n_max)
    sign = -1 if (a - 1) % 2 else 1
    entries = _extract((a - 1,), [(sign, (j,)) for j in range(a)], g_max, n_max)
    meta = {"formula": "tilde", "a": a, "order": g_max + n_max, "w_caps": [a - 1]}
    return ECTable(entries, g_max, n_max, meta)


def ec_two_column(k: int, l: int, g_max: int, n_max: int) -> ECTable:
    """
    Euler characteristics of ``G_{2^k 1^l}``:
    ``(-1)^l (T_{w_1^(k+l) w_2^k} - T_{w_1^(k+l+1) w_2^(k-1)})`` of the two-marker series,
    the difference of the two product complexes in the Pieri sequence.

    Raises:
        InvalidSpec: Unless ``k >= 1`` and ``l >= 0``.
    """
    if k < 1 or l < 0:
        raise InvalidSpec(f"Two-column shape needs k >= 1 and l >= 0, got {k}, {l}")
    _check_range(g_max, n_max)
    caps = (k + l + 1, k)
    sign = -1 if l % 2 else 1
    selectors = [(sign, (k + l, k)), (-sign, (k + l + 1, k - 1))]
    entries = _extract(caps, selectors, g_max, n_max)
    meta = {"formula": "two_column", "k": k, "l": l, "order": g_max + n_max, "w_caps": list(caps)}
    return ECTable(entries, g_max, n_max, meta)


def _shifted(table: ECTable, shift: int, g_max: int, n_max: int, name: str) -> ECTable:
    entries = {}
    for g in range(g_max + 1):
        for n in range(n_max + 1):
            entries[(g, n)] = -table.cell(g - shift, n) if g >= shift else SymFunction.zero()
    meta = dict(table.metadata, genus_shift=shift, sign=-1, sheet=name)
    return ECTable(entries, g_max, n_max, meta)


def ec_weight(k: int, g_max: int, n_max: int, assume_conjecture: bool = False) -> ECTable:
    """
    Euler characteristics of ``gr_{k,0} H_c(M_{g,n})`` for ``k`` in ``{17, 19}``,
    indexed by the genus of ``M_{g,n}``. The ``first`` sheet comes from
    ``G_{Tilde(k)}`` one genus lower, the ``second`` from the two-column complex
    two genera lower, both with a minus sign.

    Raises:
        InvalidSpec: For another weight, or for ``k = 19`` without
            ``assume_conjecture``.
    """
    if k not in WEIGHTS:
        raise InvalidSpec(f"Weight {k} is not supported; use 17 or 19")
    _check_range(g_max, n_max)
    info = WEIGHTS[k]
    if info["conditional"] and not assume_conjecture:
        raise InvalidSpec(f"Weight {k} depends on {CONDITIONAL_HYPOTHESIS}; pass assume_conjecture")
    first_graph = ec_tilde(info["tilde"], max(g_max - 1, 0), n_max)
    kk, ll = info["two_column"]
    second_graph = ec_two_column(kk, ll, max(g_max - 2, 0), n_max)
    first = _shifted(first_graph, 1, g_max, n_max, "first")
    second = _shifted(second_graph, 2, g_max, n_max, "second")
    total = {key: first.cell(*key) + second.cell(*key) for key in first.entries}
    meta = {
        "formula": "weight",
        "weight": k,
        "conditional": info["conditional"],
        "hypothesis": CONDITIONAL_HYPOTHESIS if info["conditional"] else None,
        "order": g_max + n_max,
    }
    return ECTable(total, g_max, n_max, meta, {"first": first, "second": second})


def euler_of_module(spec, g_max: int, n_max: int) -> ECTable:
    """Dispatches a module spec to the matching formula."""
    if spec.kind == "Tilde":
        return ec_tilde(spec.m, g_max, n_max)
    if spec.kind == "Product":
        return ec_general(spec.parts, g_max, n_max)
    lam = spec.partition
    if lam.columns() <= 1:
        return ec_general((lam.size,) if lam.size else (), g_max, n_max)
    conj = lam.conjugate()
    if len(conj) == 2:
        return ec_two_column(conj[1], conj[0] - conj[1], g_max, n_max)
    from .famod import jacobi_trudi_products

    total: dict = {}
    for sign, product in jacobi_trudi_products(lam):
        table = ec_general(product.parts, g_max, n_max)
        for key, value in table.entries.items():
            total[key] = total.get(key, SymFunction.zero()) + value.scale(sign)
    meta = {"formula": "jacobi_trudi", "partition": list(lam), "order": g_max + n_max}
    return ECTable(total, g_max, n_max, meta)


def clear_caches() -> None:
    for cached in (generating_series, _log_u_coefficients, _bernoulli_coefficients, _inverse_E, special_functions):
        cached.cache_clear()


def table_from_params(params: dict) -> ECTable:
    """
    Evaluates a table described by a JSON-able parameter dict: either
    ``{"formula": "weight", "k", "g_max", "n_max", "assume_conjecture"}`` or
    ``{"formula": "module", "spec", "g_max", "n_max"}``.

    Raises:
        InvalidSpec: For an unknown formula.
    """
    formula = params.get("formula")
    if formula == "weight":
        return ec_weight(params["k"], params["g_max"], params["n_max"], params.get("assume_conjecture", False))
    if formula == "module":
        from .famod import FAModuleSpec

        return euler_of_module(FAModuleSpec.from_json(params["spec"]), params["g_max"], params["n_max"])
    raise InvalidSpec(f"Unknown table formula {formula}")


def compute_table(params: dict, use_cache: bool = False) -> ECTable:
    """Evaluates a table, optionally through the persistent cache."""
    if not use_cache:
        return table_from_params(params)
    from .models import compute_cached

    return ECTable.from_json(compute_cached("table", params, lambda: table_from_params(params).as_json()))
