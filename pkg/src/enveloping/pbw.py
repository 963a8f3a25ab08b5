"""Universal enveloping algebra in PBW normal form.

Ordered monomials ``e_1^a1 ... e_n^an`` are keyed by their exponent
tuples. Straightening results are memoized per algebra in
:class:`EnvelopingAlgebra`; tables hold rational coefficients only, since
brackets carry no formal parameter. Inserts are idempotent, so concurrent
readers may race on a miss and still publish the same value.
"""

import logging
import threading
from typing import Any, Dict, Iterable, List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from src.core.exact import (
    ExactArithmeticError,
    Rational,
    format_gaussian,
    format_rational,
    gaussian,
    i_power,
    parse_rational,
    scalar_ring,
    to_gaussian,
)
from src.lie.algebra import LieAlgebra
from src.poisson.polynomial import PolyG, polynomial_ring


logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
RationalTable = Dict[Monomial, Rational]
ParsedTables = Dict[str, Dict[Any, RationalTable]]


class EnvelopingError(Exception):
    """Raised when an enveloping-algebra operation receives bad input."""

    pass


class NonInvertibleCoefficient(EnvelopingError):
    """Raised when a PBW element is not in the image of symmetrization."""

    pass


def _add_into(target: RationalTable, key: Monomial, value: Rational) -> None:
    total = target.get(key, QQ(0)) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _shift(beta: Monomial, index: int, amount: int) -> Monomial:
    out = list(beta)
    out[index] += amount
    return tuple(out)


def degree(beta: Monomial) -> int:
    return sum(beta)


class EnvelopingAlgebra:
    """Memoized PBW straightening and symmetrization for one algebra."""

    def __init__(self, algebra: LieAlgebra) -> None:
        self.algebra = algebra
        self.dim = algebra.dim
        self._lock = threading.Lock()
        self._generator_times: Dict[Tuple[int, Monomial], RationalTable] = {}
        self._monomial_products: Dict[Tuple[Monomial, Monomial], RationalTable] = {}
        self._symmetrized: Dict[Monomial, RationalTable] = {}
        self._symmetrized_products: Dict[Tuple[Monomial, Monomial], RationalTable] = {}
        self._star_coefficients: Dict[Tuple[Monomial, Monomial], RationalTable] = {}

    def _publish(self, table: Dict[Any, RationalTable], key: Any, value: RationalTable) -> RationalTable:
        with self._lock:
            return table.setdefault(key, value)

    @property
    def unit(self) -> Monomial:
        return (0,) * self.dim

    # -- straightening ----------------------------------------------------

    def generator_times(self, index: int, beta: Monomial) -> RationalTable:
        """PBW expansion of e_index * e^beta."""
        key = (index, beta)
        cached = self._generator_times.get(key)
        if cached is not None:
            return cached

        first = next((j for j, b in enumerate(beta) if b), self.dim)
        if first >= index:
            result: RationalTable = {_shift(beta, index, 1): QQ(1)}
        else:
            # e_i e_j r = e_j (e_i r) + [e_i, e_j] r, with j < i
            rest = _shift(beta, first, -1)
            result = {}
            for mono, c in self.generator_times(index, rest).items():
                for mono2, c2 in self.generator_times(first, mono).items():
                    _add_into(result, mono2, c * c2)
            for k, ck in self.algebra.bracket_terms(index, first):
                for mono2, c2 in self.generator_times(k, rest).items():
                    _add_into(result, mono2, ck * c2)
        return self._publish(self._generator_times, key, result)

    def left_multiply(self, index: int, element: RationalTable) -> RationalTable:
        """e_index times a rational PBW element."""
        out: RationalTable = {}
        for mono, c in element.items():
            for mono2, c2 in self.generator_times(index, mono).items():
                _add_into(out, mono2, c * c2)
        return out

    def monomial_product(self, alpha: Monomial, beta: Monomial) -> RationalTable:
        """PBW expansion of e^alpha * e^beta."""
        key = (alpha, beta)
        cached = self._monomial_products.get(key)
        if cached is not None:
            return cached
        first = next((j for j, a in enumerate(alpha) if a), None)
        if first is None:
            result: RationalTable = {beta: QQ(1)}
        else:
            inner = self.monomial_product(_shift(alpha, first, -1), beta)
            result = self.left_multiply(first, inner)
        return self._publish(self._monomial_products, key, result)

    # -- symmetrization ---------------------------------------------------

    def symmetrized(self, alpha: Monomial) -> RationalTable:
        """S(alpha): the average over all orderings of the word e^alpha.

        Computed as S(alpha) = sum_i (alpha_i / k) e_i S(alpha - eps_i).
        """
        cached = self._symmetrized.get(alpha)
        if cached is not None:
            return cached
        k = degree(alpha)
        if k == 0:
            result: RationalTable = {alpha: QQ(1)}
        else:
            result = {}
            for i, a in enumerate(alpha):
                if not a:
                    continue
                part = self.left_multiply(i, self.symmetrized(_shift(alpha, i, -1)))
                for mono, c in part.items():
                    _add_into(result, mono, c * QQ(a, k))
        return self._publish(self._symmetrized, alpha, result)

    def symmetrized_product(self, alpha: Monomial, gamma: Monomial) -> RationalTable:
        """PBW expansion of S(alpha) * S(gamma)."""
        key = (alpha, gamma)
        cached = self._symmetrized_products.get(key)
        if cached is not None:
            return cached
        k = degree(alpha)
        if k == 0:
            result = dict(self.symmetrized(gamma))
        else:
            result = {}
            for i, a in enumerate(alpha):
                if not a:
                    continue
                inner = self.symmetrized_product(_shift(alpha, i, -1), gamma)
                for mono, c in self.left_multiply(i, inner).items():
                    _add_into(result, mono, c * QQ(a, k))
        return self._publish(self._symmetrized_products, key, result)

    def symmetric_coordinates(self, element: RationalTable) -> RationalTable:
        """Coefficients c with element = sum_beta c_beta S(beta).

        S(beta) is e^beta plus lower filtration terms, so the expansion is
        read off top degree first.
        """
        residual = dict(element)
        out: RationalTable = {}
        while residual:
            top = max(degree(m) for m in residual)
            for beta in sorted(m for m in residual if degree(m) == top):
                c = residual.get(beta)
                if not c:
                    continue
                out[beta] = c
                for mono, s in self.symmetrized(beta).items():
                    _add_into(residual, mono, -c * s)
        return out

    def star_coefficients(self, alpha: Monomial, gamma: Monomial) -> RationalTable:
        """Symmetric coordinates of S(alpha) * S(gamma)."""
        key = (alpha, gamma)
        cached = self._star_coefficients.get(key)
        if cached is not None:
            return cached
        result = self.symmetric_coordinates(self.symmetrized_product(alpha, gamma))
        return self._publish(self._star_coefficients, key, result)

    # -- persistence ------------------------------------------------------

    def table_sizes(self) -> Dict[str, int]:
        return {
            "generator_times": len(self._generator_times),
            "symmetrized": len(self._symmetrized),
            "star_coefficients": len(self._star_coefficients),
        }

    def export_tables(self, max_degree: Optional[int] = None) -> Dict[str, Any]:
        """Serializable snapshot of the straightening tables."""

        def fits(*monos: Monomial) -> bool:
            return max_degree is None or sum(degree(m) for m in monos) <= max_degree

        def dump(table: RationalTable) -> List[List[Any]]:
            return [[list(m), format_rational(c)] for m, c in sorted(table.items())]

        with self._lock:
            return {
                "generator_times": [
                    [i, list(beta), dump(v)]
                    for (i, beta), v in sorted(self._generator_times.items())
                    if fits(beta)
                ],
                "symmetrized": [
                    [list(alpha), dump(v)]
                    for alpha, v in sorted(self._symmetrized.items())
                    if fits(alpha)
                ],
                "star_coefficients": [
                    [list(a), list(g), dump(v)]
                    for (a, g), v in sorted(self._star_coefficients.items())
                    if fits(a, g)
                ],
            }

    def parse_tables(self, payload: Dict[str, Any]) -> ParsedTables:
        """Validate tables exported by :meth:`export_tables` without loading them.

        Raises:
            EnvelopingError: When the payload is malformed
        """

        def mono(raw: Any) -> Monomial:
            beta = tuple(raw)
            if len(beta) != self.dim or any(
                not isinstance(b, int) or isinstance(b, bool) or b < 0 for b in beta
            ):
                raise ValueError(f"bad monomial {raw!r} for dimension {self.dim}")
            return beta

        def load(rows: Iterable[List[Any]]) -> RationalTable:
            return {mono(m): parse_rational(c) for m, c in rows}

        parsed: ParsedTables = {
            "generator_times": {},
            "symmetrized": {},
            "star_coefficients": {},
        }
        try:
            for i, beta, rows in payload.get("generator_times", []):
                if int(i) not in range(self.dim):
                    raise ValueError(f"generator index {i} out of range")
                parsed["generator_times"][(int(i), mono(beta))] = load(rows)
            for alpha, rows in payload.get("symmetrized", []):
                parsed["symmetrized"][mono(alpha)] = load(rows)
            for a, g, rows in payload.get("star_coefficients", []):
                parsed["star_coefficients"][(mono(a), mono(g))] = load(rows)
        except (AttributeError, TypeError, ValueError, ExactArithmeticError) as e:
            raise EnvelopingError(f"Malformed straightening tables: {e}")
        return parsed

    def publish_tables(self, parsed: ParsedTables) -> int:
        """Merge tables returned by :meth:`parse_tables`; existing rows win."""
        targets = {
            "generator_times": self._generator_times,
            "symmetrized": self._symmetrized,
            "star_coefficients": self._star_coefficients,
        }
        count = 0
        with self._lock:
            for name, rows in parsed.items():
                for key, value in rows.items():
                    targets[name].setdefault(key, value)
                    count += 1
        logger.debug(f"Imported {count} straightening entries for {self.algebra.name}")
        return count

    def import_tables(self, payload: Dict[str, Any]) -> int:
        """Load tables exported by :meth:`export_tables`.

        Nothing is loaded unless every row parses.

        Returns:
            Number of entries loaded

        Raises:
            EnvelopingError: When the payload is malformed
        """
        return self.publish_tables(self.parse_tables(payload))


_registry: Dict[LieAlgebra, EnvelopingAlgebra] = {}
_registry_lock = threading.Lock()


def enveloping_for(algebra: LieAlgebra) -> EnvelopingAlgebra:
    """Shared table store for an algebra (keyed on its constants)."""
    with _registry_lock:
        store = _registry.get(algebra)
        if store is None:
            store = EnvelopingAlgebra(algebra)
            _registry[algebra] = store
        return store


def reset_tables() -> None:
    """Drop every memoized table."""
    with _registry_lock:
        _registry.clear()


# ---------------------------------------------------------------------------
# PBW elements with lambda/r2 scalar coefficients


class PBWElement:
    """Element of U(g)[nu] in PBW normal form.

    Coefficients are polynomials in ``lam`` and ``r2`` over the Gaussian
    rationals.
    """

    __slots__ = ("algebra", "terms")

    def __init__(
        self, algebra: LieAlgebra, terms: Optional[Dict[Monomial, PolyElement]] = None
    ) -> None:
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "PBWElement":
        return cls(algebra)

    @classmethod
    def unit(cls, algebra: LieAlgebra) -> "PBWElement":
        return cls(algebra, {(0,) * algebra.dim: scalar_ring().one})

    @classmethod
    def from_monomial(
        cls, algebra: LieAlgebra, beta: Monomial, coeff: Any = 1
    ) -> "PBWElement":
        return cls(algebra, {tuple(beta): scalar_ring().ground_new(to_gaussian(coeff))})

    @classmethod
    def from_rational_table(
        cls, algebra: LieAlgebra, table: RationalTable, scale: Optional[PolyElement] = None
    ) -> "PBWElement":
        base = scalar_ring()
        factor = scale if scale is not None else base.one
        return cls(algebra, {m: factor * to_gaussian(c) for m, c in table.items()})

    def __add__(self, other: "PBWElement") -> "PBWElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, scalar_ring().zero) + c
        return PBWElement(self.algebra, out)

    def __neg__(self) -> "PBWElement":
        return PBWElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "PBWElement") -> "PBWElement":
        return self + (-other)

    def scale(self, factor: PolyElement) -> "PBWElement":
        return PBWElement(self.algebra, {m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other: "PBWElement") -> "PBWElement":
        return pbw_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted((m, tuple(sorted(c.items()))) for m, c in self.terms.items())))

    def __repr__(self) -> str:
        shown = ", ".join(f"{m}: {c.as_expr()}" for m, c in sorted(self.terms.items()))
        return f"PBWElement({{{shown}}})"

    def to_json(self) -> List[Dict[str, Any]]:
        """Sorted ``{"pbw": [...], "coefficient": [...]}`` terms."""
        out = []
        for m, c in sorted(self.terms.items()):
            out.append(
                {
                    "pbw": list(m),
                    "coefficient": [
                        {"lam": k[0], "r2": k[1], "value": format_gaussian(v)}
                        for k, v in sorted(c.items())
                    ],
                }
            )
        return out


def pbw_mul(a: PBWElement, b: PBWElement) -> PBWElement:
    """Product in U(g) rewritten to PBW normal form.

    Raises:
        EnvelopingError: When the factors belong to different algebras
    """
    if a.algebra != b.algebra:
        raise EnvelopingError("PBW product across different algebras")
    store = enveloping_for(a.algebra)
    base = scalar_ring()
    out: Dict[Monomial, PolyElement] = {}
    for alpha, ca in a.terms.items():
        for beta, cb in b.terms.items():
            coeff = ca * cb
            for mono, q in store.monomial_product(alpha, beta).items():
                out[mono] = out.get(mono, base.zero) + coeff * to_gaussian(q)
    return PBWElement(a.algebra, out)


def symmetrize(f: PolyG) -> PBWElement:
    """sigma_nu: xi^alpha maps to nu^|alpha| times the symmetrized word."""
    store = enveloping_for(f.algebra)
    base = scalar_ring()
    lam, r2 = base.gens
    out = PBWElement.zero(f.algebra)
    for alpha, l, s, c in f.terms():
        k = sum(alpha)
        scale = lam ** (l + k) * r2**s * (c * i_power(k))
        out = out + PBWElement.from_rational_table(
            f.algebra, store.symmetrized(alpha), scale
        )
    return out


def unsymmetrize(element: PBWElement) -> PolyG:
    """Inverse of :func:`symmetrize`.

    Works through the PBW filtration top degree first; the diagonal of
    sigma_nu on degree k is nu**k.

    Raises:
        NonInvertibleCoefficient: When a coefficient is not divisible by the
            required power of nu
    """
    algebra = element.algebra
    store = enveloping_for(algebra)
    grouped: Dict[Tuple[int, int], Tuple[RationalTable, RationalTable]] = {}
    for mono, coeff in element.terms.items():
        for (l, s), c in coeff.items():
            re_part, im_part = grouped.setdefault((l, s), ({}, {}))
            if c.x:
                re_part[mono] = c.x
            if c.y:
                im_part[mono] = c.y

    base = polynomial_ring(algebra.dim)
    terms: Dict[Tuple[int, ...], Any] = {}
    for (l, s), (re_part, im_part) in sorted(grouped.items()):
        re_coords = store.symmetric_coordinates(re_part)
        im_coords = store.symmetric_coordinates(im_part)
        for beta in sorted(set(re_coords) | set(im_coords)):
            k = degree(beta)
            if l < k:
                raise NonInvertibleCoefficient(
                    f"Coefficient lam^{l} of S{beta} is not divisible by nu^{k}"
                )
            value = gaussian(
                re_coords.get(beta, QQ(0)), im_coords.get(beta, QQ(0))
            )
            key = beta + (l - k, s)
            terms[key] = terms.get(key, base.domain.zero) + value * i_power(-k)
    return PolyG(algebra, base.from_dict(terms))
