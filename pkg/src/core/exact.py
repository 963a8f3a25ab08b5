"""Exact scalar and formal-series arithmetic.

Gaussian rationals come from sympy's ``QQ_I`` domain. Formal series in the
deformation parameter lambda (with nu = i*lambda) and scalars carrying
symbolic units are sparse polynomials over that domain, built with
``sympy.polys.rings``. Every value here is immutable once constructed.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import PolyElement, PolyRing, ring


logger = logging.getLogger(__name__)

Rational = Any
Gaussian = Any
Scalar = Union[int, Rational, Gaussian]

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I_UNIT = QQ_I(0, 1)

SYMBOLIC_UNITS = (
    "lam",
    "r2",
    "sqrt2pi",
    "pi",
    "ap",
    "lp",
    "E",
    "Einv",
    "sqrte",
)
POSITIVE_UNITS = frozenset({"r2", "sqrt2pi", "pi", "E", "Einv", "sqrte"})


class ExactArithmeticError(Exception):
    """Raised when an exact value cannot be parsed or converted."""

    pass


class SeriesSign(Enum):
    """Sign of a formal series in the ordered ring R[[lambda]]."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    NON_REAL = "non-real"
    INDEFINITE = "indefinite"


def rational(numerator: int, denominator: int = 1) -> Rational:
    """Build a reduced rational number."""
    if denominator == 0:
        raise ExactArithmeticError("Rational with zero denominator")
    return QQ(numerator, denominator)


def gaussian(re: Scalar = 0, im: Scalar = 0) -> Gaussian:
    """Build a Gaussian rational from rational real and imaginary parts."""
    return QQ_I(to_rational(re), to_rational(im))


def to_rational(value: Scalar) -> Rational:
    """Coerce an int or rational into ``QQ``.

    Raises:
        ExactArithmeticError: When value has a nonzero imaginary part
    """
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "x") and hasattr(value, "y"):
        if value.y != 0:
            raise ExactArithmeticError(f"Value {value} is not real")
        return value.x
    return QQ.convert(value)


def to_gaussian(value: Scalar) -> Gaussian:
    """Coerce an int, rational or Gaussian rational into ``QQ_I``."""
    if hasattr(value, "x") and hasattr(value, "y"):
        return value
    return QQ_I(to_rational(value))


def conjugate_gaussian(value: Scalar) -> Gaussian:
    """Complex conjugate of a Gaussian rational."""
    c = to_gaussian(value)
    return QQ_I(c.x, -c.y)


def conjugate_coefficients(base: PolyRing, poly: PolyElement) -> PolyElement:
    """Conjugate every coefficient of a polynomial over ``QQ_I``."""
    return base.from_dict({m: conjugate_gaussian(c) for m, c in poly.items()})


def parse_rational(text: Union[str, int]) -> Rational:
    """Parse ``"p/q"`` or ``"p"`` into a rational.

    Raises:
        ExactArithmeticError: When the text is not a rational literal
    """
    if isinstance(text, int):
        return QQ(text)
    raw = str(text).strip()
    try:
        if "/" in raw:
            num, den = raw.split("/", 1)
            return rational(int(num), int(den))
        return QQ(int(raw))
    except ValueError as e:
        raise ExactArithmeticError(f"Invalid rational literal {text!r}: {e}")


def format_rational(value: Scalar) -> str:
    """Serialize a rational as ``"p/q"``."""
    q = to_rational(value)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(value: Scalar) -> Dict[str, str]:
    """Serialize a Gaussian rational as ``{"re": "p/q", "im": "p/q"}``."""
    c = to_gaussian(value)
    return {"re": format_rational(c.x), "im": format_rational(c.y)}


def parse_gaussian(data: Union[Mapping[str, str], str, int]) -> Gaussian:
    """Parse the serialized form produced by :func:`format_gaussian`."""
    if isinstance(data, Mapping):
        return QQ_I(
            parse_rational(data.get("re", "0")),
            parse_rational(data.get("im", "0")),
        )
    return QQ_I(parse_rational(data))


def i_power(k: int) -> Gaussian:
    """Return i**k for any integer k."""
    return (ONE, I_UNIT, -ONE, -I_UNIT)[k % 4]


def rename_terms(
    poly: PolyElement, target: PolyRing, names: Optional[Mapping[str, str]] = None
) -> PolyElement:
    """Move a polynomial into another ring by matching generator names.

    Args:
        poly: Source polynomial
        target: Ring to move into
        names: Optional renaming from source to target generator names

    Returns:
        The same polynomial expressed in ``target``

    Raises:
        ExactArithmeticError: When a used generator has no target
    """
    names = names or {}
    source_names = [str(s) for s in poly.ring.symbols]
    target_index = {str(s): i for i, s in enumerate(target.symbols)}
    mapping: List[Optional[int]] = []
    for name in source_names:
        mapping.append(target_index.get(names.get(name, name)))

    terms: Dict[Tuple[int, ...], Gaussian] = {}
    source_domain = poly.ring.domain
    for monom, coeff in poly.items():
        coeff = target.domain.convert(coeff, source_domain)
        exps = [0] * target.ngens
        for pos, e in enumerate(monom):
            if not e:
                continue
            idx = mapping[pos]
            if idx is None:
                raise ExactArithmeticError(
                    f"Generator {source_names[pos]} has no counterpart "
                    f"in ring {target.symbols}"
                )
            exps[idx] += e
        key = tuple(exps)
        terms[key] = terms.get(key, target.domain.zero) + coeff
    return target.from_dict(terms)


# ---------------------------------------------------------------------------
# Formal series in lambda


@lru_cache(maxsize=None)
def lambda_ring() -> PolyRing:
    """Ring QQ_I[lam] holding LambdaPoly values."""
    return ring("lam", QQ_I)[0]


@lru_cache(maxsize=None)
def scalar_ring() -> PolyRing:
    """Ring QQ_I[lam, r2] used for enveloping-algebra coefficients."""
    return ring("lam,r2", QQ_I)[0]


def _min_order(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _truncate_poly(
    poly: PolyElement, position: int, order: Optional[int]
) -> PolyElement:
    if order is None:
        return poly
    return poly.ring.from_dict(
        {m: c for m, c in poly.items() if m[position] <= order}
    )


class LambdaPoly:
    """Polynomial in lambda with Gaussian-rational coefficients.

    The optional truncation order is a property of the value: products
    drop every exponent above the smaller of the two orders.
    """

    __slots__ = ("poly", "order")

    def __init__(
        self, poly: Optional[PolyElement] = None, order: Optional[int] = None
    ) -> None:
        base = lambda_ring()
        if poly is None:
            poly = base.zero
        elif poly.ring != base:
            poly = rename_terms(poly, base)
        self.order = order
        self.poly = _truncate_poly(poly, 0, order)

    @classmethod
    def from_coefficients(
        cls, coefficients: Mapping[int, Scalar], order: Optional[int] = None
    ) -> "LambdaPoly":
        """Build from an exponent to coefficient mapping."""
        base = lambda_ring()
        terms = {(k,): to_gaussian(c) for k, c in coefficients.items()}
        return cls(base.from_dict(terms), order)

    @classmethod
    def constant(cls, value: Scalar, order: Optional[int] = None) -> "LambdaPoly":
        return cls.from_coefficients({0: value}, order)

    @classmethod
    def lam(cls, order: Optional[int] = None) -> "LambdaPoly":
        return cls.from_coefficients({1: 1}, order)

    @classmethod
    def nu(cls, order: Optional[int] = None) -> "LambdaPoly":
        """The formal parameter nu = i*lambda."""
        return cls.from_coefficients({1: I_UNIT}, order)

    def coefficients(self) -> Dict[int, Gaussian]:
        """Return the nonzero coefficients keyed by lambda exponent."""
        return {m[0]: c for m, c in sorted(self.poly.items())}

    def coefficient(self, k: int) -> Gaussian:
        return self.poly.get((k,), ZERO)

    def is_zero(self) -> bool:
        return not self.poly

    def truncate(self, order: int) -> "LambdaPoly":
        return LambdaPoly(self.poly, _min_order(self.order, order))

    def conjugate(self) -> "LambdaPoly":
        return lambda_poly_conjugate(self)

    def __add__(self, other: Any) -> "LambdaPoly":
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.constant(other)
        return LambdaPoly(
            self.poly + other.poly, _min_order(self.order, other.order)
        )

    __radd__ = __add__

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(-self.poly, self.order)

    def __sub__(self, other: Any) -> "LambdaPoly":
        if not isinstance(other, LambdaPoly):
            other = LambdaPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Any) -> "LambdaPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "LambdaPoly":
        if isinstance(other, LambdaPoly):
            return lambda_poly_mul(self, other)
        return LambdaPoly(self.poly * to_gaussian(other), self.order)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LambdaPoly):
            return bool(self.poly == other.poly)
        if isinstance(other, (int,)) or hasattr(other, "x"):
            return bool(self.poly == LambdaPoly.constant(other).poly)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.poly.items())))

    def __repr__(self) -> str:
        return f"LambdaPoly({self.poly.as_expr()})"

    def __str__(self) -> str:
        return str(self.poly.as_expr())

    def to_json(self) -> List[List[Any]]:
        """Sorted ``[exponent, {"re", "im"}]`` pairs."""
        return [[k, format_gaussian(c)] for k, c in self.coefficients().items()]


def lambda_poly_mul(a: LambdaPoly, b: LambdaPoly) -> LambdaPoly:
    """Exact product truncated at the smaller of the two orders."""
    return LambdaPoly(a.poly * b.poly, _min_order(a.order, b.order))


def lambda_poly_conjugate(a: LambdaPoly) -> LambdaPoly:
    """Conjugate every coefficient; lambda is treated as real."""
    base = lambda_ring()
    return LambdaPoly(
        conjugate_coefficients(base, a.poly),
        a.order,
    )


# ---------------------------------------------------------------------------
# Scalars with symbolic units


@lru_cache(maxsize=None)
def symbolic_ring() -> PolyRing:
    """Ring over QQ_I generated by every symbolic unit."""
    return ring(",".join(SYMBOLIC_UNITS), QQ_I)[0]


_E = SYMBOLIC_UNITS.index("E")
_EINV = SYMBOLIC_UNITS.index("Einv")
_LAM = SYMBOLIC_UNITS.index("lam")


def _cancel_exponentials(poly: PolyElement) -> PolyElement:
    terms: Dict[Tuple[int, ...], Gaussian] = {}
    for monom, coeff in poly.items():
        exps = list(monom)
        common = min(exps[_E], exps[_EINV])
        if common:
            exps[_E] -= common
            exps[_EINV] -= common
        key = tuple(exps)
        terms[key] = terms.get(key, ZERO) + coeff
    return poly.ring.from_dict(terms)


class SymbolicScalar:
    """Gaussian-rational combination of products of symbolic units.

    Units commute, ``E*Einv`` is normalized to one, and ``r2`` stays an
    indeterminate until bound with :meth:`bind`.
    """

    __slots__ = ("poly",)

    def __init__(self, poly: Optional[PolyElement] = None) -> None:
        base = symbolic_ring()
        if poly is None:
            poly = base.zero
        elif poly.ring != base:
            poly = rename_terms(poly, base)
        self.poly = _cancel_exponentials(poly)

    @classmethod
    def constant(cls, value: Scalar) -> "SymbolicScalar":
        return cls(symbolic_ring().ground_new(to_gaussian(value)))

    @classmethod
    def unit(cls, name: str, power: int = 1) -> "SymbolicScalar":
        """A single unit raised to a nonnegative power."""
        base = symbolic_ring()
        if name not in SYMBOLIC_UNITS:
            raise ExactArithmeticError(f"Unknown symbolic unit: {name}")
        exps = [0] * base.ngens
        exps[SYMBOLIC_UNITS.index(name)] = power
        return cls(base.from_dict({tuple(exps): ONE}))

    @classmethod
    def from_poly(
        cls, poly: PolyElement, names: Optional[Mapping[str, str]] = None
    ) -> "SymbolicScalar":
        """Import a polynomial whose generators are (renamed) units."""
        return cls(rename_terms(poly, symbolic_ring(), names))

    @classmethod
    def from_lambda_poly(cls, value: LambdaPoly) -> "SymbolicScalar":
        return cls.from_poly(value.poly)

    def is_zero(self) -> bool:
        return not self.poly

    def lambda_coefficients(self) -> Dict[int, "SymbolicScalar"]:
        """Split into lambda-power coefficients free of lambda."""
        base = symbolic_ring()
        grouped: Dict[int, Dict[Tuple[int, ...], Gaussian]] = {}
        for monom, coeff in self.poly.items():
            exps = list(monom)
            k = exps[_LAM]
            exps[_LAM] = 0
            grouped.setdefault(k, {})[tuple(exps)] = coeff
        return {
            k: SymbolicScalar(base.from_dict(terms))
            for k, terms in sorted(grouped.items())
        }

    def lambda_coefficient(self, k: int) -> "SymbolicScalar":
        return self.lambda_coefficients().get(k, SymbolicScalar())

    def units_used(self) -> List[str]:
        used = set()
        for monom in self.poly.keys():
            for pos, e in enumerate(monom):
                if e:
                    used.add(SYMBOLIC_UNITS[pos])
        return sorted(used)

    def as_lambda_poly(self, order: Optional[int] = None) -> LambdaPoly:
        """Convert to a LambdaPoly.

        Raises:
            ExactArithmeticError: When a unit other than lambda remains
        """
        extra = [u for u in self.units_used() if u != "lam"]
        if extra:
            raise ExactArithmeticError(
                f"Scalar still carries symbolic units {extra}"
            )
        return LambdaPoly(rename_terms(self.poly, lambda_ring()), order)

    def bind(self, name: str, value: Scalar) -> "SymbolicScalar":
        """Substitute a rational value for one unit."""
        base = symbolic_ring()
        gen = base.gens[SYMBOLIC_UNITS.index(name)]
        return SymbolicScalar(
            self.poly.compose(gen, base.ground_new(to_gaussian(value)))
        )

    def truncate(self, order: int) -> "SymbolicScalar":
        return SymbolicScalar(_truncate_poly(self.poly, _LAM, order))

    def conjugate(self) -> "SymbolicScalar":
        base = symbolic_ring()
        return SymbolicScalar(conjugate_coefficients(base, self.poly))

    def _coerce(self, other: Any) -> "SymbolicScalar":
        if isinstance(other, SymbolicScalar):
            return other
        if isinstance(other, LambdaPoly):
            return SymbolicScalar.from_lambda_poly(other)
        return SymbolicScalar.constant(other)

    def __add__(self, other: Any) -> "SymbolicScalar":
        return SymbolicScalar(self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self) -> "SymbolicScalar":
        return SymbolicScalar(-self.poly)

    def __sub__(self, other: Any) -> "SymbolicScalar":
        return SymbolicScalar(self.poly - self._coerce(other).poly)

    def __rsub__(self, other: Any) -> "SymbolicScalar":
        return SymbolicScalar(self._coerce(other).poly - self.poly)

    def __mul__(self, other: Any) -> "SymbolicScalar":
        return SymbolicScalar(self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (SymbolicScalar, LambdaPoly, int)) or hasattr(
            other, "x"
        ):
            return bool(self.poly == self._coerce(other).poly)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.poly.items())))

    def __repr__(self) -> str:
        return f"SymbolicScalar({self.poly.as_expr()})"

    def __str__(self) -> str:
        return str(self.poly.as_expr())

    def to_json(self) -> List[Dict[str, Any]]:
        """Terms as ``{"units": {...}, "coefficient": {...}}``, sorted."""
        out = []
        for monom, coeff in sorted(self.poly.items()):
            units = {
                SYMBOLIC_UNITS[pos]: e for pos, e in enumerate(monom) if e
            }
            out.append({"units": units, "coefficient": format_gaussian(coeff)})
        return out


def _unit_sign(
    poly_terms: Iterable[Tuple[Tuple[int, ...], Gaussian]]
) -> SeriesSign:
    signs = set()
    for monom, coeff in poly_terms:
        for pos, e in enumerate(monom):
            if e and SYMBOLIC_UNITS[pos] not in POSITIVE_UNITS:
                return SeriesSign.INDEFINITE
        signs.add(coeff.x > 0)
    if signs == {True}:
        return SeriesSign.POSITIVE
    if signs == {False}:
        return SeriesSign.NEGATIVE
    return SeriesSign.INDEFINITE


def series_sign(value: Union[LambdaPoly, SymbolicScalar]) -> SeriesSign:
    """Sign of a formal series in the ordered ring R[[lambda]].

    A series is non-real when any coefficient has an imaginary part;
    otherwise the lowest nonzero lambda-coefficient decides. For symbolic
    scalars that coefficient is signed only when all its terms agree in
    sign and use positive units.
    """
    if isinstance(value, LambdaPoly):
        value = SymbolicScalar.from_lambda_poly(value)
    if value.is_zero():
        return SeriesSign.ZERO
    if any(c.y != 0 for c in value.poly.values()):
        return SeriesSign.NON_REAL
    coefficients = value.lambda_coefficients()
    lowest = coefficients[min(coefficients)]
    return _unit_sign(lowest.poly.items())
