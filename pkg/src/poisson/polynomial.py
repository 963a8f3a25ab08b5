"""Polynomials on the dual of a Lie algebra.

A :class:`PolyG` is a sparse polynomial in the linear coordinates
``xi1..xin`` whose coefficients are polynomials in ``lam`` and ``r2`` over
the Gaussian rationals. ``nu`` is stored as ``i*lam``. The owning
:class:`~src.lie.algebra.LieAlgebra` supplies the dimension and brackets.
"""

import logging
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import I, Symbol
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ_I
from sympy.polys.rings import PolyElement, PolyRing, ring

from src.core.exact import (
    Gaussian,
    LambdaPoly,
    Scalar,
    SymbolicScalar,
    conjugate_coefficients,
    format_gaussian,
    i_power,
    parse_gaussian,
    rename_terms,
    to_gaussian,
    to_rational,
)
from src.lie.algebra import LieAlgebra


logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


class PoissonPolyError(Exception):
    """Raised when a polynomial operation receives incompatible input."""

    pass


class WrongDimension(PoissonPolyError):
    """Raised when an operation needs a specific algebra dimension."""

    pass


@lru_cache(maxsize=None)
def polynomial_ring(dim: int) -> PolyRing:
    """Ring QQ_I[xi1..xin, lam, r2]."""
    names = [f"xi{i}" for i in range(1, dim + 1)] + ["lam", "r2"]
    return ring(names, QQ_I)[0]


class PolyG:
    """Element of Pol(g*) with lambda- and r2-polynomial coefficients."""

    __slots__ = ("algebra", "poly")

    def __init__(
        self, algebra: LieAlgebra, poly: Optional[PolyElement] = None
    ) -> None:
        self.algebra = algebra
        base = polynomial_ring(algebra.dim)
        if poly is None:
            poly = base.zero
        elif poly.ring != base:
            poly = rename_terms(poly, base)
        self.poly = poly

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "PolyG":
        return cls(algebra)

    @classmethod
    def constant(cls, algebra: LieAlgebra, value: Scalar) -> "PolyG":
        base = polynomial_ring(algebra.dim)
        return cls(algebra, base.ground_new(to_gaussian(value)))

    @classmethod
    def one(cls, algebra: LieAlgebra) -> "PolyG":
        return cls.constant(algebra, 1)

    @classmethod
    def monomial(
        cls,
        algebra: LieAlgebra,
        alpha: Sequence[int],
        coeff: Scalar = 1,
        lam: int = 0,
        r2: int = 0,
    ) -> "PolyG":
        """``coeff * lam**lam * r2**r2 * xi**alpha``."""
        if len(alpha) != algebra.dim:
            raise PoissonPolyError(
                f"Multi-index {tuple(alpha)} for dimension {algebra.dim}"
            )
        base = polynomial_ring(algebra.dim)
        key = tuple(alpha) + (lam, r2)
        return cls(algebra, base.from_dict({key: to_gaussian(coeff)}))

    @classmethod
    def coordinate(cls, algebra: LieAlgebra, index: int) -> "PolyG":
        """The linear function xi_index (zero-based)."""
        alpha = [0] * algebra.dim
        alpha[index] = 1
        return cls.monomial(algebra, alpha)

    @classmethod
    def linear(cls, algebra: LieAlgebra, vector: Sequence[Any]) -> "PolyG":
        """The linear function x^ with x^(xi) = xi(x)."""
        out = cls.zero(algebra)
        for i, v in enumerate(vector):
            if v:
                out = out + cls.coordinate(algebra, i) * to_rational(v)
        return out

    @classmethod
    def lam(cls, algebra: LieAlgebra) -> "PolyG":
        return cls.monomial(algebra, [0] * algebra.dim, lam=1)

    @classmethod
    def nu(cls, algebra: LieAlgebra) -> "PolyG":
        return cls.monomial(algebra, [0] * algebra.dim, coeff=i_power(1), lam=1)

    @classmethod
    def r2(cls, algebra: LieAlgebra) -> "PolyG":
        return cls.monomial(algebra, [0] * algebra.dim, r2=1)

    @classmethod
    def from_terms(
        cls, algebra: LieAlgebra, terms: Mapping[Monomial, Scalar]
    ) -> "PolyG":
        """Build from full monomials ``alpha + (lam, r2)``."""
        base = polynomial_ring(algebra.dim)
        return cls(
            algebra, base.from_dict({k: to_gaussian(v) for k, v in terms.items()})
        )

    @classmethod
    def parse(
        cls,
        algebra: LieAlgebra,
        text: str,
        aliases: Optional[Mapping[str, str]] = None,
    ) -> "PolyG":
        """Parse an expression in ``xi1..xin``, ``lam``, ``nu`` and ``r2``.

        Args:
            algebra: Owning algebra
            text: Expression such as ``"xi1*xi2 + nu/2*xi3"``
            aliases: Extra names mapped onto ring generators, e.g. q -> xi1

        Raises:
            PoissonPolyError: When the text does not parse to a polynomial
        """
        base = polynomial_ring(algebra.dim)
        names = [str(s) for s in base.symbols]
        local: Dict[str, Any] = {n: Symbol(n) for n in names}
        for alias, target in (aliases or {}).items():
            local[alias] = Symbol(target)
        local["nu"] = I * Symbol("lam")
        try:
            expr = parse_expr(text, local_dict=local)
            return cls(algebra, base.from_expr(expr))
        except Exception as e:
            raise PoissonPolyError(f"Cannot parse polynomial {text!r}: {e}")

    # -- structure --------------------------------------------------------

    @property
    def ring(self) -> PolyRing:
        return self.poly.ring

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def _like(self, poly: PolyElement) -> "PolyG":
        return PolyG(self.algebra, poly)

    def terms(self) -> Iterator[Tuple[Monomial, int, int, Gaussian]]:
        """Yield ``(alpha, lam_exponent, r2_exponent, coeff)`` in order."""
        n = self.dim
        for monom, coeff in sorted(self.poly.items()):
            yield monom[:n], monom[n], monom[n + 1], coeff

    def is_zero(self) -> bool:
        return not self.poly

    def xi_degree(self) -> int:
        """Total degree in xi; -1 for the zero polynomial."""
        n = self.dim
        return max((sum(m[:n]) for m in self.poly.keys()), default=-1)

    def lambda_degree(self) -> int:
        n = self.dim
        return max((m[n] for m in self.poly.keys()), default=-1)

    def lambda_valuation(self) -> Optional[int]:
        n = self.dim
        return min((m[n] for m in self.poly.keys()), default=None)

    def is_lambda_free(self) -> bool:
        return self.lambda_degree() <= 0

    def xi_support(self) -> List[Monomial]:
        n = self.dim
        return sorted({m[:n] for m in self.poly.keys()})

    def coefficient(self, alpha: Sequence[int]) -> SymbolicScalar:
        """Coefficient of xi**alpha as a scalar in lam and r2."""
        n = self.dim
        alpha = tuple(alpha)
        base = polynomial_ring(n)
        picked = {
            (0,) * n + m[n:]: c for m, c in self.poly.items() if m[:n] == alpha
        }
        return SymbolicScalar.from_poly(base.from_dict(picked))

    def scalar_value(self) -> SymbolicScalar:
        """The value of a xi-free polynomial.

        Raises:
            PoissonPolyError: When xi still occurs
        """
        if self.xi_degree() > 0:
            raise PoissonPolyError("Polynomial still depends on xi")
        return self.coefficient((0,) * self.dim)

    def _filter(self, keep: Any) -> "PolyG":
        return self._like(
            self.ring.from_dict({m: c for m, c in self.poly.items() if keep(m)})
        )

    def lambda_coefficient(self, k: int) -> "PolyG":
        """The lambda**k coefficient, as a lambda-free polynomial."""
        n = self.dim
        picked = {
            m[:n] + (0,) + m[n + 1 :]: c
            for m, c in self.poly.items()
            if m[n] == k
        }
        return self._like(self.ring.from_dict(picked))

    def lambda_coefficients(self) -> Dict[int, "PolyG"]:
        n = self.dim
        orders = sorted({m[n] for m in self.poly.keys()})
        return {k: self.lambda_coefficient(k) for k in orders}

    def truncate(self, order: Optional[int]) -> "PolyG":
        """Drop every lambda exponent above ``order``."""
        if order is None:
            return self
        n = self.dim
        return self._filter(lambda m: m[n] <= order)

    def truncate_weight(self, max_weight: int) -> "PolyG":
        """Keep terms whose xi-degree plus lambda exponent is <= max_weight."""
        n = self.dim
        return self._filter(lambda m: sum(m[:n]) + m[n] <= max_weight)

    def homogeneous_component(self, degree: int) -> "PolyG":
        n = self.dim
        return self._filter(lambda m: sum(m[:n]) == degree)

    def homogeneous_components(self) -> Dict[int, "PolyG"]:
        n = self.dim
        degrees = sorted({sum(m[:n]) for m in self.poly.keys()})
        return {d: self.homogeneous_component(d) for d in degrees}

    def conjugate(self) -> "PolyG":
        """Coefficient-wise conjugation, lambda and xi treated as real."""
        return self._like(conjugate_coefficients(self.ring, self.poly))

    def diff(self, index: int) -> "PolyG":
        """Partial derivative in xi_index (zero-based)."""
        return self._like(self.poly.diff(self.ring.gens[index]))

    def diff_multi(self, beta: Sequence[int]) -> "PolyG":
        out = self.poly
        for i, k in enumerate(beta):
            for _ in range(k):
                out = out.diff(self.ring.gens[i])
        return self._like(out)

    def laplacian(self) -> "PolyG":
        out = self.ring.zero
        for i in range(self.dim):
            gen = self.ring.gens[i]
            out = out + self.poly.diff(gen).diff(gen)
        return self._like(out)

    def euler_weight(self) -> "PolyG":
        """Apply lam d/dlam plus the Euler field, i.e. nu d/dnu + L_E."""
        n = self.dim
        return self._like(
            self.ring.from_dict(
                {
                    m: c * (sum(m[:n]) + m[n])
                    for m, c in self.poly.items()
                    if sum(m[:n]) + m[n]
                }
            )
        )

    def substitute_r2(self, value: Scalar) -> "PolyG":
        """Bind the r2 indeterminate to a rational value."""
        gen = self.ring.gens[self.dim + 1]
        return self._like(
            self.poly.compose(gen, self.ring.ground_new(to_gaussian(value)))
        )

    def evaluate(self, point: Sequence[Any]) -> SymbolicScalar:
        """Substitute a rational point for xi."""
        pairs = [
            (self.ring.gens[i], self.ring.ground_new(to_gaussian(v)))
            for i, v in enumerate(point)
        ]
        return PolyG(self.algebra, self.poly.compose(pairs)).scalar_value()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Any) -> PolyElement:
        if isinstance(other, PolyG):
            if other.dim != self.dim:
                raise PoissonPolyError(
                    f"Dimension mismatch {self.dim} vs {other.dim}"
                )
            return other.poly
        if isinstance(other, (LambdaPoly, SymbolicScalar)):
            return rename_terms(other.poly, self.ring)
        return self.ring.ground_new(to_gaussian(other))

    def __add__(self, other: Any) -> "PolyG":
        return self._like(self.poly + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PolyG":
        return self._like(self.poly - self._coerce(other))

    def __rsub__(self, other: Any) -> "PolyG":
        return self._like(self._coerce(other) - self.poly)

    def __neg__(self) -> "PolyG":
        return self._like(-self.poly)

    def __mul__(self, other: Any) -> "PolyG":
        """Pointwise product, or scaling by a scalar."""
        return self._like(self.poly * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolyG":
        return self._like(self.poly**k)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyG):
            return self.dim == other.dim and bool(self.poly == other.poly)
        if isinstance(other, int) or hasattr(other, "x"):
            return bool(self.poly == self._coerce(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self.poly.items()))))

    def __repr__(self) -> str:
        return f"PolyG({self.poly.as_expr()})"

    def __str__(self) -> str:
        return str(self.poly.as_expr())

    def to_json(self) -> List[Dict[str, Any]]:
        """Sorted terms ``{"xi": [...], "lam": k, "r2": s, "coefficient"}``."""
        return [
            {
                "xi": list(alpha),
                "lam": lam,
                "r2": r2,
                "coefficient": format_gaussian(c),
            }
            for alpha, lam, r2, c in self.terms()
        ]

    @classmethod
    def from_json(cls, algebra: LieAlgebra, data: Sequence[Mapping[str, Any]]) -> "PolyG":
        """Inverse of :meth:`to_json`."""
        return cls.from_terms(
            algebra,
            {
                tuple(t["xi"]) + (int(t["lam"]), int(t["r2"])): parse_gaussian(
                    t["coefficient"]
                )
                for t in data
            },
        )


def monomials_up_to(dim: int, degree: int) -> List[Monomial]:
    """All multi-indices of total degree <= degree, by degree then lex."""
    out: List[Monomial] = []

    def build(prefix: List[int], remaining: int, slots: int) -> None:
        if slots == 0:
            out.append(tuple(prefix))
            return
        for k in range(remaining + 1):
            build(prefix + [k], remaining - k, slots - 1)

    build([], degree, dim)
    return sorted(out, key=lambda m: (sum(m), tuple(-v for v in m)))


def unit_vector(dim: int, index: int) -> List[int]:
    vec = [0] * dim
    vec[index] = 1
    return vec


