"""Koszul reduction of the BCH product onto the sphere orbits of su(2).

Orbit functions are represented by sums of harmonic polynomials; the
restriction of a polynomial replaces every power of ``u = |xi|^2`` in its
harmonic decomposition by ``r2``. The contracting homotopy is the exact
division ``h0(f) = (f - prol(restrict(f))) / J`` with ``J = u - r2``, and
the deformed restriction is

    restrict o sum_m (A h0)^m,   A(g) = J g - g * J,

which terminates order by order because A = O(lambda^2).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Union

from src.core.exact import (
    ExactArithmeticError,
    Rational,
    SymbolicScalar,
    format_rational,
    parse_rational,
)
from src.lie.algebra import LieAlgebra
from src.poisson.brackets import poisson_bracket
from src.poisson.harmonic import harmonic_decompose, radial_square
from src.poisson.integrals import sphere_average
from src.poisson.polynomial import PolyG
from src.poisson.samples import monomial_samples
from src.star.base import BCHStarProduct, StarProduct


logger = logging.getLogger(__name__)

DEFAULT_ORBIT_ORDER = 6


class OrbitReductionError(Exception):
    """Raised when a reduction is requested outside its domain."""

    pass


@dataclass(frozen=True)
class Radius:
    """Squared orbit radius: a positive rational or the symbol ``r2``."""

    value: Optional[Rational] = None

    @property
    def symbolic(self) -> bool:
        return self.value is None

    def as_poly(self, algebra: LieAlgebra) -> PolyG:
        if self.value is None:
            return PolyG.r2(algebra)
        return PolyG.constant(algebra, self.value)

    def __str__(self) -> str:
        return "symbolic" if self.value is None else format_rational(self.value)


def parse_radius(text: Union[str, int, None]) -> Radius:
    """Parse ``"symbolic"`` or a positive rational ``"p/q"``.

    Raises:
        OrbitReductionError: When the value is not a positive rational
    """
    if text is None or str(text).strip().lower() == "symbolic":
        return Radius()
    try:
        value = parse_rational(text)
    except ExactArithmeticError as e:
        raise OrbitReductionError(f"Invalid orbit radius {text!r}: {e}")
    if value <= 0:
        raise OrbitReductionError(f"Squared radius must be positive, got {text}")
    return Radius(value)


class OrbitFn:
    """Function on the orbit, held as its harmonic representative."""

    __slots__ = ("representative", "radius")

    def __init__(self, representative: PolyG, radius: Radius) -> None:
        self.representative = representative
        self.radius = radius

    @property
    def algebra(self) -> LieAlgebra:
        return self.representative.algebra

    def is_zero(self) -> bool:
        return self.representative.is_zero()

    def is_harmonic(self) -> bool:
        return self.representative.laplacian().is_zero()

    def truncate(self, order: Optional[int]) -> "OrbitFn":
        return OrbitFn(self.representative.truncate(order), self.radius)

    def conjugate(self) -> "OrbitFn":
        return OrbitFn(self.representative.conjugate(), self.radius)

    def lambda_coefficient(self, k: int) -> "OrbitFn":
        return OrbitFn(self.representative.lambda_coefficient(k), self.radius)

    def __add__(self, other: "OrbitFn") -> "OrbitFn":
        return OrbitFn(self.representative + other.representative, self.radius)

    def __sub__(self, other: "OrbitFn") -> "OrbitFn":
        return OrbitFn(self.representative - other.representative, self.radius)

    def __neg__(self) -> "OrbitFn":
        return OrbitFn(-self.representative, self.radius)

    def __mul__(self, scalar: Any) -> "OrbitFn":
        """Scaling by a scalar or a lambda-polynomial."""
        if isinstance(scalar, OrbitFn):
            raise OrbitReductionError("Use the orbit star product for products")
        return OrbitFn(self.representative * scalar, self.radius)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrbitFn):
            return NotImplemented
        return self.representative == other.representative

    def __hash__(self) -> int:
        return hash(self.representative)

    def __repr__(self) -> str:
        return f"OrbitFn({self.representative!r}, r2={self.radius})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "r2": str(self.radius),
            "representative": self.representative.to_json(),
        }


@dataclass
class KoszulChain:
    """Element of Lambda^l(t) (x) Pol for the single Casimir; l in {0, 1}."""

    degree: int
    payload: PolyG

    def __post_init__(self) -> None:
        if self.degree not in (0, 1):
            raise OrbitReductionError(f"Chain degree {self.degree} not in {{0, 1}}")


def casimir_J(algebra: LieAlgebra, radius: Radius) -> PolyG:
    """J = xi1^2 + xi2^2 + xi3^2 - r2."""
    return radial_square(PolyG.zero(algebra)) - radius.as_poly(algebra)


class OrbitReducer:
    """Reduction of the BCH product of su(2) onto one sphere orbit.

    Args:
        algebra: A three-dimensional algebra whose quadratic Casimir is u
        radius: Squared orbit radius
        order: Lambda truncation of the deformed maps
        casimirs: Optional list of Casimir polynomials; only [J] is supported
    """

    def __init__(
        self,
        algebra: LieAlgebra,
        radius: Radius,
        order: int = DEFAULT_ORBIT_ORDER,
        casimirs: Optional[Sequence[PolyG]] = None,
    ) -> None:
        if algebra.dim != 3:
            raise OrbitReductionError(
                f"Sphere reduction needs dimension 3, got {algebra.dim}"
            )
        self.algebra = algebra
        self.radius = radius
        self.order = order
        self.J = casimir_J(algebra, radius)
        if casimirs is not None:
            if len(casimirs) != 1 or casimirs[0] != self.J:
                raise OrbitReductionError(
                    "Only the single quadratic Casimir is supported"
                )
        for i in range(3):
            if not poisson_bracket(self.J, PolyG.coordinate(algebra, i)).is_zero():
                raise OrbitReductionError(
                    f"{algebra.name}: |xi|^2 is not a Casimir"
                )
        self.star: StarProduct = BCHStarProduct(algebra, order)

    # -- classical maps ---------------------------------------------------

    def _wrap(self, representative: PolyG) -> OrbitFn:
        return OrbitFn(representative, self.radius)

    def orbit_function(self, f: PolyG) -> OrbitFn:
        """Class of f; same as :meth:`restrict`."""
        return self.restrict(f)

    def prolong(self, phi: OrbitFn) -> PolyG:
        """The harmonic representative viewed as a polynomial on g*."""
        return phi.representative

    def restrict(self, f: PolyG) -> OrbitFn:
        """Canonical representative of f modulo (J)."""
        r2 = self.radius.as_poly(self.algebra)
        out = PolyG.zero(self.algebra)
        for (m, _), h in harmonic_decompose(f).items():
            out = out + r2**m * h
        return self._wrap(out)

    def homotopy_h0(self, f: PolyG) -> PolyG:
        """The q with f - prol(restrict(f)) = J q."""
        u = radial_square(f)
        r2 = self.radius.as_poly(self.algebra)
        out = PolyG.zero(self.algebra)
        for (m, _), h in harmonic_decompose(f).items():
            for i in range(m):
                out = out + u**i * r2 ** (m - 1 - i) * h
        return out

    def boundary(self, chain: KoszulChain) -> KoszulChain:
        """Koszul boundary; lowers the degree by one."""
        if chain.degree == 0:
            raise OrbitReductionError("Degree-0 chains have no boundary")
        return KoszulChain(0, self.J * chain.payload)

    def homotopy(self, chain: KoszulChain) -> KoszulChain:
        """Contracting homotopy; raises the degree by one."""
        if chain.degree == 1:
            raise OrbitReductionError("Degree-1 chains have no homotopy image")
        return KoszulChain(1, self.homotopy_h0(chain.payload))

    # -- deformed maps ----------------------------------------------------

    def deformation(self, g: PolyG) -> PolyG:
        """A(g) = J g - g * J; lambda-order at least two."""
        return (self.J * g - self.star(g, self.J)).truncate(self.order)

    def deformed_boundary(self, g: PolyG) -> PolyG:
        return self.star(g, self.J)

    def deformed_restrict(self, f: PolyG) -> OrbitFn:
        """restrict applied to sum_m (A h0)^m f, through lambda^order."""
        total = f.truncate(self.order)
        term = total
        for _ in range(self.order // 2 + 1):
            term = self.deformation(self.homotopy_h0(term))
            if term.is_zero():
                break
            total = total + term
        return self.restrict(total).truncate(self.order)

    def star_orbit(self, phi: OrbitFn, psi: OrbitFn) -> OrbitFn:
        """phi *_O psi = deformed restriction of prol(phi) * prol(psi)."""
        return self.deformed_restrict(self.star(self.prolong(phi), self.prolong(psi)))

    def positive_trace(self, f: PolyG) -> SymbolicScalar:
        """Sphere average of the deformed restriction."""
        rep = self.deformed_restrict(f).representative
        return sphere_average(rep, self.radius.value)

    def orbit_trace(self, phi: OrbitFn) -> SymbolicScalar:
        return sphere_average(phi.representative, self.radius.value)

    def orbit_poisson_bracket(self, phi: OrbitFn, psi: OrbitFn) -> OrbitFn:
        return self.restrict(
            poisson_bracket(self.prolong(phi), self.prolong(psi))
        )

    def lie_derivative(self, x: Union[int, Sequence[Any]], phi: OrbitFn) -> OrbitFn:
        """Fundamental vector field of x acting on phi: restrict({x, prol phi})."""
        if isinstance(x, int):
            xhat = PolyG.coordinate(self.algebra, x)
        else:
            xhat = PolyG.linear(self.algebra, x)
        return self.restrict(poisson_bracket(xhat, self.prolong(phi)))

    def harmonic_classes(self, degree: int) -> List[OrbitFn]:
        """Restrictions of the monomials of degree <= degree, deduplicated."""
        seen: List[OrbitFn] = []
        for f in monomial_samples(self.algebra, degree):
            phi = self.restrict(f)
            if not phi.is_zero() and phi not in seen:
                seen.append(phi)
        return seen
