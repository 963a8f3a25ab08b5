"""Star products on polynomial functions over g*.

``f * g = fg + sum_r nu^r C_r(f, g)`` with ``nu = i lam``. Every product
implements :class:`StarProduct`; the BCH product is evaluated from the
cached symmetric-basis tables of :mod:`src.enveloping.pbw`.
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

from src.core.exact import i_power, to_gaussian
from src.enveloping.pbw import enveloping_for
from src.lie.algebra import LieAlgebra
from src.poisson.polynomial import PolyG, PoissonPolyError, polynomial_ring


logger = logging.getLogger(__name__)


class StarProduct(ABC):
    """Associative formal deformation of the pointwise product."""

    def __init__(self, order: Optional[int] = None) -> None:
        self.order = order

    @property
    @abstractmethod
    def name(self) -> str:
        """Short product name used in reports."""
        pass

    @abstractmethod
    def _multiply(self, f: PolyG, g: PolyG) -> PolyG:
        pass

    def multiply(self, f: PolyG, g: PolyG) -> PolyG:
        """f * g, truncated at the product's lambda order when set.

        Raises:
            PoissonPolyError: When f and g live over different algebras
        """
        if f.algebra != g.algebra:
            raise PoissonPolyError(
                f"{self.name} product across different algebras"
            )
        return self._multiply(f, g).truncate(self.order)

    def __call__(self, f: PolyG, g: PolyG) -> PolyG:
        return self.multiply(f, g)

    def commutator(self, f: PolyG, g: PolyG) -> PolyG:
        return self.multiply(f, g) - self.multiply(g, f)

    def power(self, f: PolyG, k: int) -> PolyG:
        out = PolyG.one(f.algebra)
        for _ in range(k):
            out = self.multiply(out, f)
        return out

    def with_order(self, order: Optional[int]) -> "StarProduct":
        """Same product with another truncation order."""
        clone = type(self).__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.order = order
        return clone


class PointwiseProduct(StarProduct):
    """The undeformed commutative product."""

    @property
    def name(self) -> str:
        return "pointwise"

    def _multiply(self, f: PolyG, g: PolyG) -> PolyG:
        return f * g


def star_bch(algebra: LieAlgebra, f: PolyG, g: PolyG) -> PolyG:
    """Gutt product sigma_nu^-1(sigma_nu(f) sigma_nu(g)).

    With sigma_nu(xi^alpha) = nu^|alpha| S(alpha) and
    S(alpha) S(gamma) = sum_beta c_beta S(beta), each monomial pair
    contributes sum_beta c_beta nu^(|alpha|+|gamma|-|beta|) xi^beta.
    """
    store = enveloping_for(algebra)
    n = algebra.dim
    base = polynomial_ring(n)
    zero = base.domain.zero
    terms: Dict[Tuple[int, ...], object] = {}
    for alpha, l1, s1, c1 in f.terms():
        for gamma, l2, s2, c2 in g.terms():
            weight = sum(alpha) + sum(gamma)
            coeff = c1 * c2
            for beta, c in store.star_coefficients(alpha, gamma).items():
                k = weight - sum(beta)
                key = beta + (l1 + l2 + k, s1 + s2)
                value = coeff * to_gaussian(c) * i_power(k)
                terms[key] = terms.get(key, zero) + value
    return PolyG(algebra, base.from_dict(terms))


class BCHStarProduct(StarProduct):
    """The BCH (Gutt) star product of one Lie algebra."""

    def __init__(self, algebra: LieAlgebra, order: Optional[int] = None) -> None:
        super().__init__(order)
        self.algebra = algebra

    @property
    def name(self) -> str:
        return "bch"

    def _multiply(self, f: PolyG, g: PolyG) -> PolyG:
        return star_bch(self.algebra, f, g)
