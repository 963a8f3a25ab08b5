"""Exact integrators: Gaussian moments on R^n and sphere averages.

Transcendental constants stay symbolic: the Gaussian integral of a monomial
is a rational multiple of ``sqrt2pi**n``, and the sphere average is
rational in ``r2``.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from sympy import factorial2
from sympy.polys.domains import QQ

from src.core.exact import Scalar, SymbolicScalar, symbolic_ring, to_gaussian
from src.poisson.polynomial import PolyG, WrongDimension


logger = logging.getLogger(__name__)


def double_factorial(k: int) -> int:
    """k!! with the convention (-1)!! = 0!! = 1."""
    if k <= 0:
        return 1
    return int(factorial2(k))


@dataclass(frozen=True)
class GaussPoly:
    """p(xi) exp(-|xi|^2 / 2) with the weight left implicit."""

    factor: PolyG

    def derivative(self, index: int) -> "GaussPoly":
        """d/dxi_index, which acts as dp - xi_index p on the factor."""
        xi = PolyG.coordinate(self.factor.algebra, index)
        return GaussPoly(self.factor.diff(index) - xi * self.factor)

    def derivative_multi(self, beta: Sequence[int]) -> "GaussPoly":
        out = self
        for i, k in enumerate(beta):
            for _ in range(k):
                out = out.derivative(i)
        return out

    def multiply(self, p: Any) -> "GaussPoly":
        return GaussPoly(self.factor * p)

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        return GaussPoly(self.factor + other.factor)

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return GaussPoly(self.factor - other.factor)

    def is_zero(self) -> bool:
        return self.factor.is_zero()


def gaussian_integral(f: GaussPoly) -> SymbolicScalar:
    """Integral of p(xi) exp(-|xi|^2/2) over R^n.

    Odd moments vanish and the 2m-th moment is (2m-1)!! sqrt(2 pi).
    """
    p = f.factor
    n = p.dim
    base = symbolic_ring()
    total = base.zero
    lam, r2, sqrt2pi = base.gens[0], base.gens[1], base.gens[2]
    for alpha, l, s, c in p.terms():
        if any(a % 2 for a in alpha):
            continue
        moment = 1
        for a in alpha:
            moment *= double_factorial(a - 1)
        total += lam**l * r2**s * (c * moment)
    return SymbolicScalar(total * sqrt2pi**n)


def sphere_average(f: PolyG, r2: Optional[Scalar] = None) -> SymbolicScalar:
    """Mean of f over the sphere |xi|^2 = r2 in R^3.

    Args:
        f: Polynomial over a three-dimensional algebra
        r2: Rational squared radius; symbolic ``r2`` when None

    Raises:
        WrongDimension: When the algebra is not three-dimensional
    """
    if f.dim != 3:
        raise WrongDimension(
            f"Sphere average needs dimension 3, got {f.dim}"
        )
    base = symbolic_ring()
    lam, r2_gen = base.gens[0], base.gens[1]
    total = base.zero
    for alpha, l, s, c in f.terms():
        if any(a % 2 for a in alpha):
            continue
        degree = sum(alpha)
        num = 1
        for a in alpha:
            num *= double_factorial(a - 1)
        weight = QQ(num, double_factorial(degree + 1))
        total += lam**l * r2_gen ** (s + degree // 2) * (c * to_gaussian(weight))
    result = SymbolicScalar(total)
    if r2 is not None:
        result = result.bind("r2", r2)
    return result


def point_evaluation(f: PolyG, point: Sequence[Any]) -> SymbolicScalar:
    """Evaluation functional at a rational point of g*."""
    return f.evaluate(point)
