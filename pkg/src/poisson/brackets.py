"""Linear Poisson structure on g* and the homogeneity operator."""

import logging
from typing import Callable

from src.poisson.polynomial import PolyG, PoissonPolyError


logger = logging.getLogger(__name__)

StarFunction = Callable[[PolyG, PolyG], PolyG]


def poisson_bracket(f: PolyG, g: PolyG) -> PolyG:
    """{f, g} = xi_k c^k_ij df/dxi_i dg/dxi_j.

    Raises:
        PoissonPolyError: When f and g live over different algebras
    """
    if f.algebra != g.algebra:
        raise PoissonPolyError("Poisson bracket across different algebras")
    algebra = f.algebra
    df = [f.diff(i) for i in range(algebra.dim)]
    dg = [g.diff(j) for j in range(algebra.dim)]
    out = PolyG.zero(algebra)
    for (i, j, k), c in algebra.nonzero_constants():
        if df[i].is_zero() or dg[j].is_zero():
            continue
        out = out + PolyG.coordinate(algebra, k) * df[i] * dg[j] * c
    return out


def homogeneity_defect(star: StarFunction, f: PolyG, g: PolyG) -> PolyG:
    """H(f*g) - H(f)*g - f*H(g) with H = lam d/dlam + Euler degree.

    Zero certifies that H is a derivation of ``star`` on the pair.
    """
    return (
        star(f, g).euler_weight()
        - star(f.euler_weight(), g)
        - star(f, g.euler_weight())
    )
