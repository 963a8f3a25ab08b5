"""Decomposition f = sum_m u^m H_m into harmonic pieces, u = |xi|^2.

Per homogeneous degree d the recursion uses
``Laplacian(u^j H) = 2j(2(d-2j) + n + 2j - 2) u^(j-1) H`` for H harmonic
of degree d - 2j, so the Laplacian of f determines every piece but the
top one.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

from sympy.polys.domains import QQ

from src.core.exact import to_gaussian
from src.poisson.polynomial import PolyG, PoissonPolyError


logger = logging.getLogger(__name__)


def radial_square(template: PolyG) -> PolyG:
    """u = xi_1^2 + ... + xi_n^2 over the algebra of ``template``."""
    algebra = template.algebra
    out = PolyG.zero(algebra)
    for i in range(algebra.dim):
        xi = PolyG.coordinate(algebra, i)
        out = out + xi * xi
    return out


@dataclass
class HarmonicDecomposition:
    """Map (m, d) -> harmonic H of degree d with f = sum u^m H."""

    components: Dict[Tuple[int, int], PolyG] = field(default_factory=dict)

    def items(self) -> Iterator[Tuple[Tuple[int, int], PolyG]]:
        return iter(sorted(self.components.items()))

    def reassemble(self, template: PolyG) -> PolyG:
        u = radial_square(template)
        out = PolyG.zero(template.algebra)
        for (m, _), h in self.items():
            out = out + u**m * h
        return out

    def is_harmonic(self) -> bool:
        return all(h.laplacian().is_zero() for h in self.components.values())


def _decompose_homogeneous(p: PolyG, degree: int) -> Dict[int, PolyG]:
    """Pieces {j: H_(degree - 2j)} of a homogeneous polynomial."""
    if p.is_zero():
        return {}
    if degree < 2:
        return {0: p}
    lap = p.laplacian()
    if lap.is_zero():
        return {0: p}

    n = p.dim
    u = radial_square(p)
    result: Dict[int, PolyG] = {}
    remainder = p
    for i, k in _decompose_homogeneous(lap, degree - 2).items():
        j = i + 1
        scale = 2 * j * (2 * degree - 2 * j + n - 2)
        h = k * to_gaussian(QQ(1, scale))
        result[j] = h
        remainder = remainder - u**j * h
    if not remainder.is_zero():
        result[0] = remainder
    return result


def harmonic_decompose(f: PolyG) -> HarmonicDecomposition:
    """Unique decomposition of f into powers of u times harmonics.

    Raises:
        PoissonPolyError: When the reassembly check fails
    """
    decomposition = HarmonicDecomposition()
    for degree, part in f.homogeneous_components().items():
        for j, h in _decompose_homogeneous(part, degree).items():
            decomposition.components[(j, degree - 2 * j)] = h
    if decomposition.reassemble(f) != f:
        raise PoissonPolyError("Harmonic decomposition does not reassemble")
    return decomposition
