"""Weyl-Moyal product on R^2n with Darboux coordinates (q_k, p_k).

``q_k = xi_k`` and ``p_k = xi_(n+k)`` over ``abelian(2n)``. Expanding
``exp((lam / 2i) P)`` with ``P = sum_k dq_k x dp_k - dp_k x dq_k`` gives

    f * g = sum_(a, b) (lam/2i)^(|a|+|b|) (-1)^|b| / (a! b!)
            dq^a dp^b f . dp^a dq^b g
"""

import itertools
import logging
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from src.core.exact import gaussian, to_gaussian
from src.lie.algebra import LieAlgebra
from src.lie.catalog import abelian
from src.poisson.polynomial import PolyG, WrongDimension
from src.star.base import StarProduct


logger = logging.getLogger(__name__)

HALF_OVER_I = gaussian(0, QQ(-1, 2))


def phase_space(n: int) -> LieAlgebra:
    """abelian(2n) with basis labels q1..qn, p1..pn."""
    base = abelian(2 * n)
    labels = [f"q{k}" for k in range(1, n + 1)] + [
        f"p{k}" for k in range(1, n + 1)
    ]
    return LieAlgebra(f"phase_space({n})", 2 * n, labels, base.constants)


def darboux_aliases(n: int) -> Dict[str, str]:
    """Expression aliases q_k -> xi_k and p_k -> xi_(n+k)."""
    aliases = {}
    for k in range(1, n + 1):
        aliases[f"q{k}"] = f"xi{k}"
        aliases[f"p{k}"] = f"xi{n + k}"
    if n == 1:
        aliases["q"] = "xi1"
        aliases["p"] = "xi2"
    return aliases


def _derivative(f: PolyG, n: int, a: Sequence[int], b: Sequence[int], swap: bool) -> PolyG:
    """dq^a dp^b f, or dp^a dq^b f when ``swap``."""
    beta = [0] * (2 * n)
    for k in range(n):
        if swap:
            beta[n + k] = a[k]
            beta[k] = b[k]
        else:
            beta[k] = a[k]
            beta[n + k] = b[k]
    return f.diff_multi(beta)


def _splits(n: int, bound: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    out = []
    for combo in itertools.product(range(bound + 1), repeat=2 * n):
        if sum(combo) <= bound:
            out.append((tuple(combo[:n]), tuple(combo[n:])))
    return out


def moyal(f: PolyG, g: PolyG, order: Optional[int] = None) -> PolyG:
    """Weyl-Moyal product; terminates on polynomials.

    Raises:
        WrongDimension: When the number of variables is odd
    """
    dim = f.dim
    if dim % 2:
        raise WrongDimension(f"Moyal product needs an even dimension, got {dim}")
    n = dim // 2
    bound = min(f.xi_degree(), g.xi_degree())
    if order is not None:
        bound = min(bound, order)
    out = PolyG.zero(f.algebra)
    if bound < 0:
        return out
    lam = PolyG.lam(f.algebra)
    for a, b in _splits(n, bound):
        r = sum(a) + sum(b)
        left = _derivative(f, n, a, b, swap=False)
        if left.is_zero():
            continue
        right = _derivative(g, n, a, b, swap=True)
        if right.is_zero():
            continue
        weight = 1
        for v in a + b:
            weight *= factorial(v)
        scale = HALF_OVER_I**r * to_gaussian(QQ((-1) ** sum(b), weight))
        out = out + left * right * (lam**r) * scale
    return out.truncate(order)


def poisson_bivector(f: PolyG, g: PolyG) -> PolyG:
    """P(f, g) = sum_k dq_k f dp_k g - dp_k f dq_k g."""
    n = f.dim // 2
    out = PolyG.zero(f.algebra)
    for k in range(n):
        out = out + f.diff(k) * g.diff(n + k) - f.diff(n + k) * g.diff(k)
    return out


class MoyalProduct(StarProduct):
    """Weyl-Moyal product on a phase space."""

    @property
    def name(self) -> str:
        return "moyal"

    def _multiply(self, f: PolyG, g: PolyG) -> PolyG:
        return moyal(f, g, self.order)
