"""Differential operators with polynomial coefficients and the extraction
of the bidifferential operators C_r of a star product.

``C_r`` is read in the lambda convention: ``f * g = sum_r lam^r C_r(f, g)``.
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, List, Optional, Tuple, Union

from sympy.polys.domains import QQ

from src.core.exact import ExactArithmeticError, to_gaussian
from src.lie.algebra import LieAlgebra
from src.poisson.integrals import GaussPoly
from src.poisson.polynomial import (
    Monomial,
    PoissonPolyError,
    PolyG,
    monomials_up_to,
)
from src.star.base import StarProduct


logger = logging.getLogger(__name__)

SIDES = ("left", "right")


class BidifferentialOrderError(Exception):
    """Raised when an extracted operator fails its order bound."""

    pass


def _falling(gamma: Monomial, beta: Monomial) -> int:
    """gamma! / (gamma - beta)!"""
    out = 1
    for g, b in zip(gamma, beta):
        out *= factorial(g) // factorial(g - b)
    return out


def _dominated(beta: Monomial, gamma: Monomial) -> bool:
    return all(b <= g for b, g in zip(beta, gamma))


@dataclass
class DiffOp:
    """sum_beta a_beta d^beta with polynomial coefficients a_beta."""

    dim: int
    terms: Dict[Monomial, PolyG] = field(default_factory=dict)

    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, g: Union[PolyG, GaussPoly]) -> Union[PolyG, GaussPoly]:
        """Apply to a polynomial or to a Gaussian-class function."""
        if isinstance(g, GaussPoly):
            out = GaussPoly(PolyG.zero(g.factor.algebra))
            for beta, coeff in sorted(self.terms.items()):
                out = out + g.derivative_multi(beta).multiply(coeff)
            return out
        result = PolyG.zero(g.algebra)
        for beta, coeff in sorted(self.terms.items()):
            result = result + coeff * g.diff_multi(beta)
        return result

    def __call__(self, g: Union[PolyG, GaussPoly]) -> Union[PolyG, GaussPoly]:
        return self.apply(g)

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"d": list(beta), "coefficient": coeff.to_json()}
            for beta, coeff in sorted(self.terms.items())
        ]


def _coefficient(
    star: StarProduct, f: PolyG, g: PolyG, r: int, side: str
) -> PolyG:
    product = star.multiply(f, g) if side == "left" else star.multiply(g, f)
    return product.lambda_coefficient(r)


_cache: Dict[Tuple[Any, ...], DiffOp] = {}
_cache_lock = threading.Lock()


def cached_operators() -> Dict[Tuple[Any, ...], DiffOp]:
    """Snapshot of the extracted-operator cache."""
    with _cache_lock:
        return dict(_cache)


def clear_operator_cache() -> None:
    with _cache_lock:
        _cache.clear()


def bidiff_extract(
    star: StarProduct, f: PolyG, r: int, side: str = "left"
) -> DiffOp:
    """Reconstruct C_r(f, .) (side "left") or C_r(., f) (side "right").

    The operator has order at most r. Its coefficients are solved from the
    products with xi^gamma, |gamma| <= r, by
    ``a_gamma = (C_r(f, xi^gamma) - sum_(beta < gamma) a_beta
    gamma!/(gamma-beta)! xi^(gamma-beta)) / gamma!``; the bound is then
    checked on degree r + 1.

    Raises:
        BidifferentialOrderError: When r is negative, the side is unknown,
            f depends on lambda, or the degree r + 1 check fails
    """
    if r < 0:
        raise BidifferentialOrderError(f"Order must be nonnegative, got {r}")
    if side not in SIDES:
        raise BidifferentialOrderError(f"Unknown side {side!r}")
    if not f.is_lambda_free():
        raise BidifferentialOrderError("Extraction needs a lambda-free argument")

    key = (star.name, star.order, f.algebra, f, r, side)
    with _cache_lock:
        cached = _cache.get(key)
    if cached is not None:
        return cached

    algebra = f.algebra
    n = algebra.dim
    op = DiffOp(n)
    for gamma in monomials_up_to(n, r):
        test_monomial = PolyG.monomial(algebra, gamma)
        value = _coefficient(star, f, test_monomial, r, side)
        for beta, coeff in op.terms.items():
            if beta != gamma and _dominated(beta, gamma):
                rest = tuple(g - b for g, b in zip(gamma, beta))
                value = value - coeff * PolyG.monomial(
                    algebra, rest, _falling(gamma, beta)
                )
        if value.is_zero():
            continue
        weight = 1
        for g in gamma:
            weight *= factorial(g)
        op.terms[gamma] = value * to_gaussian(QQ(1, weight))

    for gamma in monomials_up_to(n, r + 1):
        if sum(gamma) != r + 1:
            continue
        test_monomial = PolyG.monomial(algebra, gamma)
        expected = _coefficient(star, f, test_monomial, r, side)
        if op.apply(test_monomial) != expected:
            raise BidifferentialOrderError(
                f"C_{r} on the {side} exceeds order {r} at xi^{gamma}"
            )

    with _cache_lock:
        op = _cache.setdefault(key, op)
    logger.debug(f"Extracted C_{r} ({side}) of order {op.order()} for {star.name}")
    return op


def export_operators(algebra: LieAlgebra) -> List[Dict[str, Any]]:
    """Serializable snapshot of the cached operators of one algebra."""
    rows = []
    for (name, order, owner, f, r, side), op in cached_operators().items():
        if owner != algebra:
            continue
        rows.append(
            {
                "star": name,
                "order": order,
                "f": f.to_json(),
                "r": r,
                "side": side,
                "operator": op.to_json(),
            }
        )
    return sorted(rows, key=lambda row: json.dumps(row, sort_keys=True))


def parse_operators(
    algebra: LieAlgebra, rows: List[Dict[str, Any]]
) -> Dict[Tuple[Any, ...], DiffOp]:
    """Validate rows written by :func:`export_operators` without loading them.

    Raises:
        BidifferentialOrderError: When a row is malformed
    """
    parsed: Dict[Tuple[Any, ...], DiffOp] = {}
    try:
        for row in rows:
            f = PolyG.from_json(algebra, row["f"])
            terms: Dict[Monomial, PolyG] = {}
            for t in row["operator"]:
                beta = tuple(t["d"])
                if len(beta) != algebra.dim or any(
                    not isinstance(b, int) or b < 0 for b in beta
                ):
                    raise ValueError(f"bad derivative {t['d']!r}")
                terms[beta] = PolyG.from_json(algebra, t["coefficient"])
            side = row["side"]
            if side not in SIDES:
                raise ValueError(f"unknown side {side!r}")
            key = (row["star"], row["order"], algebra, f, int(row["r"]), side)
            parsed[key] = DiffOp(algebra.dim, terms)
    except (
        AttributeError,
        KeyError,
        TypeError,
        ValueError,
        ExactArithmeticError,
        PoissonPolyError,
    ) as e:
        raise BidifferentialOrderError(f"Malformed operator rows: {e}")
    return parsed


def publish_operators(parsed: Dict[Tuple[Any, ...], DiffOp]) -> int:
    """Merge operators returned by :func:`parse_operators`; existing ones win."""
    with _cache_lock:
        for key, op in parsed.items():
            _cache.setdefault(key, op)
    return len(parsed)


def import_operators(algebra: LieAlgebra, rows: List[Dict[str, Any]]) -> int:
    """Load rows written by :func:`export_operators`, all or nothing.

    Raises:
        BidifferentialOrderError: When a row is malformed
    """
    return publish_operators(parse_operators(algebra, rows))


def apply_operators(
    operators: Dict[int, DiffOp], g: Union[PolyG, GaussPoly]
) -> Dict[int, Union[PolyG, GaussPoly]]:
    """Apply each C_r to the same argument."""
    return {r: op.apply(g) for r, op in sorted(operators.items())}


def extract_range(
    star: StarProduct, f: PolyG, max_order: int, side: str = "left"
) -> Dict[int, DiffOp]:
    """C_0 .. C_max_order for one argument."""
    return {r: bidiff_extract(star, f, r, side) for r in range(max_order + 1)}


def reconstruct(
    operators: Dict[int, DiffOp], g: PolyG, order: Optional[int] = None
) -> PolyG:
    """sum_r lam^r C_r(f, g) from extracted operators."""
    lam = PolyG.lam(g.algebra)
    out = PolyG.zero(g.algebra)
    for r, op in sorted(operators.items()):
        if order is not None and r > order:
            break
        out = out + op.apply(g) * lam**r
    return out
