"""Deformation of classical projections into star projections.

For P0 with P0 P0 = P0 pointwise,

    P = 1/2 + (P0 - 1/2) * (1 + 4(P0*P0 - P0))^(-1/2)

is idempotent for the star product. The inverse square root is found by
the Newton recursion X <- X + (1 - X*A*X)*X / 2 starting from X = 1.
"""

import logging
from typing import Any, List, Optional, Sequence

from sympy.polys.domains import QQ

from src.core.checks import CheckResult, CheckStatus
from src.core.exact import SymbolicScalar, to_gaussian
from src.lie.algebra import LieAlgebra
from src.poisson.polynomial import PolyG
from src.star.base import StarProduct
from src.star.functionals import TraceFunctional


logger = logging.getLogger(__name__)

HALF = QQ(1, 2)
PROJECTION_REFERENCE = "P = 1/2 + (P0 - 1/2) * (1 + 4(P0*P0 - P0))^(-1/2) is a star projection"


class NotClassicallyIdempotent(Exception):
    """Raised when the classical matrix is not a pointwise projection."""

    pass


class MatrixOverStar:
    """Square matrix of polynomials multiplied through a star product."""

    def __init__(self, star: StarProduct, entries: Sequence[Sequence[PolyG]]) -> None:
        self.star = star
        self.entries: List[List[PolyG]] = [list(row) for row in entries]
        self.size = len(self.entries)
        if any(len(row) != self.size for row in self.entries):
            raise ValueError("Matrix over a star product must be square")

    @property
    def algebra(self) -> LieAlgebra:
        return self.entries[0][0].algebra

    @classmethod
    def identity(cls, star: StarProduct, algebra: LieAlgebra, size: int) -> "MatrixOverStar":
        return cls.scalar(star, algebra, size, 1)

    @classmethod
    def scalar(cls, star: StarProduct, algebra: LieAlgebra, size: int, value: Any) -> "MatrixOverStar":
        rows = [
            [PolyG.constant(algebra, value if i == j else 0) for j in range(size)]
            for i in range(size)
        ]
        return cls(star, rows)

    def _map(self, fn: Any) -> "MatrixOverStar":
        return MatrixOverStar(self.star, [[fn(e) for e in row] for row in self.entries])

    def __add__(self, other: "MatrixOverStar") -> "MatrixOverStar":
        return MatrixOverStar(
            self.star,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other: "MatrixOverStar") -> "MatrixOverStar":
        return self + other.scale(-1)

    def scale(self, value: Any) -> "MatrixOverStar":
        factor = to_gaussian(value)
        return self._map(lambda e: e * factor)

    def __matmul__(self, other: "MatrixOverStar") -> "MatrixOverStar":
        """Matrix product with entries multiplied by the star product."""
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                total = PolyG.zero(self.algebra)
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    total = total + self.star(a, b)
                row.append(total)
            rows.append(row)
        return MatrixOverStar(self.star, rows)

    def pointwise_product(self, other: "MatrixOverStar") -> "MatrixOverStar":
        """Matrix product with the undeformed product of entries."""
        n = self.size
        rows = [
            [
                sum(
                    (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                    PolyG.zero(self.algebra),
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        return MatrixOverStar(self.star, rows)

    def truncate(self, order: Optional[int]) -> "MatrixOverStar":
        return self._map(lambda e: e.truncate(order))

    def classical_limit(self) -> "MatrixOverStar":
        return self._map(lambda e: e.lambda_coefficient(0))

    def is_lambda_free(self) -> bool:
        return all(e.is_lambda_free() for row in self.entries for e in row)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixOverStar):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(tuple(tuple(row) for row in self.entries))

    def to_json(self) -> List[List[Any]]:
        return [[e.to_json() for e in row] for row in self.entries]


def inverse_square_root(a: MatrixOverStar, order: int) -> MatrixOverStar:
    """X with X*A*X = 1 through lambda^order, for A = 1 + O(lambda)."""
    one = MatrixOverStar.identity(a.star, a.algebra, a.size)
    x = one
    # each Newton step at least doubles the correct lambda order
    for step in range(order + 2):
        residual = (one - x @ a @ x).truncate(order)
        if residual.is_zero():
            logger.debug(f"Inverse square root converged after {step} steps")
            return x
        x = (x + (residual @ x).scale(HALF)).truncate(order)
    return x


def deform_projection(
    star: StarProduct, p0: MatrixOverStar, order: int
) -> MatrixOverStar:
    """Star projection with classical limit ``p0``, through lambda^order.

    Raises:
        NotClassicallyIdempotent: When p0 depends on lambda or p0 p0 != p0
    """
    truncated = star.with_order(order)
    p0 = MatrixOverStar(truncated, p0.entries)
    if not p0.is_lambda_free():
        raise NotClassicallyIdempotent("Classical matrix must not depend on lambda")
    if p0.pointwise_product(p0) != p0:
        raise NotClassicallyIdempotent("Matrix is not a pointwise projection")

    algebra, n = p0.algebra, p0.size
    one = MatrixOverStar.identity(truncated, algebra, n)
    half = MatrixOverStar.scalar(truncated, algebra, n, HALF)
    a = one + (p0 @ p0 - p0).scale(4)
    x = inverse_square_root(a, order)
    return (half + (p0 - half) @ x).truncate(order)


def idempotence_defect(p: MatrixOverStar, order: int) -> MatrixOverStar:
    """P*P - P through lambda^order."""
    q = MatrixOverStar(p.star.with_order(order), p.entries)
    return (q @ q - q).truncate(order)


def matrix_trace(p: MatrixOverStar, functional: TraceFunctional) -> SymbolicScalar:
    """sum_i tau(P_ii)."""
    total = SymbolicScalar()
    for i in range(p.size):
        total = total + functional(p.entries[i][i])
    return total


def check_projection(
    star: StarProduct, p0: MatrixOverStar, order: int
) -> CheckResult:
    """Deform ``p0`` and confirm P*P = P and P(lam = 0) = p0."""
    p = deform_projection(star, p0, order)
    defect = idempotence_defect(p, order)
    limit = p.classical_limit() - MatrixOverStar(p.star, p0.entries)
    if defect.is_zero() and limit.is_zero():
        return CheckResult(
            name="projection",
            status=CheckStatus.PASSED,
            message=f"Star projection through lambda^{order}",
            reference=PROJECTION_REFERENCE,
            sample_count=1,
            details={"projection": p.to_json()},
        )
    return CheckResult(
        name="projection",
        status=CheckStatus.FAILED,
        message="Deformed matrix is not a star projection",
        reference=PROJECTION_REFERENCE,
        sample_count=1,
        first_defect={"idempotence": defect.to_json(), "limit": limit.to_json()},
    )
