"""Finite-dimensional Lie algebras given by exact structure constants.

Indices are zero-based internally; ``[e_i, e_j] = sum_k c[i, j, k] e_k``.
Validation checks antisymmetry and the Jacobi identity exhaustively and
collects every violated instance before failing.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import QQ

from src.core.exact import Rational, format_rational, to_rational


logger = logging.getLogger(__name__)

DENSE_LIMIT = 8
MAX_DIMENSION = 16

Triple = Tuple[int, int, int]


class LieAlgebraError(Exception):
    """Raised when a Lie algebra cannot be built or used."""

    pass


@dataclass(frozen=True)
class Violation:
    """One violated antisymmetry or Jacobi instance (one-based indices)."""

    kind: str
    indices: Tuple[int, ...]
    value: Rational

    def describe(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind}({idx}) = {format_rational(self.value)}"


class AlgebraValidationError(LieAlgebraError):
    """Raised when structure constants violate the Lie algebra axioms."""

    def __init__(self, violations: Sequence[Violation]) -> None:
        self.violations = list(violations)
        shown = "; ".join(v.describe() for v in self.violations[:5])
        more = len(self.violations) - 5
        suffix = f" (+{more} more)" if more > 0 else ""
        super().__init__(
            f"{len(self.violations)} violation(s): {shown}{suffix}"
        )


class AntisymmetryViolation(AlgebraValidationError):
    """Raised when c[i,j,k] + c[j,i,k] != 0 for some instance."""

    pass


class JacobiViolation(AlgebraValidationError):
    """Raised when the Jacobi identity fails for some instance."""

    pass


@dataclass(frozen=True)
class UnimodularityResult:
    """Outcome of the unimodularity test with an optional witness.

    ``value`` is sum_i c^i_{ij} at the witness j, which is -tr ad(e_j).
    """

    unimodular: bool
    witness: Optional[int] = None
    value: Optional[Rational] = None

    @property
    def trace(self) -> Optional[Rational]:
        """tr ad(e_j) at the witness."""
        return None if self.value is None else -self.value


class LieAlgebra:
    """Validated Lie algebra; immutable and hashable on its constants.

    Use :func:`validate` to construct instances from raw tables.
    """

    def __init__(
        self,
        name: str,
        dim: int,
        basis: Sequence[str],
        constants: Mapping[Triple, Rational],
    ) -> None:
        self.name = name
        self.dim = dim
        self.basis = tuple(basis)
        self._constants: Dict[Triple, Rational] = {
            key: to_rational(v) for key, v in constants.items() if v != 0
        }
        self._canonical = tuple(sorted(self._constants.items()))
        self._dense: Optional[List[List[Tuple[Tuple[int, Rational], ...]]]]
        self._sparse: Dict[Tuple[int, int], Tuple[Tuple[int, Rational], ...]]
        grouped: Dict[Tuple[int, int], List[Tuple[int, Rational]]] = {}
        for (i, j, k), v in self._canonical:
            grouped.setdefault((i, j), []).append((k, v))
        self._sparse = {key: tuple(v) for key, v in grouped.items()}
        if dim <= DENSE_LIMIT:
            self._dense = [
                [self._sparse.get((i, j), ()) for j in range(dim)]
                for i in range(dim)
            ]
        else:
            self._dense = None

    @property
    def constants(self) -> Dict[Triple, Rational]:
        return dict(self._constants)

    def constant(self, i: int, j: int, k: int) -> Rational:
        return self._constants.get((i, j, k), QQ(0))

    def bracket_terms(self, i: int, j: int) -> Tuple[Tuple[int, Rational], ...]:
        """Nonzero ``(k, c^k_ij)`` pairs of ``[e_i, e_j]``."""
        if self._dense is not None:
            return self._dense[i][j]
        return self._sparse.get((i, j), ())

    def nonzero_constants(self) -> Tuple[Tuple[Triple, Rational], ...]:
        return self._canonical

    def is_abelian(self) -> bool:
        return not self._canonical

    def bracket(self, x: Sequence[Any], y: Sequence[Any]) -> List[Rational]:
        """Bracket of two coefficient vectors."""
        out = [QQ(0)] * self.dim
        xs = [to_rational(v) for v in x]
        ys = [to_rational(v) for v in y]
        for (i, j, k), c in self._canonical:
            if xs[i] and ys[j]:
                out[k] += xs[i] * ys[j] * c
        return out

    def key(self) -> str:
        """SHA-256 of the dimension and canonical constants; names ignored."""
        payload = {
            "dim": self.dim,
            "constants": [
                [i, j, k, format_rational(v)]
                for (i, j, k), v in self._canonical
            ],
        }
        encoded = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(encoded).hexdigest()

    def to_json(self) -> Dict[str, Any]:
        """Algebra-file representation with one-based i<j brackets."""
        return {
            "name": self.name,
            "dim": self.dim,
            "basis": list(self.basis),
            "brackets": [
                {"i": i + 1, "j": j + 1, "k": k + 1, "value": format_rational(v)}
                for (i, j, k), v in self._canonical
                if i < j
            ],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash((self.dim, self._canonical))

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name!r}, dim={self.dim})"


def validation_report(
    constants: Mapping[Triple, Any], dim: int
) -> List[Violation]:
    """List every antisymmetry and Jacobi violation of a raw table.

    Args:
        constants: Zero-based ``(i, j, k)`` to value mapping
        dim: Dimension of the algebra

    Returns:
        Violations with one-based indices; empty when the table is valid
    """
    table = {key: to_rational(v) for key, v in constants.items() if v != 0}
    violations: List[Violation] = []

    for (i, j, k) in table:
        if not all(0 <= idx < dim for idx in (i, j, k)):
            raise LieAlgebraError(
                f"Index ({i + 1},{j + 1},{k + 1}) outside 1..{dim}"
            )

    def c(i: int, j: int, k: int) -> Rational:
        return table.get((i, j, k), QQ(0))

    for i in range(dim):
        for j in range(i, dim):
            for k in range(dim):
                total = c(i, j, k) + c(j, i, k)
                if total != 0:
                    violations.append(
                        Violation(
                            "AntisymmetryViolation", (i + 1, j + 1, k + 1), total
                        )
                    )
    if violations:
        return violations

    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                for m in range(dim):
                    total = QQ(0)
                    for p in range(dim):
                        total += (
                            c(i, j, p) * c(p, k, m)
                            + c(j, k, p) * c(p, i, m)
                            + c(k, i, p) * c(p, j, m)
                        )
                    if total != 0:
                        violations.append(
                            Violation(
                                "JacobiViolation",
                                (i + 1, j + 1, k + 1, m + 1),
                                total,
                            )
                        )
    return violations


def validate(
    constants: Mapping[Triple, Any],
    dim: int,
    name: str = "custom",
    basis: Optional[Sequence[str]] = None,
) -> LieAlgebra:
    """Validate a raw structure-constant table.

    Args:
        constants: Zero-based ``(i, j, k)`` to rational mapping
        dim: Dimension of the algebra
        name: Display name
        basis: Basis labels, ``e1..en`` by default

    Returns:
        Validated LieAlgebra

    Raises:
        LieAlgebraError: When the dimension is out of range
        AntisymmetryViolation: When antisymmetry fails
        JacobiViolation: When the Jacobi identity fails
    """
    if dim < 1 or dim > MAX_DIMENSION:
        raise LieAlgebraError(
            f"Dimension {dim} outside supported range 1..{MAX_DIMENSION}"
        )
    labels = list(basis) if basis else [f"e{i + 1}" for i in range(dim)]
    if len(labels) != dim:
        raise LieAlgebraError(
            f"Basis has {len(labels)} labels but dimension is {dim}"
        )

    violations = validation_report(constants, dim)
    if violations:
        logger.error(f"Algebra {name} failed validation: {violations[0].describe()}")
        if violations[0].kind == "AntisymmetryViolation":
            raise AntisymmetryViolation(violations)
        raise JacobiViolation(violations)

    logger.debug(f"Validated Lie algebra {name} of dimension {dim}")
    return LieAlgebra(name, dim, labels, constants)


def from_brackets(
    brackets: Mapping[Tuple[int, int], Mapping[int, Any]],
    dim: int,
    name: str = "custom",
    basis: Optional[Sequence[str]] = None,
) -> LieAlgebra:
    """Build from ``[e_i, e_j]`` with i < j, implying antisymmetry."""
    table: Dict[Triple, Rational] = {}
    for (i, j), image in brackets.items():
        for k, v in image.items():
            value = to_rational(v)
            table[(i, j, k)] = value
            table[(j, i, k)] = -value
    return validate(table, dim, name, basis)


def unimodular(algebra: LieAlgebra) -> UnimodularityResult:
    """Check that sum_i c^i_{ij} vanishes for every j.

    Returns:
        Result with the first failing one-based index j and its value
    """
    for j in range(algebra.dim):
        total = QQ(0)
        for i in range(algebra.dim):
            total += algebra.constant(i, j, i)
        if total != 0:
            return UnimodularityResult(False, witness=j + 1, value=total)
    return UnimodularityResult(True)


def adjoint_matrix(algebra: LieAlgebra, x: Sequence[Any]) -> Matrix:
    """Matrix of ad(x), column j holding the coordinates of [x, e_j].

    Raises:
        LieAlgebraError: When the vector length does not match
    """
    if len(x) != algebra.dim:
        raise LieAlgebraError(
            f"Vector of length {len(x)} for algebra of dimension {algebra.dim}"
        )
    n = algebra.dim
    entries = [[QQ(0)] * n for _ in range(n)]
    coords = [to_rational(v) for v in x]
    for (i, j, k), c in algebra.nonzero_constants():
        if coords[i]:
            entries[k][j] += coords[i] * c
    return Matrix(n, n, lambda r, s: QQ.to_sympy(entries[r][s]))
