"""GNS representation of the positive orbit trace.

The pre-Hilbert space is the space of orbit functions; the cyclic vector is
the class of 1 and the Gel'fand ideal is the kernel of the deformed
restriction. Operators track a degree budget: an application whose
harmonic degree could exceed the budget is refused instead of being
silently truncated.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Union

from src.core.exact import SymbolicScalar
from src.orbit.reduction import OrbitFn, OrbitReducer
from src.poisson.polynomial import PolyG


logger = logging.getLogger(__name__)

DEFAULT_DEGREE_BUDGET = 6
OPERATOR_KINDS = ("pi", "left", "right", "modular", "lie", "compose")


class GNSError(Exception):
    """Raised when the two realizations of an operator disagree."""

    pass


class DegreeBudgetExceeded(GNSError):
    """Raised when an operator application leaves the validity window."""

    pass


@dataclass
class OrbitOperator:
    """Linear (or antilinear) operator on orbit functions."""

    kind: str
    gns: "GNSRepresentation"
    element: Any = None
    parts: List["OrbitOperator"] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind not in OPERATOR_KINDS:
            raise GNSError(f"Unknown operator kind {self.kind!r}")

    @property
    def antilinear(self) -> bool:
        if self.kind == "compose":
            return sum(p.antilinear for p in self.parts) % 2 == 1
        return self.kind == "modular"

    def _degree(self) -> int:
        if isinstance(self.element, OrbitFn):
            return self.element.representative.xi_degree()
        if isinstance(self.element, PolyG):
            return self.element.xi_degree()
        return 0

    def _guard(self, phi: OrbitFn) -> None:
        total = self._degree() + phi.representative.xi_degree()
        if total > self.gns.budget:
            raise DegreeBudgetExceeded(
                f"{self.kind} operator needs degree {total} > budget "
                f"{self.gns.budget}"
            )

    def apply(self, phi: OrbitFn) -> OrbitFn:
        reducer = self.gns.reducer
        if self.kind == "compose":
            for part in reversed(self.parts):
                phi = part.apply(phi)
            return phi
        if self.kind == "modular":
            return phi.conjugate()
        self._guard(phi)
        if self.kind == "pi":
            return self.gns.apply_pi(self.element, phi)
        if self.kind == "left":
            return reducer.star_orbit(self.element, phi)
        if self.kind == "right":
            return reducer.star_orbit(phi, self.element)
        return reducer.lie_derivative(self.element, phi)

    def __call__(self, phi: OrbitFn) -> OrbitFn:
        return self.apply(phi)

    def __matmul__(self, other: "OrbitOperator") -> "OrbitOperator":
        return OrbitOperator("compose", self.gns, parts=[self, other])


class GNSRepresentation:
    """GNS data of the positive trace on one sphere orbit."""

    def __init__(
        self, reducer: OrbitReducer, budget: int = DEFAULT_DEGREE_BUDGET
    ) -> None:
        self.reducer = reducer
        self.budget = budget

    @property
    def cyclic_vector(self) -> OrbitFn:
        return self.reducer.restrict(PolyG.one(self.reducer.algebra))

    def inner(self, phi: OrbitFn, chi: OrbitFn) -> SymbolicScalar:
        """<phi, chi> = orbit average of conj(phi) *_O chi."""
        return self.reducer.orbit_trace(
            self.reducer.star_orbit(phi.conjugate(), chi)
        )

    def vector(self, f: PolyG) -> OrbitFn:
        """psi_f: the class of f in the quotient by the Gel'fand ideal."""
        return self.reducer.deformed_restrict(f)

    def apply_pi(self, f: PolyG, phi: OrbitFn) -> OrbitFn:
        """Both realizations of pi_O(f) phi, compared.

        Raises:
            GNSError: When deformed_restrict(f * prol phi) differs from
                deformed_restrict(f) *_O phi
        """
        reducer = self.reducer
        direct = reducer.deformed_restrict(reducer.star(f, reducer.prolong(phi)))
        via_left = reducer.star_orbit(reducer.deformed_restrict(f), phi)
        if direct != via_left:
            raise GNSError("pi_O realizations disagree within the budget")
        return direct

    def pi(self, f: PolyG) -> OrbitOperator:
        return OrbitOperator("pi", self, element=f)

    def left(self, a: OrbitFn) -> OrbitOperator:
        return OrbitOperator("left", self, element=a)

    def right(self, a: OrbitFn) -> OrbitOperator:
        return OrbitOperator("right", self, element=a)

    def modular(self) -> OrbitOperator:
        return OrbitOperator("modular", self)

    def lie(self, x: Union[int, List[Any]]) -> OrbitOperator:
        return OrbitOperator("lie", self, element=x)

    def modular_conjugation(self, phi: OrbitFn) -> OrbitFn:
        """Coefficient-wise conjugation; antiunitary and involutive."""
        return phi.conjugate()

    def gelfand_ideal_check(self, f: PolyG) -> bool:
        """True iff <psi_f, psi_f> = 0, which must coincide with psi_f = 0.

        Raises:
            GNSError: When the norm and the kernel test disagree
        """
        order = self.reducer.order
        v = self.vector(f)
        null = self.inner(v, v).truncate(order).is_zero()
        # lambda^k in v shows up at lambda^2k in the norm
        if null != v.truncate(order // 2).is_zero():
            raise GNSError("Null vector outside the kernel of the restriction")
        return null


def gns_inner(
    reducer: OrbitReducer, phi: OrbitFn, chi: OrbitFn
) -> SymbolicScalar:
    return GNSRepresentation(reducer).inner(phi, chi)


def pi_O(
    reducer: OrbitReducer, f: PolyG, budget: Optional[int] = None
) -> OrbitOperator:
    return GNSRepresentation(reducer, budget or DEFAULT_DEGREE_BUDGET).pi(f)
