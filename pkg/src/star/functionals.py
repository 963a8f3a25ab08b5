"""Linear functionals on Pol(g*) used as trace candidates."""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence

from src.core.exact import Scalar, SymbolicScalar
from src.poisson.integrals import (
    GaussPoly,
    gaussian_integral,
    point_evaluation,
    sphere_average,
)
from src.poisson.polynomial import PolyG


logger = logging.getLogger(__name__)

FUNCTIONAL_KINDS = ("sphere", "sphere-laplacian", "gaussian", "evaluation")


class FunctionalError(Exception):
    """Raised when a functional specification is invalid."""

    pass


@dataclass
class TraceFunctional:
    """A named linear functional with exact values."""

    name: str
    evaluate: Callable[[PolyG], SymbolicScalar]
    invariant: bool = True
    parameters: dict = field(default_factory=dict)

    def __call__(self, f: PolyG) -> SymbolicScalar:
        return self.evaluate(f)


def make_functional(
    kind: str,
    r2: Optional[Scalar] = None,
    point: Optional[Sequence[Any]] = None,
    laplacian_power: int = 1,
) -> TraceFunctional:
    """Build one of the supported functionals.

    Args:
        kind: ``sphere``, ``sphere-laplacian``, ``gaussian`` or ``evaluation``
        r2: Squared radius for sphere functionals; symbolic when None
        point: Evaluation point, one entry per coordinate
        laplacian_power: Power of the Laplacian applied before averaging

    Raises:
        FunctionalError: When the kind is unknown or a parameter is missing
    """
    if kind == "sphere":
        return TraceFunctional(
            "sphere", lambda f: sphere_average(f, r2), parameters={"r2": r2}
        )
    if kind == "sphere-laplacian":

        def averaged(f: PolyG) -> SymbolicScalar:
            for _ in range(laplacian_power):
                f = f.laplacian()
            return sphere_average(f, r2)

        return TraceFunctional(
            "sphere-laplacian",
            averaged,
            parameters={"r2": r2, "power": laplacian_power},
        )
    if kind == "gaussian":
        return TraceFunctional(
            "gaussian", lambda f: gaussian_integral(GaussPoly(f))
        )
    if kind == "evaluation":
        if point is None:
            raise FunctionalError("Evaluation functional needs a point")
        coords: List[Any] = list(point)
        invariant = all(v == 0 for v in coords)
        return TraceFunctional(
            "evaluation",
            lambda f: point_evaluation(f, coords),
            invariant=invariant,
            parameters={"point": [str(v) for v in coords]},
        )
    raise FunctionalError(
        f"Unknown functional {kind!r}; expected one of {FUNCTIONAL_KINDS}"
    )
