"""Invariant star products on groups and the deformations they induce.

A right-invariant product on functions of G induces on any G-space X

    (f1 *_X f2)(x) = (alpha^x f1 *_G alpha^x f2)(e),   alpha^x f (g) = f(g.x),

and ``alpha^x`` becomes an algebra homomorphism. Traces on G induce traces
on X through ``tr_Phi(f) = Phi(x -> tr_G(alpha^x f))``; products of
weighted functions are traced through the homomorphism, never by point
evaluation.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import factorial
from typing import Callable, Dict, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from src.core.exact import Rational, gaussian, to_gaussian, to_rational
from src.universal.expoly import ClassViolation, ExpPoly, integrate
from src.universal.groups import ActionModel, GroupElement, GroupModel


logger = logging.getLogger(__name__)

HALF_OVER_I = gaussian(0, QQ(-1, 2))
INVARIANCE_KINDS = ("bi", "right", "left", "none")


class _Partials:
    """Memoized partial derivatives of one value."""

    def __init__(self, f: ExpPoly) -> None:
        self._cache: Dict[Tuple[Tuple[str, int], ...], ExpPoly] = {(): f}

    def get(self, counts: Dict[str, int]) -> ExpPoly:
        key = tuple(sorted((v, k) for v, k in counts.items() if k))
        if key not in self._cache:
            # peel one derivative off the last variable
            name, k = key[-1]
            smaller = dict(key)
            smaller[name] = k - 1
            self._cache[key] = self.get(smaller).diff(name)
        return self._cache[key]


def moyal_exp(
    f: ExpPoly, g: ExpPoly, pairs: Sequence[Tuple[str, str]], order: int
) -> ExpPoly:
    """Weyl-Moyal product in the Darboux pairs (q, p), through lambda^order.

    f * g = sum_(a, b) (lam/2i)^(|a|+|b|) (-1)^|b| / (a! b!)
            dq^a dp^b f . dp^a dq^b g
    """
    n = len(pairs)
    left, right = _Partials(f), _Partials(g)
    lam = f.space.lam()
    out = f * g
    for combo in itertools.product(range(order + 1), repeat=2 * n):
        r = sum(combo)
        if r == 0 or r > order:
            continue
        a, b = combo[:n], combo[n:]
        lcounts: Dict[str, int] = {}
        rcounts: Dict[str, int] = {}
        for (q, p), ak, bk in zip(pairs, a, b):
            lcounts[q], lcounts[p] = ak, bk
            rcounts[p], rcounts[q] = ak, bk
        lterm = left.get(lcounts)
        if lterm.is_zero():
            continue
        rterm = right.get(rcounts)
        if rterm.is_zero():
            continue
        weight = 1
        for v in combo:
            weight *= factorial(v)
        scale = HALF_OVER_I**r * to_gaussian(QQ((-1) ** sum(b), weight))
        out = out + lterm * rterm * lam**r * scale
    return out.truncate(order)


def poisson_exp(
    f: ExpPoly, g: ExpPoly, pairs: Sequence[Tuple[str, str]]
) -> ExpPoly:
    """{f, g} = sum_k dq_k f dp_k g - dp_k f dq_k g."""
    out = f.space.zero()
    for q, p in pairs:
        out = out + f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return out


class GroupStarProduct(ABC):
    """Formal star product on ExpPoly functions of a group model."""

    def __init__(self, group: GroupModel, order: int) -> None:
        self.group = group
        self.order = order

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def invariance(self) -> str:
        """Declared invariance: one of ``INVARIANCE_KINDS``."""
        pass

    @abstractmethod
    def _multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        pass

    def multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        if f.space != self.group.space or g.space != self.group.space:
            raise ClassViolation(f"{self.name}: operands outside {self.group.name}")
        return self._multiply(f, g).truncate(self.order)

    def __call__(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return self.multiply(f, g)

    def commutator(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return self.multiply(f, g) - self.multiply(g, f)

    def with_order(self, order: int) -> "GroupStarProduct":
        clone = type(self).__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.order = order
        return clone


class PointwiseGroupProduct(GroupStarProduct):
    @property
    def name(self) -> str:
        return "pointwise"

    @property
    def invariance(self) -> str:
        return "bi"

    def _multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return f * g


class MoyalGroupProduct(GroupStarProduct):
    """Moyal product in the group's Darboux coordinates."""

    def __init__(self, group: GroupModel, order: int, invariance: str = "bi") -> None:
        super().__init__(group, order)
        if not group.darboux:
            raise ClassViolation(f"{group.name} declares no Darboux coordinates")
        if invariance not in INVARIANCE_KINDS:
            raise ValueError(f"Unknown invariance {invariance!r}")
        self._invariance = invariance

    @property
    def name(self) -> str:
        return "moyal"

    @property
    def invariance(self) -> str:
        return self._invariance

    def _multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return moyal_exp(f, g, self.group.darboux, self.order)


class InversionConjugate(GroupStarProduct):
    """f *' g = iota*(iota* f * iota* g); swaps left and right invariance."""

    _SWAP = {"left": "right", "right": "left", "bi": "bi", "none": "none"}

    def __init__(self, base: GroupStarProduct) -> None:
        super().__init__(base.group, base.order)
        self.base = base

    @property
    def name(self) -> str:
        return f"inverted({self.base.name})"

    @property
    def invariance(self) -> str:
        return self._SWAP[self.base.invariance]

    def _multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        invert = self.group.invert
        return invert(self.base.with_order(self.order)(invert(f), invert(g)))


def inversion_conjugate(star: GroupStarProduct) -> GroupStarProduct:
    return InversionConjugate(star)


# -- induced products -------------------------------------------------------


def alpha_x(
    action: ActionModel, f: ExpPoly, x: Optional[GroupElement] = None
) -> ExpPoly:
    """(alpha^x f)(g) = f(g.x) as a function on G."""
    return action.alpha(f, x)


def _lift(
    star: GroupStarProduct, action: ActionModel, f: ExpPoly, invariance: str
) -> ExpPoly:
    lifted = action.alpha(f)
    if invariance == "left":
        lifted = star.group.invert(lifted)
    return lifted


def star_X(
    star: GroupStarProduct,
    action: ActionModel,
    f1: ExpPoly,
    f2: ExpPoly,
    invariance: str = "right",
) -> ExpPoly:
    """(f1 *_X f2)(x) at the symbolic point x.

    ``invariance="left"`` uses (iota* alpha^x f1 * iota* alpha^x f2)(e) for
    left-invariant products.

    Raises:
        ClassViolation: When a factor carries a weight
    """
    if invariance not in ("right", "left"):
        raise ValueError(f"invariance must be 'right' or 'left', got {invariance!r}")
    product = star(
        _lift(star, action, f1, invariance), _lift(star, action, f2, invariance)
    )
    return star.group.at_identity(product)


def homomorphism_defect(
    star: GroupStarProduct, action: ActionModel, f1: ExpPoly, f2: ExpPoly
) -> ExpPoly:
    """alpha^x(f1 *_X f2) - alpha^x f1 *_G alpha^x f2."""
    induced = star_X(star, action, f1, f2)
    return action.alpha(induced) - star(action.alpha(f1), action.alpha(f2))


def tangential_defect(
    star: GroupStarProduct, action: ActionModel, f1: ExpPoly, f2: ExpPoly
) -> ExpPoly:
    """(f1 *_X f2) - f1 f2 for f1 constant on orbits.

    Raises:
        ClassViolation: When f1 moves along the orbits
    """
    if not action.is_orbit_constant(f1):
        raise ClassViolation("Tangential identity needs an orbit-constant factor")
    return star_X(star, action, f1, f2) - f1 * f2


# -- traces -----------------------------------------------------------------


def group_integral(group: GroupModel) -> Callable[[ExpPoly], ExpPoly]:
    """tr_G: integral over all group coordinates of a weighted value."""

    def trace(f: ExpPoly) -> ExpPoly:
        return integrate(f, group.coordinates)

    return trace


@dataclass(frozen=True)
class PointFunctional:
    """Phi = sum_i w_i ev_(x_i); a ``None`` point is the symbolic x."""

    name: str
    points: Tuple[Tuple[Rational, Optional[Tuple[Tuple[str, Rational], ...]]], ...]

    def __call__(self, value: ExpPoly) -> ExpPoly:
        out = value.space.zero()
        for weight, point in self.points:
            if point is None:
                evaluated = value
            else:
                evaluated = value.at(
                    {name: value.space.constant(v) for name, v in point}
                )
            out = out + evaluated * weight
        return out

    @property
    def nonnegative(self) -> bool:
        return all(w >= 0 for w, _ in self.points)


def evaluation(point: Optional[Dict[str, Rational]] = None) -> PointFunctional:
    if point is None:
        return PointFunctional("ev(x)", ((QQ(1), None),))
    items = tuple(sorted((k, to_rational(v)) for k, v in point.items()))
    return PointFunctional(f"ev{dict(items)}", ((QQ(1), items),))


def combination(
    terms: Sequence[Tuple[Rational, Optional[Dict[str, Rational]]]]
) -> PointFunctional:
    """Weighted sum of evaluations."""
    points = []
    for w, point in terms:
        items = (
            None
            if point is None
            else tuple(sorted((k, to_rational(v)) for k, v in point.items()))
        )
        points.append((to_rational(w), items))
    return PointFunctional("combination", tuple(points))


def induced_trace(
    trace: Callable[[ExpPoly], ExpPoly],
    functional: PointFunctional,
    action: ActionModel,
    f: ExpPoly,
) -> ExpPoly:
    """tr_Phi(f) = Phi(x -> tr_G(alpha^x f))."""
    return functional(trace(action.alpha(f)))


def induced_trace_product(
    trace: Callable[[ExpPoly], ExpPoly],
    functional: PointFunctional,
    star: GroupStarProduct,
    action: ActionModel,
    f1: ExpPoly,
    f2: ExpPoly,
) -> ExpPoly:
    """tr_Phi(f1 *_X f2), through alpha^x(f1 *_X f2) = alpha^x f1 * alpha^x f2."""
    return functional(trace(star(action.alpha(f1), action.alpha(f2))))


def induced_trace_commutator(
    trace: Callable[[ExpPoly], ExpPoly],
    functional: PointFunctional,
    star: GroupStarProduct,
    action: ActionModel,
    f1: ExpPoly,
    f2: ExpPoly,
) -> ExpPoly:
    lifted1, lifted2 = action.alpha(f1), action.alpha(f2)
    return functional(trace(star.commutator(lifted1, lifted2)))
