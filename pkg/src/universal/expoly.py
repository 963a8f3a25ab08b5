"""Exponential polynomials on groups and on the spaces they act on.

An ``ExpPoly`` is a finite sum ``sum_m e^(m.v) p_m(v)`` with Gaussian-rational
coefficients, held in one sympy ring per action model. Every exponentiated
coordinate ``v`` has the companion generators ``exp_v`` and ``expinv_v``;
their product is normalized to one. A value may carry the Gaussian weight

    exp(-kappa * sum_v (v - c_v)^2 / 2)

which stays implicit: derivatives act on it, products add the kappas of
equal-centered weights, and integration needs kappa = 1.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import PolyElement, PolyRing, ring

from src.core.exact import (
    Rational,
    Scalar,
    SymbolicScalar,
    conjugate_coefficients,
    format_gaussian,
    format_rational,
    rename_terms,
    to_gaussian,
    to_rational,
)
from src.poisson.integrals import double_factorial


logger = logging.getLogger(__name__)

UNIT_NAMES = ("lam", "sqrt2pi", "sqrte")


class ClassViolation(Exception):
    """Raised when an operation leaves the declared function class."""

    pass


def exp_name(variable: str) -> str:
    return f"exp_{variable}"


def expinv_name(variable: str) -> str:
    return f"expinv_{variable}"


@lru_cache(maxsize=None)
def _space_ring(names: Tuple[str, ...]) -> PolyRing:
    return ring(",".join(names), QQ_I)[0]


class ExpSpace:
    """Generators of one action model: coordinates, companions and units.

    Args:
        variables: Coordinate and parameter names
        exponentiated: Names among ``variables`` that appear as e^(m v)
    """

    def __init__(
        self, variables: Sequence[str], exponentiated: Iterable[str] = ()
    ) -> None:
        self.variables = tuple(variables)
        self.exponentiated = frozenset(exponentiated)
        stray = self.exponentiated - set(self.variables)
        if stray:
            raise ClassViolation(f"Exponentiated names not declared: {sorted(stray)}")
        names: List[str] = []
        for v in self.variables:
            names.append(v)
            if v in self.exponentiated:
                names += [exp_name(v), expinv_name(v)]
        self.names = tuple(names) + UNIT_NAMES
        if len(set(self.names)) != len(self.names):
            raise ClassViolation(f"Duplicate generator names in {self.names}")
        self.ring = _space_ring(self.names)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._pairs = [
            (self._index[exp_name(v)], self._index[expinv_name(v)])
            for v in self.variables
            if v in self.exponentiated
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpSpace):
            return NotImplemented
        return self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"ExpSpace({', '.join(self.variables)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ClassViolation(f"Unknown generator {name!r} in {self!r}")

    def gen(self, name: str) -> PolyElement:
        return self.ring.gens[self.index(name)]

    def normalize(self, poly: PolyElement) -> PolyElement:
        """Cancel exp_v * expinv_v pairs."""
        if not self._pairs:
            return poly
        terms: Dict[Tuple[int, ...], Any] = {}
        for monom, coeff in poly.items():
            exps = list(monom)
            for i, j in self._pairs:
                common = min(exps[i], exps[j])
                exps[i] -= common
                exps[j] -= common
            key = tuple(exps)
            terms[key] = terms.get(key, QQ_I.zero) + coeff
        return self.ring.from_dict(terms)

    # -- constructors -----------------------------------------------------

    def zero(self) -> "ExpPoly":
        return ExpPoly(self, self.ring.zero)

    def one(self) -> "ExpPoly":
        return self.constant(1)

    def constant(self, value: Scalar) -> "ExpPoly":
        return ExpPoly(self, self.ring.ground_new(to_gaussian(value)))

    def variable(self, name: str) -> "ExpPoly":
        return ExpPoly(self, self.gen(name))

    def lam(self) -> "ExpPoly":
        return self.variable("lam")

    def exp(self, name: str, power: int = 1) -> "ExpPoly":
        """e^(power * name) for an exponentiated coordinate."""
        if name not in self.exponentiated:
            raise ClassViolation(f"{name} is not exponentiated in {self!r}")
        companion = exp_name(name) if power >= 0 else expinv_name(name)
        return ExpPoly(self, self.gen(companion) ** abs(power))


@dataclass(frozen=True)
class Damping:
    """Weight exp(-kappa * sum_v (v - c_v)^2 / 2) with polynomial centers."""

    kappa: Rational
    centers: Tuple[Tuple[str, PolyElement], ...]

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.centers)

    def center(self, name: str) -> Optional[PolyElement]:
        for v, c in self.centers:
            if v == name:
                return c
        return None

    def log_derivative(self, space: ExpSpace, name: str) -> PolyElement:
        """d/d(name) of the exponent of the weight."""
        out = space.ring.zero
        gen = space.gen(name)
        for v, c in self.centers:
            inner = space.ring.one if v == name else space.ring.zero
            inner = inner - c.diff(gen)
            if inner:
                out += (space.gen(v) - c) * inner
        return out * to_gaussian(-self.kappa)

    def combine(self, other: Optional["Damping"]) -> "Damping":
        """Weight of a product.

        Raises:
            ClassViolation: When the two weights have different centers
        """
        if other is None:
            return self
        if dict(self.centers) != dict(other.centers):
            raise ClassViolation("Product of weights with different centers")
        return Damping(self.kappa + other.kappa, self.centers)

    def to_json(self) -> Dict[str, Any]:
        return {
            "kappa": format_rational(self.kappa),
            "centers": {v: str(c.as_expr()) for v, c in self.centers},
        }


def _combine(a: Optional[Damping], b: Optional[Damping]) -> Optional[Damping]:
    if a is None:
        return b
    return a.combine(b)


class ExpPoly:
    """Exponential polynomial, optionally carrying a Gaussian weight."""

    __slots__ = ("space", "poly", "damping")

    def __init__(
        self,
        space: ExpSpace,
        poly: PolyElement,
        damping: Optional[Damping] = None,
    ) -> None:
        self.space = space
        if poly.ring != space.ring:
            poly = rename_terms(poly, space.ring)
        self.poly = space.normalize(poly)
        self.damping = damping

    def _like(self, poly: PolyElement) -> "ExpPoly":
        return ExpPoly(self.space, poly, self.damping)

    # -- weights ----------------------------------------------------------

    def damped(
        self,
        variables: Sequence[str],
        kappa: Scalar = 1,
        centers: Optional[Mapping[str, "ExpPoly"]] = None,
    ) -> "ExpPoly":
        """Attach exp(-kappa * sum (v - c_v)^2 / 2); centers default to 0."""
        if self.damping is not None:
            raise ClassViolation("Value already carries a weight")
        centers = centers or {}
        entries = []
        for v in variables:
            self.space.index(v)
            center = centers.get(v)
            entries.append((v, center.poly if center is not None else self.space.ring.zero))
        return ExpPoly(self.space, self.poly, Damping(to_rational(kappa), tuple(entries)))

    def undamped(self) -> "ExpPoly":
        """The polynomial factor alone."""
        return ExpPoly(self.space, self.poly)

    @property
    def is_damped(self) -> bool:
        return self.damping is not None

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.poly

    def terms(self) -> List[Tuple[Dict[str, int], Any]]:
        """Sorted ``({generator: exponent}, coeff)`` pairs."""
        names = self.space.names
        return [
            ({names[i]: e for i, e in enumerate(monom) if e}, coeff)
            for monom, coeff in sorted(self.poly.items())
        ]

    def depends_on(self, name: str) -> bool:
        positions = [self.space.index(name)]
        if name in self.space.exponentiated:
            positions += [
                self.space.index(exp_name(name)),
                self.space.index(expinv_name(name)),
            ]
        return any(m[p] for m in self.poly.keys() for p in positions)

    def degree_in(self, name: str) -> int:
        pos = self.space.index(name)
        return max((m[pos] for m in self.poly.keys()), default=-1)

    def truncate(self, order: Optional[int]) -> "ExpPoly":
        if order is None:
            return self
        pos = self.space.index("lam")
        return self._like(
            self.space.ring.from_dict(
                {m: c for m, c in self.poly.items() if m[pos] <= order}
            )
        )

    def lambda_coefficient(self, k: int) -> "ExpPoly":
        pos = self.space.index("lam")
        terms = {}
        for m, c in self.poly.items():
            if m[pos] == k:
                key = list(m)
                key[pos] = 0
                terms[tuple(key)] = c
        return self._like(self.space.ring.from_dict(terms))

    def lambda_exponents(self) -> List[int]:
        pos = self.space.index("lam")
        return sorted({m[pos] for m in self.poly.keys()})

    def is_real(self) -> bool:
        return all(c.y == 0 for c in self.poly.values())

    def conjugate(self) -> "ExpPoly":
        ring_ = self.space.ring
        damping = self.damping
        if damping is not None:
            damping = Damping(
                damping.kappa,
                tuple(
                    (v, conjugate_coefficients(ring_, p)) for v, p in damping.centers
                ),
            )
        return ExpPoly(
            self.space,
            conjugate_coefficients(ring_, self.poly),
            damping,
        )

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other: Any) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            if other.space != self.space:
                raise ClassViolation("Values live in different spaces")
            return other
        return self.space.constant(other)

    def _sum_damping(self, other: "ExpPoly") -> Optional[Damping]:
        if self.is_zero():
            return other.damping
        if other.is_zero():
            return self.damping
        if self.damping != other.damping:
            raise ClassViolation("Sum of values with different weights")
        return self.damping

    def __add__(self, other: Any) -> "ExpPoly":
        other = self._coerce(other)
        return ExpPoly(self.space, self.poly + other.poly, self._sum_damping(other))

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return self._like(-self.poly)

    def __sub__(self, other: Any) -> "ExpPoly":
        other = self._coerce(other)
        return ExpPoly(self.space, self.poly - other.poly, self._sum_damping(other))

    def __rsub__(self, other: Any) -> "ExpPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "ExpPoly":
        other = self._coerce(other)
        return ExpPoly(
            self.space,
            self.poly * other.poly,
            _combine(self.damping, other.damping),
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExpPoly":
        out = self.space.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.poly == other.poly and self.damping == other.damping

    def __hash__(self) -> int:
        return hash((self.space, tuple(sorted(self.poly.items())), self.damping))

    def __repr__(self) -> str:
        weight = f", {self.damping.to_json()}" if self.damping else ""
        return f"ExpPoly({self.poly.as_expr()}{weight})"

    # -- calculus ---------------------------------------------------------

    def diff(self, name: str) -> "ExpPoly":
        """Partial derivative; acts on companions and on the weight."""
        space = self.space
        poly = self.poly
        out = poly.diff(space.gen(name))
        if name in space.exponentiated:
            e, ei = space.gen(exp_name(name)), space.gen(expinv_name(name))
            out += e * poly.diff(e) - ei * poly.diff(ei)
        if self.damping is not None and name in space.variables:
            out += poly * self.damping.log_derivative(space, name)
        return self._like(out)

    def diff_multi(self, names: Sequence[str]) -> "ExpPoly":
        out = self
        for name in names:
            out = out.diff(name)
        return out

    def substitute(
        self,
        images: Mapping[str, "ExpPoly"],
        weight_targets: Optional[Sequence[str]] = None,
    ) -> "ExpPoly":
        """Simultaneous substitution of generators by unweighted values.

        A weight survives only when each weighted variable is sent to
        ``+-t + r`` for a single ``t`` in ``weight_targets`` (default: the
        weighted variables themselves) and ``r`` free of ``t``.

        Raises:
            ClassViolation: When an image is weighted or the weight leaves
                the class
        """
        space = self.space
        pairs = []
        for name, image in images.items():
            if image.damping is not None:
                raise ClassViolation(f"Weighted image for {name}")
            pairs.append((space.gen(name), image.poly))
        poly = self.poly.compose(pairs) if pairs else self.poly
        damping = self.damping
        if damping is not None:
            targets = weight_targets or damping.variables
            damping = self._moved_damping(damping, pairs, targets)
        return ExpPoly(space, poly, damping)

    def _moved_damping(
        self,
        damping: Damping,
        pairs: List[Tuple[PolyElement, PolyElement]],
        targets: Sequence[str],
    ) -> Damping:
        space = self.space
        entries = []
        for v, c in damping.centers:
            shifted = space.gen(v) - c
            if pairs:
                shifted = space.normalize(shifted.compose(pairs))
            moved = ExpPoly(space, shifted)
            found = [t for t in targets if moved.depends_on(t)]
            if len(found) != 1:
                raise ClassViolation(f"Weight on {v} is not a translate")
            target = found[0]
            slope = moved.diff(target)
            if target in space.exponentiated or slope not in (
                space.one(),
                -space.one(),
            ):
                raise ClassViolation(f"Weight on {v} is not a translate")
            sign = 1 if slope == space.one() else -1
            rest = shifted - space.gen(target) * sign
            # (sign*t + rest)^2 = (t + sign*rest)^2
            entries.append((target, -rest * sign))
        if len({t for t, _ in entries}) != len(entries):
            raise ClassViolation("Two weighted variables merge")
        return Damping(damping.kappa, tuple(entries))

    def at(self, images: Mapping[str, "ExpPoly"]) -> "ExpPoly":
        """Point evaluation; never applied to a weighted value.

        Raises:
            ClassViolation: When the value carries a weight
        """
        if self.damping is not None:
            raise ClassViolation("Weighted value evaluated at a point")
        return self.substitute(images)

    def scalar(self) -> SymbolicScalar:
        """The value as a scalar in lam, sqrt2pi and sqrte.

        Raises:
            ClassViolation: When a coordinate or a weight remains
        """
        if self.damping is not None:
            raise ClassViolation("Weighted value is not a scalar")
        for name in self.space.variables:
            if self.depends_on(name):
                raise ClassViolation(f"Value still depends on {name}")
        return SymbolicScalar.from_poly(self.poly)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "terms": [
                {"monomial": monomial, "coefficient": format_gaussian(c)}
                for monomial, c in self.terms()
            ]
        }
        if self.damping is not None:
            out["weight"] = self.damping.to_json()
        return out


def gaussian_moment(m: int, k: int) -> Rational:
    """int e^(m t) t^k e^(-t^2/2) dt divided by sqrt(2 pi) e^(m^2/2)."""
    total = 0
    for j in range(0, k + 1, 2):
        total += comb(k, j) * m ** (k - j) * double_factorial(j - 1)
    return QQ(total)


def integrate(f: ExpPoly, variables: Sequence[str]) -> ExpPoly:
    """Integral of a weighted value over the listed variables.

    Every listed variable must carry the weight with kappa = 1. Centers are
    shifted away first; exponentiated variables need center zero. The
    result keeps the weight of the variables not integrated.

    Raises:
        ClassViolation: When the integrand is outside the weighted class
    """
    damping = f.damping
    if damping is None:
        raise ClassViolation("Integrand carries no Gaussian weight")
    if damping.kappa != 1:
        raise ClassViolation(
            f"Integration needs kappa = 1, got {format_rational(damping.kappa)}"
        )
    space = f.space
    shifts = []
    for v in variables:
        center = damping.center(v)
        if center is None:
            raise ClassViolation(f"No weight on integration variable {v}")
        if any(ExpPoly(space, center).depends_on(u) for u in variables):
            raise ClassViolation(f"Center of {v} depends on an integration variable")
        if center:
            if v in space.exponentiated:
                raise ClassViolation(f"Shifted weight on exponentiated {v}")
            shifts.append((space.gen(v), space.gen(v) + center))
    remaining = tuple((v, c) for v, c in damping.centers if v not in variables)
    for v, c in remaining:
        if any(ExpPoly(space, c).depends_on(u) for u in variables):
            raise ClassViolation(f"Weight on {v} couples to the integration")
    poly = space.normalize(f.poly.compose(shifts)) if shifts else f.poly

    sqrte, sqrt2pi = space.index("sqrte"), space.index("sqrt2pi")
    terms: Dict[Tuple[int, ...], Any] = {}
    for monom, coeff in poly.items():
        exps = list(monom)
        for v in variables:
            i = space.index(v)
            k, exps[i] = exps[i], 0
            m = 0
            if v in space.exponentiated:
                ie, ii = space.index(exp_name(v)), space.index(expinv_name(v))
                m = exps[ie] - exps[ii]
                exps[ie] = exps[ii] = 0
            coeff = coeff * to_gaussian(gaussian_moment(m, k))
            exps[sqrte] += m * m
        exps[sqrt2pi] += len(variables)
        key = tuple(exps)
        terms[key] = terms.get(key, QQ_I.zero) + coeff
    weight = Damping(damping.kappa, remaining) if remaining else None
    return ExpPoly(space, space.ring.from_dict(terms), weight)


def antiderivative(f: ExpPoly, name: str) -> ExpPoly:
    """A primitive in ``name`` of an unweighted value.

    Raises:
        ClassViolation: When the value carries a weight
    """
    if f.damping is not None:
        raise ClassViolation("Primitive of a weighted value")
    space = f.space
    i = space.index(name)
    t = space.gen(name)
    out = space.ring.zero
    for monom, coeff in f.poly.items():
        exps = list(monom)
        j, exps[i] = exps[i], 0
        m = 0
        if name in space.exponentiated:
            ie, ii = space.index(exp_name(name)), space.index(expinv_name(name))
            m = exps[ie] - exps[ii]
            exps[ie] = exps[ii] = 0
        rest = space.ring.from_dict({tuple(exps): coeff})
        if m == 0:
            part = t ** (j + 1) * to_gaussian(QQ(1, j + 1))
        else:
            # int t^j e^(mt) = e^(mt) sum_r (-1)^r j!/(j-r)! t^(j-r) / m^(r+1)
            part = space.ring.zero
            falling = 1
            for r in range(j + 1):
                part += t ** (j - r) * to_gaussian(QQ((-1) ** r * falling, m ** (r + 1)))
                falling *= j - r
            companion = exp_name(name) if m > 0 else expinv_name(name)
            part *= space.gen(companion) ** abs(m)
        out += rest * part
    return ExpPoly(space, out)


@dataclass
class VectorField:
    """First-order operator sum_v c_v d/dv with ExpPoly coefficients."""

    space: ExpSpace
    components: Dict[str, ExpPoly]

    def apply(self, f: ExpPoly) -> ExpPoly:
        out = ExpPoly(self.space, self.space.ring.zero, f.damping)
        for v, c in self.components.items():
            if not c.is_zero():
                out = out + c * f.diff(v)
        return out

    def __call__(self, f: ExpPoly) -> ExpPoly:
        return self.apply(f)

    def bracket(self, other: "VectorField") -> "VectorField":
        """[X, Y] with components X(Y^v) - Y(X^v)."""
        names = list(dict.fromkeys(list(self.components) + list(other.components)))
        zero = self.space.zero()
        return VectorField(
            self.space,
            {
                v: self.apply(other.components.get(v, zero))
                - other.apply(self.components.get(v, zero))
                for v in names
            },
        )

    def scale(self, value: Any) -> "VectorField":
        return VectorField(
            self.space, {v: c * value for v, c in self.components.items()}
        )

    def __add__(self, other: "VectorField") -> "VectorField":
        names = list(dict.fromkeys(list(self.components) + list(other.components)))
        zero = self.space.zero()
        return VectorField(
            self.space,
            {
                v: self.components.get(v, zero) + other.components.get(v, zero)
                for v in names
            },
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.values())

    def at(self, images: Mapping[str, ExpPoly]) -> "VectorField":
        return VectorField(
            self.space, {v: c.at(images) for v, c in self.components.items()}
        )

    def to_json(self) -> Dict[str, Any]:
        return {v: c.to_json() for v, c in sorted(self.components.items())}
