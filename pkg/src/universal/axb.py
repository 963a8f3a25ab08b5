"""The ax+b instance: a left-invariant product conjugated from Moyal.

On G = {(a, l)} with symplectic form da ^ dl the operator

    T f = sum_m (1/m!) (eps * s(d_l))^m (l^m f),
    s(d) = sin(lam d)/lam - d = sum_(k>=1) (-1)^k lam^(2k) d^(2k+1) / (2k+1)!,

acts in l only; multiplication by l^m happens first, derivatives last.
``eps`` is the exponent sign: with eps = -1, T d_l T^-1 = sin(lam d_l)/lam
and every right-invariant frame field is an inner derivation of Moyal
after conjugation. The product is

    f *_BM g = T^-1 (T f *_Moyal T g)

and tr(f) = int T(f) da dl is a trace for it.
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Any, Dict, List, Optional, Sequence

from sympy.polys.domains import QQ

from src.core.exact import I_UNIT, SymbolicScalar, to_gaussian
from src.universal.deformation import GroupStarProduct, moyal_exp
from src.universal.expoly import (
    ClassViolation,
    ExpPoly,
    ExpSpace,
    VectorField,
    antiderivative,
    integrate,
)
from src.universal.groups import GroupModel


logger = logging.getLogger(__name__)

DEFAULT_T_SIGN = -1
DEFAULT_BM_ORDER = 4
T_SIGNS = (-1, 1)


class NoSolution(Exception):
    """Raised when a derivation has no Hamiltonian at some lambda order."""

    def __init__(
        self,
        message: str,
        order: int,
        obstruction: Optional[ExpPoly] = None,
        test_function: Optional[ExpPoly] = None,
    ) -> None:
        super().__init__(message)
        self.order = order
        self.obstruction = obstruction
        self.test_function = test_function

    def to_json(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "obstruction": self.obstruction.to_json() if self.obstruction else None,
            "test_function": (
                self.test_function.to_json() if self.test_function else None
            ),
        }


class TOperator:
    """T and its Neumann-series inverse through lambda^order.

    With the default sign -1, T(l^2) = l^2 + lam^2 and every right-invariant
    frame field of ax+b is inner after conjugation; sign +1 gives
    T(l^2) = l^2 - lam^2 and an obstruction at order lam^2.

    Args:
        space: Ring of the functions T acts on
        variable: The coordinate T acts in
        order: Lambda truncation
        sign: Exponent sign eps, -1 or +1
    """

    def __init__(
        self,
        space: ExpSpace,
        variable: str = "l",
        order: int = DEFAULT_BM_ORDER,
        sign: int = DEFAULT_T_SIGN,
    ) -> None:
        if sign not in T_SIGNS:
            raise ValueError(f"T exponent sign must be -1 or 1, got {sign}")
        self.space = space
        self.variable = variable
        self.order = order
        self.sign = sign

    def _s(self, f: ExpPoly) -> ExpPoly:
        """sum_(k>=1) (-1)^k lam^(2k) d^(2k+1) f / (2k+1)!."""
        lam = self.space.lam()
        out = ExpPoly(self.space, self.space.ring.zero, f.damping)
        derivative = f.diff(self.variable)
        for k in range(1, self.order // 2 + 1):
            derivative = derivative.diff(self.variable).diff(self.variable)
            if derivative.is_zero():
                break
            scale = to_gaussian(QQ((-1) ** k, factorial(2 * k + 1)))
            out = out + derivative * lam ** (2 * k) * scale
        return out.truncate(self.order)

    def apply(self, f: ExpPoly) -> ExpPoly:
        ell = self.space.variable(self.variable)
        out = f.truncate(self.order)
        for m in range(1, self.order // 2 + 1):
            term = f * ell**m
            for _ in range(m):
                term = self._s(term) * self.sign
            if term.is_zero():
                continue
            out = out + term * to_gaussian(QQ(1, factorial(m)))
        return out.truncate(self.order)

    def __call__(self, f: ExpPoly) -> ExpPoly:
        return self.apply(f)

    def inverse(self, f: ExpPoly) -> ExpPoly:
        """sum_j (-N)^j f with N = T - 1, which raises the lambda order by 2."""
        out = f.truncate(self.order)
        term = out
        for _ in range(self.order // 2):
            term = -(self.apply(term) - term)
            if term.is_zero():
                break
            out = out + term
        return out.truncate(self.order)


class BMProduct(GroupStarProduct):
    """f *_BM g = T^-1(T f *_Moyal T g) on the ax+b group."""

    def __init__(
        self,
        group: GroupModel,
        order: int = DEFAULT_BM_ORDER,
        sign: int = DEFAULT_T_SIGN,
    ) -> None:
        super().__init__(group, order)
        if group.darboux != (("a", "l"),):
            raise ClassViolation(f"{group.name} is not the ax+b model")
        self.sign = sign

    @property
    def name(self) -> str:
        return "bm"

    @property
    def invariance(self) -> str:
        return "left"

    @property
    def T(self) -> TOperator:
        return TOperator(self.group.space, "l", self.order, self.sign)

    def _multiply(self, f: ExpPoly, g: ExpPoly) -> ExpPoly:
        T = self.T
        return T.inverse(moyal_exp(T(f), T(g), self.group.darboux, self.order))


def trace_bm(f: ExpPoly, T: TOperator) -> SymbolicScalar:
    """int T(f) da dl for a value weighted in a and l with kappa = 1.

    Raises:
        ClassViolation: When f is outside the weighted class
    """
    if f.damping is None:
        raise ClassViolation("trace needs a Gaussian-weighted argument")
    return integrate(T(f), ["a", "l"]).scalar()


# -- inner derivations -------------------------------------------------------


def ad_over_i_lambda(
    h: ExpPoly, f: ExpPoly, pairs: Sequence[Any], order: int
) -> ExpPoly:
    """(1/(i lam)) [h, f]_Moyal through lambda^order."""
    commutator = moyal_exp(h, f, pairs, order + 1) - moyal_exp(f, h, pairs, order + 1)
    space = h.space
    pos = space.index("lam")
    terms = {}
    for monom, coeff in commutator.poly.items():
        if monom[pos] == 0:
            continue
        key = list(monom)
        key[pos] -= 1
        terms[tuple(key)] = coeff * (-I_UNIT)
    return ExpPoly(space, space.ring.from_dict(terms), commutator.damping)


def test_functions(space: ExpSpace, degree: int) -> List[ExpPoly]:
    """e^(m a) a^i l^j with |m| <= 1, i <= 1 and j <= degree."""
    out = []
    for m in (-1, 0, 1):
        base = space.one() if m == 0 else space.exp("a", m)
        for i in range(2):
            for j in range(degree + 1):
                out.append(base * space.variable("a") ** i * space.variable("l") ** j)
    return out


@dataclass
class InnerDerivation:
    """A Hamiltonian h with T X T^-1 = (1/(i lam)) [h, .] on the test set."""

    field: VectorField
    hamiltonian: ExpPoly
    order: int
    test_count: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_json(),
            "hamiltonian": self.hamiltonian.to_json(),
            "order": self.order,
            "test_count": self.test_count,
        }


def conjugated_field(T: TOperator, field: VectorField, f: ExpPoly) -> ExpPoly:
    """T X T^-1 f."""
    return T(field(T.inverse(f))).truncate(T.order)


def solve_inner_derivation(
    field: VectorField,
    T: TOperator,
    pairs: Sequence[Any],
    tests: Optional[Sequence[ExpPoly]] = None,
) -> InnerDerivation:
    """Solve T X T^-1 = (1/(i lam)) [h, .] order by order.

    At each order the candidate h_k comes from the residual on ``a`` and
    ``l``: d_l h_k = R(a) and d_a h_k = -R(l). It is then confirmed on every
    test function.

    Raises:
        NoSolution: With the obstruction at the first failing order
    """
    space = T.space
    order = T.order
    tests = list(tests) if tests is not None else test_functions(space, order + 1)
    a, ell = space.variable("a"), space.variable("l")
    conjugated = {i: conjugated_field(T, field, f) for i, f in enumerate(tests)}
    on_a = conjugated_field(T, field, a)
    on_l = conjugated_field(T, field, ell)
    h = space.zero()
    lam = space.lam()
    for k in range(order + 1):
        ra = (on_a - ad_over_i_lambda(h, a, pairs, order)).lambda_coefficient(k)
        rl = (on_l - ad_over_i_lambda(h, ell, pairs, order)).lambda_coefficient(k)
        hk = antiderivative(ra, "l")
        rest = -rl - hk.diff("a")
        if rest.depends_on("l"):
            raise NoSolution(
                f"Residual at lambda^{k} is not Hamiltonian", k, obstruction=rest
            )
        hk = hk + antiderivative(rest, "a")
        h = h + hk * lam**k
        for i, f in enumerate(tests):
            residual = (conjugated[i] - ad_over_i_lambda(h, f, pairs, order))
            residual = residual.lambda_coefficient(k)
            if not residual.is_zero():
                logger.info(f"Inner derivation obstructed at lambda^{k}")
                raise NoSolution(
                    f"Obstruction at lambda^{k}",
                    k,
                    obstruction=residual,
                    test_function=f,
                )
    return InnerDerivation(field, h, order, len(tests))


def bracket_compatibility(
    group: GroupModel, hamiltonians: Sequence[ExpPoly], order: int
) -> List[ExpPoly]:
    """Nonconstant parts of (1/(i lam))[h_i, h_j] - sum_k c_ij^k h_k.

    Also returns the frame-closure defects [X_i, X_j] - sum_k c_ij^k X_k.
    """
    frame = group.right_invariant_frame()
    constants = group.structure_constants()
    defects: List[ExpPoly] = []
    n = group.dim
    for i in range(n):
        for j in range(i + 1, n):
            c = constants[(i, j)]
            expected = frame[i].bracket(frame[j])
            combined = VectorField(group.space, {})
            for k in range(n):
                combined = combined + frame[k].scale(c[k])
            closure = expected + combined.scale(-1)
            defects += list(closure.components.values())
            value = ad_over_i_lambda(
                hamiltonians[i], hamiltonians[j], group.darboux, order
            )
            for k in range(n):
                value = value - hamiltonians[k] * c[k]
            for coord in group.coordinates:
                defects.append(value.diff(coord))
    return defects
