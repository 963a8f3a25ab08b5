"""Exact identity checks for star products on Pol(g*).

Each check returns a :class:`~src.core.checks.CheckResult` whose first
defect is the offending sample together with its exact defect.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from src.core.checks import CheckResult, CheckStatus, collect_defects, serialize
from src.core.exact import to_gaussian
from src.lie.algebra import LieAlgebra, unimodular
from src.lie.bch import DEFAULT_MAX_ORDER, specialize_bch
from src.poisson.brackets import homogeneity_defect, poisson_bracket
from src.poisson.integrals import GaussPoly, gaussian_integral
from src.poisson.polynomial import PolyG, monomials_up_to, unit_vector
from src.star.base import BCHStarProduct, StarProduct
from src.star.diffop import bidiff_extract
from src.star.functionals import TraceFunctional


logger = logging.getLogger(__name__)

REFERENCES = {
    "assoc": "(f*g)*h = f*(g*h)",
    "strong-inv": "x*f - f*x = nu {x, f} for linear x",
    "homog": "nu d/dnu + L_E is a derivation of *",
    "covariance": "x*y - y*x = nu [x, y] for linear x, y",
    "hermitian": "conj(f*g) = conj(g)*conj(f) with nu = i lam",
    "exp-bch": "exp(x)*exp(y) = exp(H(nu x, nu y)/nu) with H the BCH series",
    "closedness": "the Lebesgue integral of f*g - g*f vanishes iff the "
    "algebra is unimodular",
    "invariant-trace": "an invariant functional kills Poisson brackets "
    "and star commutators alike",
}


def _pair(sample: Tuple[PolyG, ...]) -> List[Any]:
    return [p.to_json() for p in sample]


def check_associativity(
    star: StarProduct, triples: Sequence[Tuple[PolyG, PolyG, PolyG]]
) -> CheckResult:
    def defect(t: Tuple[PolyG, PolyG, PolyG]) -> PolyG:
        f, g, h = t
        return star(star(f, g), h) - star(f, star(g, h))

    return collect_defects("assoc", REFERENCES["assoc"], triples, defect, _pair)


def verify_strong_invariance(star: StarProduct, x: int, f: PolyG) -> PolyG:
    """x*f - f*x - nu{x, f} for the basis element with index x (zero-based)."""
    xhat = PolyG.coordinate(f.algebra, x)
    nu = PolyG.nu(f.algebra)
    return star(xhat, f) - star(f, xhat) - nu * poisson_bracket(xhat, f)


def check_strong_invariance(
    star: StarProduct, samples: Sequence[PolyG]
) -> CheckResult:
    if not samples:
        return collect_defects("strong-inv", REFERENCES["strong-inv"], [], len)
    dim = samples[0].dim
    cases = [(x, f) for x in range(dim) for f in samples]
    return collect_defects(
        "strong-inv",
        REFERENCES["strong-inv"],
        cases,
        lambda c: verify_strong_invariance(star, c[0], c[1]),
        lambda c: {"x": c[0] + 1, "f": c[1].to_json()},
    )


def check_homogeneity(
    star: StarProduct, pairs: Sequence[Tuple[PolyG, PolyG]]
) -> CheckResult:
    return collect_defects(
        "homog",
        REFERENCES["homog"],
        pairs,
        lambda p: homogeneity_defect(star, p[0], p[1]),
        _pair,
    )


def check_covariance(star: StarProduct, algebra: LieAlgebra) -> CheckResult:
    n = algebra.dim
    nu = PolyG.nu(algebra)

    def defect(pair: Tuple[int, int]) -> PolyG:
        i, j = pair
        x, y = PolyG.coordinate(algebra, i), PolyG.coordinate(algebra, j)
        bracket = PolyG.linear(
            algebra, algebra.bracket(unit_vector(n, i), unit_vector(n, j))
        )
        return star.commutator(x, y) - nu * bracket

    cases = [(i, j) for i in range(n) for j in range(n)]
    return collect_defects(
        "covariance",
        REFERENCES["covariance"],
        cases,
        defect,
        lambda p: {"x": p[0] + 1, "y": p[1] + 1},
    )


def check_hermitian(
    star: StarProduct, pairs: Sequence[Tuple[PolyG, PolyG]]
) -> CheckResult:
    def defect(p: Tuple[PolyG, PolyG]) -> PolyG:
        f, g = p
        return star(f, g).conjugate() - star(g.conjugate(), f.conjugate())

    return collect_defects(
        "hermitian", REFERENCES["hermitian"], pairs, defect, _pair
    )


# ---------------------------------------------------------------------------
# BCH series oracle


@dataclass
class ExpBCHReport:
    """Outcome of the exponential cross-check."""

    success: bool
    order: int
    mismatch: Optional[Tuple[int, int]] = None
    defect: Optional[PolyG] = None
    exponent: Dict[int, List[Any]] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "success": self.success,
            "order": self.order,
            "mismatch": list(self.mismatch) if self.mismatch else None,
            "defect": self.defect.to_json() if self.defect else None,
            "exponent": {
                str(j): [serialize(v) for v in vec]
                for j, vec in sorted(self.exponent.items())
            },
        }


def _exp_series(z: PolyG, order: int) -> PolyG:
    """Pointwise exponential of z, kept to H-weight <= order."""
    out = PolyG.one(z.algebra)
    term = PolyG.one(z.algebra)
    for k in range(1, order + 1):
        term = (term * z).truncate_weight(order) * to_gaussian(QQ(1, k))
        out = out + term
    return out


def verify_exp_bch(
    algebra: LieAlgebra,
    x: Sequence[Any],
    y: Sequence[Any],
    order: int = DEFAULT_MAX_ORDER,
) -> ExpBCHReport:
    """Compare exp(x) * exp(y) with exp(sum_j nu^(j-1) H_j(x, y)).

    Both sides are kept to H-weight (xi-degree plus lambda exponent) at
    most ``order``; the star product preserves that weight.
    """
    star = BCHStarProduct(algebra)
    xhat, yhat = PolyG.linear(algebra, x), PolyG.linear(algebra, y)
    left = PolyG.zero(algebra)
    for a in range(order + 1):
        for b in range(order + 1 - a):
            scale = to_gaussian(QQ(1, factorial(a) * factorial(b)))
            left = left + star(xhat**a, yhat**b) * scale

    components = specialize_bch(algebra, x, y, order)
    nu = PolyG.nu(algebra)
    exponent = PolyG.zero(algebra)
    for j, vec in components.items():
        exponent = exponent + PolyG.linear(algebra, vec) * nu ** (j - 1)
    right = _exp_series(exponent, order)

    defect = (left - right).truncate_weight(order)
    report = ExpBCHReport(
        success=defect.is_zero(),
        order=order,
        exponent={j: list(v) for j, v in components.items()},
    )
    if not report.success:
        report.defect = defect
        report.mismatch = min(
            (l, sum(alpha)) for alpha, l, _, _ in defect.terms()
        )
        logger.info(f"exp-bch mismatch at (nu-order, degree) {report.mismatch}")
    return report


def check_exp_bch(
    algebra: LieAlgebra,
    order: int = DEFAULT_MAX_ORDER,
    pairs: Optional[Sequence[Tuple[Sequence[Any], Sequence[Any]]]] = None,
) -> CheckResult:
    """Run the oracle on basis pairs (or the given vector pairs)."""
    n = algebra.dim
    if pairs is None:
        pairs = [
            (unit_vector(n, i), unit_vector(n, j))
            for i in range(n)
            for j in range(n)
            if i != j
        ] or [(unit_vector(n, 0), unit_vector(n, 0))]
    for count, (x, y) in enumerate(pairs, start=1):
        report = verify_exp_bch(algebra, x, y, order)
        if not report.success:
            return CheckResult(
                name="exp-bch",
                status=CheckStatus.FAILED,
                message=f"Mismatch at (nu-order, degree) {report.mismatch}",
                reference=REFERENCES["exp-bch"],
                sample_count=count,
                first_defect={"x": list(map(str, x)), "y": list(map(str, y)), "report": report.to_json()},
            )
    return CheckResult(
        name="exp-bch",
        status=CheckStatus.PASSED,
        message=f"Series agree through order {order} on {len(pairs)} pairs",
        reference=REFERENCES["exp-bch"],
        sample_count=len(pairs),
    )


# ---------------------------------------------------------------------------
# Closedness and traces


def closedness_defect(
    star: StarProduct, f: PolyG, g: GaussPoly, r: int
) -> Any:
    """Integral of C_r(f, g) - C_r(g, f) against the Gaussian class."""
    left = bidiff_extract(star, f, r, "left").apply(g)
    right = bidiff_extract(star, f, r, "right").apply(g)
    return gaussian_integral(left - right)


def check_closedness(
    star: StarProduct,
    algebra: LieAlgebra,
    fdeg: int,
    gdeg: int,
    order: Optional[int] = None,
) -> CheckResult:
    """Integrate star commutators of monomials with Gaussian-class functions.

    Args:
        star: Product to test
        algebra: Algebra the samples live over
        fdeg: Maximal degree of the polynomial argument
        gdeg: Maximal degree of the Gaussian factor
        order: Highest lambda order examined, ``fdeg + 1`` by default
    """
    top = fdeg + 1 if order is None else order
    fs = monomials_up_to(algebra.dim, fdeg)
    gs = monomials_up_to(algebra.dim, gdeg)
    count = 0
    for r in range(1, top + 1):
        for alpha in fs:
            f = PolyG.monomial(algebra, alpha)
            for gamma in gs:
                count += 1
                g = GaussPoly(PolyG.monomial(algebra, gamma))
                value = closedness_defect(star, f, g, r)
                if value.is_zero():
                    continue
                return CheckResult(
                    name="closedness",
                    status=CheckStatus.FAILED,
                    message=f"Nonzero integral at nu^{r}",
                    reference=REFERENCES["closedness"],
                    sample_count=count,
                    first_defect={
                        "f": f.to_json(),
                        "g_factor": g.factor.to_json(),
                        "nu_order": r,
                        "value": value.to_json(),
                    },
                    details={
                        "nu_order": r,
                        "unimodular": unimodular(algebra).unimodular,
                    },
                )
    return CheckResult(
        name="closedness",
        status=CheckStatus.PASSED,
        message=f"All integrals vanish through order {top}",
        reference=REFERENCES["closedness"],
        sample_count=count,
    )


def check_invariant_trace(
    star: StarProduct,
    functional: TraceFunctional,
    pairs: Sequence[Tuple[PolyG, PolyG]],
) -> CheckResult:
    """tau({f, g}) = 0 and tau(f*g - g*f) = 0 on every pair."""
    count = 0
    for f, g in pairs:
        count += 1
        poisson_value = functional(poisson_bracket(f, g))
        star_value = functional(star.commutator(f, g))
        if not (poisson_value.is_zero() and star_value.is_zero()):
            return CheckResult(
                name="invariant-trace",
                status=CheckStatus.FAILED,
                message=f"{functional.name} is not a trace on sample {count}",
                reference=REFERENCES["invariant-trace"],
                sample_count=count,
                first_defect={
                    "f": f.to_json(),
                    "g": g.to_json(),
                    "poisson": poisson_value.to_json(),
                    "star": star_value.to_json(),
                },
                details={
                    "functional": functional.name,
                    "poisson_trace": poisson_value.is_zero(),
                    "star_trace": star_value.is_zero(),
                },
            )
    return CheckResult(
        name="invariant-trace",
        status=CheckStatus.PASSED,
        message=f"{functional.name} kills brackets and commutators",
        reference=REFERENCES["invariant-trace"],
        sample_count=count,
        details={"functional": functional.name},
    )
