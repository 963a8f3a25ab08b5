"""Identity checks for the Koszul reduction and the orbit trace."""

import logging
import random
from typing import Any, Dict, List, Sequence, Tuple

from src.core.checks import CheckResult, CheckStatus, collect_defects
from src.core.exact import I_UNIT, SeriesSign, series_sign
from src.poisson.brackets import poisson_bracket
from src.poisson.polynomial import PolyG
from src.poisson.samples import monomial_samples, sample_polynomials
from src.orbit.reduction import OrbitFn, OrbitReducer


logger = logging.getLogger(__name__)

REFERENCES = {
    "koszul": "prol o restrict + J h0 = id, h0(J f) = f, h0 o prol = 0, "
    "J central",
    "deformed-koszul": "deformed restriction kills g*J, inverts prol and "
    "ignores the choice of preimage",
    "orbit-assoc": "(a*b)*c = a*(b*c) for the orbit product",
    "orbit-hermitian": "conj(a*b) = conj(b)*conj(a) for the orbit product",
    "orbit-poisson": "lambda^1 part of a*b - b*a is i times the orbit "
    "Poisson bracket",
    "equivariance": "restriction, homotopy and deformed restriction commute "
    "with the coadjoint action",
    "trace": "the deformed orbit average vanishes on star commutators",
    "positivity": "the deformed orbit average of conj(f)*f is nonnegative "
    "in R[[lambda]]",
}


def _pick(items: Sequence[Any], count: int, seed: int) -> List[Any]:
    if count >= len(items):
        return list(items)
    rng = random.Random(seed)
    return [items[i] for i in sorted(rng.sample(range(len(items)), count))]


def _classes_sample(
    reducer: OrbitReducer, degree: int, arity: int, count: int, seed: int
) -> List[Tuple[OrbitFn, ...]]:
    classes = reducer.harmonic_classes(degree)
    combos: List[Tuple[OrbitFn, ...]] = [()]
    for _ in range(arity):
        combos = [c + (phi,) for c in combos for phi in classes]
    return _pick(combos, count, seed)


def _json(sample: Tuple[Any, ...]) -> List[Any]:
    return [s.to_json() for s in sample]


def check_koszul(reducer: OrbitReducer, degree: int) -> CheckResult:
    J = reducer.J
    algebra = reducer.algebra
    for i in range(algebra.dim):
        xi = PolyG.coordinate(algebra, i)
        central = reducer.star.commutator(J, xi)
        if not central.is_zero():
            return CheckResult(
                name="koszul",
                status=CheckStatus.FAILED,
                message=f"J is not central against xi{i + 1}",
                reference=REFERENCES["koszul"],
                first_defect=central.to_json(),
            )

    def defect(f: PolyG) -> List[Any]:
        phi = reducer.restrict(f)
        prol = reducer.prolong(phi)
        return [
            prol + J * reducer.homotopy_h0(f) - f,
            reducer.homotopy_h0(J * f) - f,
            reducer.homotopy_h0(prol),
            reducer.restrict(J * f).representative,
        ]

    return collect_defects(
        "koszul",
        REFERENCES["koszul"],
        monomial_samples(algebra, degree),
        defect,
        lambda f: f.to_json(),
    )


def check_deformed_koszul(
    reducer: OrbitReducer, degree: int, count: int, seed: int
) -> CheckResult:
    algebra = reducer.algebra
    polys = monomial_samples(algebra, degree)
    pairs = _pick([(f, g) for f in polys for g in polys], count, seed)

    def defect(pair: Tuple[PolyG, PolyG]) -> List[Any]:
        f, g = pair
        phi, psi = reducer.restrict(f), reducer.restrict(g)
        ideal = reducer.deformed_boundary(g)
        lifted = reducer.prolong(phi) + ideal
        return [
            reducer.deformed_restrict(ideal),
            reducer.deformed_restrict(reducer.prolong(phi)) - phi,
            reducer.deformed_restrict(reducer.star(lifted, reducer.prolong(psi)))
            - reducer.star_orbit(phi, psi),
        ]

    return collect_defects(
        "deformed-koszul", REFERENCES["deformed-koszul"], pairs, defect, _json
    )


def check_orbit_associativity(
    reducer: OrbitReducer, degree: int, count: int, seed: int
) -> CheckResult:
    def defect(t: Tuple[OrbitFn, ...]) -> OrbitFn:
        a, b, c = t
        return reducer.star_orbit(reducer.star_orbit(a, b), c) - reducer.star_orbit(
            a, reducer.star_orbit(b, c)
        )

    triples = _classes_sample(reducer, degree, 3, count, seed)
    return collect_defects(
        "orbit-assoc", REFERENCES["orbit-assoc"], triples, defect, _json
    )


def check_orbit_hermitian(
    reducer: OrbitReducer, degree: int, count: int, seed: int
) -> CheckResult:
    def defect(p: Tuple[OrbitFn, ...]) -> OrbitFn:
        a, b = p
        a = a * I_UNIT + b
        return reducer.star_orbit(a, b).conjugate() - reducer.star_orbit(
            b.conjugate(), a.conjugate()
        )

    pairs = _classes_sample(reducer, degree, 2, count, seed)
    return collect_defects(
        "orbit-hermitian", REFERENCES["orbit-hermitian"], pairs, defect, _json
    )


def check_orbit_poisson(
    reducer: OrbitReducer, degree: int, count: int, seed: int
) -> CheckResult:
    def defect(p: Tuple[OrbitFn, ...]) -> OrbitFn:
        a, b = p
        commutator = reducer.star_orbit(a, b) - reducer.star_orbit(b, a)
        bracket = reducer.orbit_poisson_bracket(a, b)
        return commutator.lambda_coefficient(1) - bracket * I_UNIT

    pairs = _classes_sample(reducer, degree, 2, count, seed)
    return collect_defects(
        "orbit-poisson", REFERENCES["orbit-poisson"], pairs, defect, _json
    )


def check_equivariance(reducer: OrbitReducer, degree: int) -> CheckResult:
    algebra = reducer.algebra
    cases = [
        (x, f) for x in range(algebra.dim) for f in monomial_samples(algebra, degree)
    ]

    def defect(case: Tuple[int, PolyG]) -> List[Any]:
        x, f = case
        xhat = PolyG.coordinate(algebra, x)
        moved = poisson_bracket(xhat, f)
        phi = reducer.restrict(f)
        return [
            reducer.restrict(moved) - reducer.lie_derivative(x, phi),
            reducer.homotopy_h0(moved) - poisson_bracket(xhat, reducer.homotopy_h0(f)),
            reducer.prolong(reducer.lie_derivative(x, phi))
            - poisson_bracket(xhat, reducer.prolong(phi)),
            reducer.deformed_restrict(moved)
            - reducer.lie_derivative(x, reducer.deformed_restrict(f)),
        ]

    return collect_defects(
        "equivariance",
        REFERENCES["equivariance"],
        cases,
        defect,
        lambda c: {"x": c[0] + 1, "f": c[1].to_json()},
    )


def check_orbit_trace(
    reducer: OrbitReducer, degree: int, count: int, seed: int
) -> CheckResult:
    polys = monomial_samples(reducer.algebra, degree)
    pairs = _pick([(f, g) for f in polys for g in polys], count, seed)
    return collect_defects(
        "trace",
        REFERENCES["trace"],
        pairs,
        lambda p: reducer.positive_trace(reducer.star.commutator(p[0], p[1])),
        _json,
    )


def positivity_family(reducer: OrbitReducer, seed: int, size: int = 20) -> List[PolyG]:
    """Sample polynomials together with elements of the ideal (J)."""
    algebra = reducer.algebra
    family: List[PolyG] = [
        reducer.J * PolyG.coordinate(algebra, 0),
        reducer.star(reducer.J, PolyG.coordinate(algebra, 1)),
        reducer.J,
    ]
    family += sample_polynomials(algebra, 2, max(0, size - len(family)), seed)
    return family[:size]


def check_positivity(
    reducer: OrbitReducer, seed: int, size: int = 20
) -> CheckResult:
    signs: Dict[str, int] = {}
    family = positivity_family(reducer, seed, size)
    indefinite = None
    for count, f in enumerate(family, start=1):
        value = reducer.positive_trace(reducer.star(f.conjugate(), f))
        sign = series_sign(value)
        signs[sign.value] = signs.get(sign.value, 0) + 1
        if sign in (SeriesSign.NEGATIVE, SeriesSign.NON_REAL):
            return CheckResult(
                name="positivity",
                status=CheckStatus.FAILED,
                message=f"Trace of conj(f)*f is {sign.value}",
                reference=REFERENCES["positivity"],
                sample_count=count,
                first_defect={"f": f.to_json(), "value": value.to_json()},
                details={"signs": signs},
            )
        if sign == SeriesSign.INDEFINITE and indefinite is None:
            indefinite = {"f": f.to_json(), "value": value.to_json()}
    if indefinite is not None:
        return CheckResult(
            name="positivity",
            status=CheckStatus.WARNING,
            message="Sign undecided for a symbolic coefficient",
            reference=REFERENCES["positivity"],
            sample_count=len(family),
            first_defect=indefinite,
            details={"signs": signs},
        )
    return CheckResult(
        name="positivity",
        status=CheckStatus.PASSED,
        message=f"Nonnegative on {len(family)} samples",
        reference=REFERENCES["positivity"],
        sample_count=len(family),
        details={"signs": signs},
    )
