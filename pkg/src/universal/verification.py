"""Identity checks for universal deformations and the ax+b instance."""

import itertools
import logging
import random
from typing import Any, Dict, List, Sequence, Tuple

from sympy.polys.domains import QQ

from src.core.checks import (
    CheckResult,
    CheckStatus,
    collect_defects,
    combine_results,
)
from src.core.exact import I_UNIT, SeriesSign, rename_terms, series_sign
from src.poisson.polynomial import PolyG, polynomial_ring
from src.star.moyal import moyal, phase_space
from src.universal.axb import (
    BMProduct,
    NoSolution,
    TOperator,
    bracket_compatibility,
    solve_inner_derivation,
    trace_bm,
)
from src.universal.deformation import (
    GroupStarProduct,
    MoyalGroupProduct,
    combination,
    evaluation,
    group_integral,
    induced_trace,
    induced_trace_commutator,
    induced_trace_product,
    inversion_conjugate,
    poisson_exp,
    star_X,
    tangential_defect,
)
from src.universal.expoly import ExpPoly, ExpSpace, VectorField
from src.universal.groups import (
    ActionModel,
    GroupModel,
    check_group_axioms,
    translations,
)


logger = logging.getLogger(__name__)

REFERENCES = {
    "group-axioms": "group law and action are associative, unital and invertible",
    "ralpha": "R*_h alpha^x = alpha^(h.x) and L*_h alpha^x = alpha^x tau*_h",
    "moyal-recovery": "the translation action of Moyal induces Moyal on X",
    "starx-assoc": "(f1 *_X f2) *_X f3 = f1 *_X (f2 *_X f3)",
    "tangential": "f1 constant on orbits gives f1 *_X f2 = f1 f2",
    "bi-invariance": "the declared left/right invariance of the group product "
    "holds at a generic element",
    "left-universal": "the inversion-conjugated product is left-invariant and "
    "induces an associative product",
    "main-trace": "tr_Phi(f1 *_X f2 - f2 *_X f1) = 0 and tr_Phi(conj f *_X f) >= 0",
    "t-operator": "T is real, even in lambda, invertible and fixes l-free functions",
    "bm-assoc": "T^-1(T f * T g) is associative, Hermitian and has the Poisson "
    "bracket at lambda^1",
    "inner-derivation": "T X T^-1 = (1/(i lam)) [h_X, .] for the right-invariant frame",
    "bm-trace": "int T(f *_BM g - g *_BM f) = 0 and int T(conj f *_BM f) >= 0",
}


def pick(items: Sequence[Any], count: int, seed: int) -> List[Any]:
    if count >= len(items):
        return list(items)
    rng = random.Random(seed)
    return [items[i] for i in sorted(rng.sample(range(len(items)), count))]


def _json(sample: Tuple[Any, ...]) -> List[Any]:
    return [s.to_json() for s in sample]


def monomials_in(space: ExpSpace, names: Sequence[str], degree: int) -> List[ExpPoly]:
    """Monomials of total degree <= degree in the listed coordinates."""
    out = []
    for exps in itertools.product(range(degree + 1), repeat=len(names)):
        if sum(exps) <= degree:
            term = space.one()
            for name, e in zip(names, exps):
                term = term * space.variable(name) ** e
            out.append(term)
    return out


def axb_samples(space: ExpSpace, degree: int, max_m: int = 2) -> List[ExpPoly]:
    """e^(m a) a^i l^j with |m| <= max_m and i + j <= degree."""
    out = []
    for m in range(-max_m, max_m + 1):
        base = space.one() if m == 0 else space.exp("a", m)
        for mono in monomials_in(space, ("a", "l"), degree):
            out.append(base * mono)
    return out


def _moving_coordinates(action: ActionModel) -> List[str]:
    return [c for c in action.x_coordinates if c not in action.spectators]


# -- framework checks --------------------------------------------------------


def check_ralpha(
    action: ActionModel, degree: int, count: int, seed: int
) -> CheckResult:
    group = action.group
    h = group.generic("h_")
    moved_x = action.act(h, action.point())
    samples = pick(monomials_in(action.space, action.x_coordinates, degree), count, seed)

    def defect(f: ExpPoly) -> List[ExpPoly]:
        lifted = action.alpha(f)
        return [
            group.right_translate(lifted, h) - action.alpha(f, moved_x),
            group.left_translate(lifted, h) - action.alpha(action.tau_pullback(f, h)),
        ]

    return collect_defects(
        "ralpha", REFERENCES["ralpha"], samples, defect, lambda f: f.to_json()
    )


def to_phase_space(f: ExpPoly) -> PolyG:
    """A polynomial in xq1, xp1 and lam as an element of Pol(R^2)."""
    poly = rename_terms(f.poly, polynomial_ring(2), {"xq1": "xi1", "xp1": "xi2"})
    return PolyG(phase_space(1), poly)


def check_moyal_recovery(degree: int, count: int, seed: int) -> CheckResult:
    action = translations(1)
    star = MoyalGroupProduct(action.group, order=degree)
    polys = monomials_in(action.space, ("xq1", "xp1"), degree)
    pairs = pick([(f, g) for f in polys for g in polys], count, seed)

    def defect(pair: Tuple[ExpPoly, ExpPoly]) -> PolyG:
        f, g = pair
        induced = to_phase_space(star_X(star, action, f, g))
        return induced - moyal(to_phase_space(f), to_phase_space(g))

    return collect_defects(
        "moyal-recovery", REFERENCES["moyal-recovery"], pairs, defect, _json
    )


def check_starx_associativity(
    star: GroupStarProduct,
    action: ActionModel,
    degree: int,
    count: int,
    seed: int,
    invariance: str = "right",
) -> CheckResult:
    polys = monomials_in(action.space, action.x_coordinates, degree)
    triples = pick(list(itertools.product(polys, repeat=3)), count, seed)

    def product(f: ExpPoly, g: ExpPoly) -> ExpPoly:
        return star_X(star, action, f, g, invariance)

    def defect(t: Tuple[ExpPoly, ...]) -> ExpPoly:
        f1, f2, f3 = t
        return product(product(f1, f2), f3) - product(f1, product(f2, f3))

    return collect_defects(
        "starx-assoc", REFERENCES["starx-assoc"], triples, defect, _json
    )


def check_tangential(
    star: GroupStarProduct, action: ActionModel, degree: int
) -> CheckResult:
    space = action.space
    constants = [
        f
        for f in monomials_in(space, action.spectators, degree)
        if not f.is_zero()
    ]
    moving = monomials_in(space, _moving_coordinates(action), degree)
    cases = [(f1, f2) for f1 in constants for f2 in moving]
    return collect_defects(
        "tangential",
        REFERENCES["tangential"],
        cases,
        lambda c: tangential_defect(star, action, c[0], c[1]),
        _json,
    )


def invariance_defects(
    star: GroupStarProduct, samples: Sequence[Tuple[ExpPoly, ExpPoly]]
) -> Dict[str, Any]:
    """First nonzero right and left defect, or None, keyed by side."""
    group = star.group
    h = group.generic("h_")
    sides = {
        "right": lambda f: group.right_translate(f, h),
        "left": lambda f: group.left_translate(f, h),
    }
    out: Dict[str, Any] = {}
    for side, move in sides.items():
        out[side] = None
        for f, g in samples:
            d = move(star(f, g)) - star(move(f), move(g))
            if not d.is_zero():
                out[side] = {"sample": _json((f, g)), "defect": d.to_json()}
                break
    return out


def check_bi_invariance(
    star: GroupStarProduct,
    action: ActionModel,
    samples: Sequence[Tuple[ExpPoly, ExpPoly]],
    x_samples: Sequence[Tuple[ExpPoly, ExpPoly]] = (),
) -> CheckResult:
    """Right/left automorphism property of the product at a generic element.

    Only the sides the product declares are asserted. For bi-invariant
    products the induced product is also checked for tau*_h invariance.
    """
    found = invariance_defects(star, samples)
    expected = ("right", "left") if star.invariance == "bi" else (star.invariance,)
    details: Dict[str, Any] = {
        "product": star.name,
        "model": star.group.name,
        "declared": star.invariance,
        "right": found["right"] is None,
        "left": found["left"] is None,
    }
    name = f"{star.name}@{star.group.name}"
    for side in expected:
        if side in found and found[side] is not None:
            return CheckResult(
                name=name,
                status=CheckStatus.FAILED,
                message=f"{star.name} is not {side}-invariant",
                reference=REFERENCES["bi-invariance"],
                sample_count=len(samples),
                first_defect=found[side],
                details=details,
            )
    if star.invariance == "bi" and x_samples:
        h = action.group.generic("h_")
        tau = collect_defects(
            name,
            REFERENCES["bi-invariance"],
            x_samples,
            lambda p: action.tau_pullback(star_X(star, action, p[0], p[1]), h)
            - star_X(
                star,
                action,
                action.tau_pullback(p[0], h),
                action.tau_pullback(p[1], h),
            ),
            _json,
        )
        if not tau.passed:
            tau.details = details
            return tau
        details["tau"] = True
    return CheckResult(
        name=name,
        status=CheckStatus.PASSED,
        message=f"{star.name} is {star.invariance}-invariant",
        reference=REFERENCES["bi-invariance"],
        sample_count=len(samples) + len(x_samples),
        details=details,
    )


def check_left_universal(
    star: GroupStarProduct, action: ActionModel, degree: int, count: int, seed: int
) -> CheckResult:
    """Inversion conjugate of a right-invariant product, used left-universally."""
    conjugate = inversion_conjugate(star)
    group_polys = monomials_in(action.space, action.group.coordinates, degree)
    pairs = pick([(f, g) for f in group_polys for g in group_polys], count, seed)
    invariance = invariance_defects(conjugate, pairs)
    if invariance["left"] is not None:
        return CheckResult(
            name="left-universal",
            status=CheckStatus.FAILED,
            message=f"{conjugate.name} is not left-invariant",
            reference=REFERENCES["left-universal"],
            sample_count=len(pairs),
            first_defect=invariance["left"],
        )
    result = check_starx_associativity(
        conjugate, action, degree, count, seed, invariance="left"
    )
    result.name = "left-universal"
    result.reference = REFERENCES["left-universal"]
    result.sample_count += len(pairs)
    return result


def check_main_trace(
    action: ActionModel, order: int, degree: int, count: int, seed: int
) -> CheckResult:
    """Induced traces on the translation instance.

    Commutators pair a polynomial with a Gaussian-weighted function; the
    positivity samples carry half weights so that conj(f) * f has kappa = 1.
    """
    space = action.space
    group = action.group
    star = MoyalGroupProduct(group, order)
    trace = group_integral(group)
    moving = _moving_coordinates(action)
    functionals = [
        evaluation(),
        combination([(1, None), (2, {c: k + 1 for k, c in enumerate(moving)})]),
    ]
    polys = monomials_in(space, action.x_coordinates, degree)
    weighted = [p.damped(moving) for p in monomials_in(space, moving, degree)]
    pairs = pick([(f, g) for f in polys for g in weighted], count, seed)
    commutators = collect_defects(
        "main-trace:commutator",
        REFERENCES["main-trace"],
        [(phi, f, g) for phi in functionals for f, g in pairs],
        lambda c: induced_trace_commutator(trace, c[0], star, action, c[1], c[2]),
        lambda c: {"functional": c[0].name, "pair": _json((c[1], c[2]))},
    )
    gaussian = space.one().damped(moving)
    two_pi = space.variable("sqrt2pi") ** len(moving)
    unit = collect_defects(
        "main-trace:unit",
        REFERENCES["main-trace"],
        [functionals[0]],
        lambda phi: induced_trace(trace, phi, action, gaussian) - two_pi,
        lambda phi: phi.name,
    )
    positivity = check_induced_positivity(star, action, trace, functionals)
    result = combine_results(
        "main-trace", REFERENCES["main-trace"], [commutators, unit, positivity]
    )
    return result


def half_weighted(space: ExpSpace, names: Sequence[str]) -> List[ExpPoly]:
    """Positivity samples b * exp(-|v|^2/4), so conj(f) * f has kappa = 1."""
    one = space.one()
    first = space.variable(names[0])
    last = space.variable(names[-1])
    bases = [one, first, first + last * I_UNIT, one + first * first]
    return [b.damped(names, kappa=QQ(1, 2)) for b in bases]


def check_induced_positivity(
    star: GroupStarProduct, action: ActionModel, trace: Any, functionals: Sequence[Any]
) -> CheckResult:
    samples = half_weighted(action.space, _moving_coordinates(action))
    count = 0
    for phi in functionals:
        if not phi.nonnegative:
            continue
        for f in samples:
            count += 1
            value = induced_trace_product(
                trace, phi, star, action, f.conjugate(), f
            ).scalar()
            sign = series_sign(value)
            if sign != SeriesSign.POSITIVE:
                return CheckResult(
                    name="main-trace:positivity",
                    status=CheckStatus.FAILED,
                    message=f"tr(conj f * f) is {sign.value}",
                    reference=REFERENCES["main-trace"],
                    sample_count=count,
                    first_defect={"f": f.to_json(), "value": value.to_json()},
                )
    return CheckResult(
        name="main-trace:positivity",
        status=CheckStatus.PASSED,
        message=f"Positive on {count} samples",
        reference=REFERENCES["main-trace"],
        sample_count=count,
    )


def check_universal_group_axioms(actions: Sequence[ActionModel]) -> CheckResult:
    return combine_results(
        "group-axioms",
        REFERENCES["group-axioms"],
        [check_group_axioms(action) for action in actions],
    )


# -- the ax+b instance -------------------------------------------------------


def check_t_operator(T: TOperator, samples: Sequence[ExpPoly]) -> CheckResult:
    space = T.space
    one, ell, lam = space.one(), space.variable(T.variable), space.lam()
    fixed = [
        (one, one),
        (ell, ell),
        (ell * ell, ell * ell - lam * lam * T.sign),
    ]
    expected = collect_defects(
        "t-operator:values",
        REFERENCES["t-operator"],
        fixed,
        lambda c: T(c[0]) - c[1],
        lambda c: c[0].to_json(),
    )

    def defect(f: ExpPoly) -> List[Any]:
        image = T(f)
        out: List[Any] = [
            T.inverse(image) - f.truncate(T.order),
            T(T.inverse(f)) - f.truncate(T.order),
            [k for k in image.lambda_exponents() if k % 2],
        ]
        if f.is_real():
            out.append(image - image.conjugate())
        if not f.depends_on(T.variable):
            out.append(image - f.truncate(T.order))
        return out

    structural = collect_defects(
        "t-operator:structure",
        REFERENCES["t-operator"],
        samples,
        defect,
        lambda f: f.to_json(),
    )
    result = combine_results(
        "t-operator", REFERENCES["t-operator"], [expected, structural]
    )
    result.details["sign"] = T.sign
    result.details["order"] = T.order
    return result


def check_bm_associativity(
    star: BMProduct, samples: Sequence[ExpPoly], count: int, seed: int
) -> CheckResult:
    """Associativity, unit, Hermiticity and the lambda^1 commutator."""
    space = star.group.space
    pairs = pick([(f, g) for f in samples for g in samples], count, seed)
    triples = pick(list(itertools.product(samples, repeat=3)), count, seed)
    assoc = collect_defects(
        "bm-assoc:associativity",
        REFERENCES["bm-assoc"],
        triples,
        lambda t: star(star(t[0], t[1]), t[2]) - star(t[0], star(t[1], t[2])),
        _json,
    )
    one = space.one()

    def pair_defect(pair: Tuple[ExpPoly, ExpPoly]) -> List[ExpPoly]:
        f, g = pair
        bracket = poisson_exp(f, g, star.group.darboux) * (-I_UNIT)
        return [
            star(one, f) - f.truncate(star.order),
            star(f, one) - f.truncate(star.order),
            star(f, g).conjugate() - star(g.conjugate(), f.conjugate()),
            star.commutator(f, g).lambda_coefficient(1) - bracket,
        ]

    identities = collect_defects(
        "bm-assoc:unit-hermitian-bracket",
        REFERENCES["bm-assoc"],
        pairs,
        pair_defect,
        _json,
    )
    return combine_results("bm-assoc", REFERENCES["bm-assoc"], [assoc, identities])


def check_inner_derivation(group: GroupModel, T: TOperator) -> CheckResult:
    """Hamiltonians for every right-invariant frame field, then the brackets."""
    pairs = group.darboux
    frame = group.right_invariant_frame()
    certificates = []
    zero_field = VectorField(
        group.space, {c: group.space.zero() for c in group.coordinates}
    )
    try:
        for field in [zero_field] + frame:
            certificates.append(solve_inner_derivation(field, T, pairs))
    except NoSolution as e:
        logger.info(f"No Hamiltonian: {e}")
        return CheckResult(
            name="inner-derivation",
            status=CheckStatus.FAILED,
            message=str(e),
            reference=REFERENCES["inner-derivation"],
            sample_count=len(certificates),
            first_defect=e.to_json(),
            details={"sign": T.sign, "order": T.order},
        )
    trivial = certificates[0].hamiltonian
    hamiltonians = [c.hamiltonian for c in certificates[1:]]
    compatibility = collect_defects(
        "inner-derivation",
        REFERENCES["inner-derivation"],
        [hamiltonians],
        lambda hs: bracket_compatibility(group, hs, T.order)
        + [trivial.diff(c) for c in group.coordinates],
        lambda hs: [h.to_json() for h in hs],
    )
    compatibility.sample_count += sum(c.test_count for c in certificates)
    compatibility.details = {
        "sign": T.sign,
        "order": T.order,
        "hamiltonians": [h.to_json() for h in hamiltonians],
    }
    return compatibility


def check_bm_trace(
    star: BMProduct, samples: Sequence[ExpPoly], count: int, seed: int
) -> CheckResult:
    """Trace property on polynomial-times-Gaussian commutators, then positivity."""
    space = star.group.space
    T = star.T
    coordinates = list(star.group.coordinates)
    weighted = [f.damped(coordinates) for f in monomials_in(space, coordinates, 2)]
    pairs = pick([(f, g) for f in samples for g in weighted], count, seed)
    commutators = collect_defects(
        "bm-trace:commutator",
        REFERENCES["bm-trace"],
        pairs,
        lambda p: trace_bm(star.commutator(p[0], p[1]), T),
        _json,
    )
    gaussian_unit = space.variable("sqrt2pi") ** 2
    unit = collect_defects(
        "bm-trace:unit",
        REFERENCES["bm-trace"],
        [space.one().damped(coordinates)],
        lambda g: trace_bm(g, T) - gaussian_unit.scalar(),
        lambda g: g.to_json(),
    )
    ell = space.variable("l")
    bases = [space.one(), ell, space.exp("a"), space.exp("a") + ell * I_UNIT]
    positive = [b.damped(coordinates, kappa=QQ(1, 2)) for b in bases]
    count_positive = 0
    failure = None
    for f in positive:
        count_positive += 1
        value = trace_bm(star(f.conjugate(), f), T)
        sign = series_sign(value)
        if sign != SeriesSign.POSITIVE:
            failure = CheckResult(
                name="bm-trace:positivity",
                status=CheckStatus.FAILED,
                message=f"tr(conj f * f) is {sign.value}",
                reference=REFERENCES["bm-trace"],
                sample_count=count_positive,
                first_defect={"f": f.to_json(), "value": value.to_json()},
            )
            break
    positivity = failure or CheckResult(
        name="bm-trace:positivity",
        status=CheckStatus.PASSED,
        message=f"Positive on {count_positive} samples",
        reference=REFERENCES["bm-trace"],
        sample_count=count_positive,
    )
    return combine_results(
        "bm-trace", REFERENCES["bm-trace"], [commutators, unit, positivity]
    )
