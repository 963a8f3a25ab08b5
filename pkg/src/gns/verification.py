"""Identity checks for the GNS representation of the orbit trace."""

import logging
from typing import Any, List, Sequence, Tuple

from src.core.checks import CheckResult, collect_defects
from src.core.exact import I_UNIT
from src.gns.representation import GNSRepresentation
from src.lie.algebra import LieAlgebra
from src.orbit.reduction import OrbitFn
from src.poisson.polynomial import PolyG, unit_vector
from src.poisson.samples import monomial_samples


logger = logging.getLogger(__name__)

REFERENCES = {
    "gns-homomorphism": "pi(f*g) = pi(f) pi(g)",
    "gns-star": "<phi, pi(f) chi> = <pi(conj f) phi, chi> and the trace "
    "inner product is cyclic",
    "commutant": "J L_f J = R_conj(f), [L_f, R_g] = 0 and "
    "<J phi, J chi> = <chi, phi>",
    "g-relations": "[pi(x), pi(y)] = i lam pi([x,y]), [R_x, R_y] = "
    "-i lam R_[x,y], pi(x) - R_x = i lam L_x",
    "gns-unitary": "<L_x phi, chi> + <phi, L_x chi> = 0",
}


def _vectors(gns: GNSRepresentation, degree: int) -> List[OrbitFn]:
    return gns.reducer.harmonic_classes(degree)


def _json(sample: Tuple[Any, ...]) -> List[Any]:
    return [s.to_json() for s in sample]


def check_homomorphism(
    gns: GNSRepresentation, fdeg: int, vdeg: int
) -> CheckResult:
    algebra = gns.reducer.algebra
    polys = monomial_samples(algebra, fdeg)
    cases = [
        (f, g, phi)
        for f in polys
        for g in polys
        for phi in _vectors(gns, vdeg)
    ]
    star = gns.reducer.star

    def defect(case: Tuple[PolyG, PolyG, OrbitFn]) -> OrbitFn:
        f, g, phi = case
        return gns.pi(star(f, g))(phi) - gns.pi(f)(gns.pi(g)(phi))

    return collect_defects(
        "gns-homomorphism", REFERENCES["gns-homomorphism"], cases, defect, _json
    )


def check_star_representation(
    gns: GNSRepresentation, fdeg: int, vdeg: int
) -> CheckResult:
    algebra = gns.reducer.algebra
    vectors = _vectors(gns, vdeg)
    cases = [
        (f * I_UNIT + PolyG.one(algebra), phi, chi)
        for f in monomial_samples(algebra, fdeg)
        for phi in vectors
        for chi in vectors
    ]
    reducer = gns.reducer

    def defect(case: Tuple[PolyG, OrbitFn, OrbitFn]) -> List[Any]:
        f, phi, chi = case
        cyclic = reducer.orbit_trace(
            reducer.star_orbit(chi, phi.conjugate())
        )
        return [
            gns.inner(phi, gns.pi(f)(chi))
            - gns.inner(gns.pi(f.conjugate())(phi), chi),
            gns.inner(phi, chi) - cyclic,
            gns.inner(phi, chi).conjugate() - gns.inner(chi, phi),
        ]

    return collect_defects(
        "gns-star", REFERENCES["gns-star"], cases, defect, _json
    )


def check_commutant(
    gns: GNSRepresentation, fs: Sequence[PolyG], vdeg: int
) -> CheckResult:
    """J L_(i f) J = R_(i conj f), [L_(i f), R_(i g)] = 0 and J anti-unitary.

    Anti-unitarity, <J phi, J chi> = <chi, phi>, is checked on every pair of
    sample vectors.
    """
    reducer = gns.reducer
    vectors = _vectors(gns, vdeg)
    cases: List[Tuple[Any, ...]] = [
        ("commutant", f, g, phi) for f in fs for g in fs for phi in vectors
    ]
    cases += [("anti-unitary", phi, chi) for phi in vectors for chi in vectors]
    modular = gns.modular()

    def defect(case: Tuple[Any, ...]) -> List[Any]:
        if case[0] == "anti-unitary":
            _, phi, chi = case
            return [gns.inner(modular(phi), modular(chi)) - gns.inner(chi, phi)]
        _, f, g, phi = case
        a = reducer.deformed_restrict(f)
        b = reducer.deformed_restrict(g)
        left, right = gns.left(a), gns.right(b)
        conjugated = modular @ left @ modular
        return [
            conjugated(phi) - gns.right(a.conjugate())(phi),
            left(right(phi)) - right(left(phi)),
        ]

    return collect_defects(
        "commutant",
        REFERENCES["commutant"],
        cases,
        defect,
        lambda case: [case[0]] + _json(case[1:]),
    )


def check_g_relations(
    gns: GNSRepresentation, algebra: LieAlgebra, vdeg: int
) -> CheckResult:
    reducer = gns.reducer
    n = algebra.dim
    vectors = _vectors(gns, vdeg)
    cases = [(x, y, phi) for x in range(n) for y in range(n) for phi in vectors]
    nu = PolyG.nu(algebra)

    def defect(case: Tuple[int, int, OrbitFn]) -> List[Any]:
        x, y, phi = case
        xhat, yhat = PolyG.coordinate(algebra, x), PolyG.coordinate(algebra, y)
        bracket = PolyG.linear(
            algebra, algebra.bracket(unit_vector(n, x), unit_vector(n, y))
        )
        pi_x, pi_y = gns.pi(xhat), gns.pi(yhat)
        rx = gns.right(reducer.restrict(xhat))
        ry = gns.right(reducer.restrict(yhat))
        r_bracket = gns.right(reducer.restrict(bracket))
        return [
            pi_x(pi_y(phi)) - pi_y(pi_x(phi)) - gns.pi(bracket)(phi) * nu,
            rx(ry(phi)) - ry(rx(phi)) + r_bracket(phi) * nu,
            pi_x(phi) - rx(phi) - gns.lie(x)(phi) * nu,
        ]

    return collect_defects(
        "g-relations",
        REFERENCES["g-relations"],
        cases,
        defect,
        lambda c: {"x": c[0] + 1, "y": c[1] + 1, "phi": c[2].to_json()},
    )


def check_unitarity(gns: GNSRepresentation, vdeg: int) -> CheckResult:
    vectors = _vectors(gns, vdeg)
    n = gns.reducer.algebra.dim
    cases = [(x, phi, chi) for x in range(n) for phi in vectors for chi in vectors]

    def defect(case: Tuple[int, OrbitFn, OrbitFn]) -> Any:
        x, phi, chi = case
        lie = gns.lie(x)
        return gns.inner(lie(phi), chi) + gns.inner(phi, lie(chi))

    return collect_defects(
        "gns-unitary",
        REFERENCES["gns-unitary"],
        cases,
        defect,
        lambda c: {"x": c[0] + 1, "phi": c[1].to_json(), "chi": c[2].to_json()},
    )
