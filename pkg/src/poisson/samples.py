"""Deterministic sample sets for identity checks.

Samples are drawn by seeded enumeration of monomials so that a failing
sample is a minimal witness.
"""

import random
from typing import List, Sequence, Tuple

from src.core.exact import gaussian
from src.lie.algebra import LieAlgebra
from src.poisson.polynomial import PolyG, monomials_up_to


def monomial_samples(algebra: LieAlgebra, degree: int) -> List[PolyG]:
    """Every monomial of degree <= degree, in enumeration order."""
    return [PolyG.monomial(algebra, m) for m in monomials_up_to(algebra.dim, degree)]


def _pick(population: Sequence, count: int, seed: int) -> List:
    if count >= len(population):
        return list(population)
    rng = random.Random(seed)
    chosen = sorted(rng.sample(range(len(population)), count))
    return [population[i] for i in chosen]


def sample_pairs(
    algebra: LieAlgebra, degree: int, count: int, seed: int
) -> List[Tuple[PolyG, PolyG]]:
    """Monomial pairs of total degree <= degree."""
    monos = monomials_up_to(algebra.dim, degree)
    pairs = [(a, b) for a in monos for b in monos if sum(a) + sum(b) <= degree]
    return [
        (PolyG.monomial(algebra, a), PolyG.monomial(algebra, b))
        for a, b in _pick(pairs, count, seed)
    ]


def sample_triples(
    algebra: LieAlgebra, degree: int, count: int, seed: int
) -> List[Tuple[PolyG, PolyG, PolyG]]:
    """Monomial triples of total degree <= degree."""
    monos = monomials_up_to(algebra.dim, degree)
    triples = [
        (a, b, c)
        for a in monos
        for b in monos
        if sum(a) + sum(b) <= degree
        for c in monos
        if sum(a) + sum(b) + sum(c) <= degree
    ]
    return [
        tuple(PolyG.monomial(algebra, m) for m in t)  # type: ignore[misc]
        for t in _pick(triples, count, seed)
    ]


def sample_polynomials(
    algebra: LieAlgebra, degree: int, count: int, seed: int
) -> List[PolyG]:
    """Two-term polynomials with small Gaussian-integer coefficients."""
    rng = random.Random(seed)
    monos = monomials_up_to(algebra.dim, degree)
    out = []
    for _ in range(count):
        a, b = rng.choice(monos), rng.choice(monos)
        ca = gaussian(rng.randint(-3, 3) or 1, rng.randint(-2, 2))
        cb = gaussian(rng.randint(-3, 3), rng.randint(-2, 2))
        out.append(
            PolyG.monomial(algebra, a, ca) + PolyG.monomial(algebra, b, cb)
        )
    return out
