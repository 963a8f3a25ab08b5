"""Unit tests for universal deformations and the ax+b instance."""

import pytest

from src.core.checks import CheckStatus
from src.core.exact import I_UNIT
from src.universal import verification as checks
from src.universal.axb import (
    BMProduct,
    TOperator,
    trace_bm,
)
from src.universal.deformation import MoyalGroupProduct, star_X
from src.universal.expoly import (
    ClassViolation,
    antiderivative,
    gaussian_moment,
    integrate,
)
from src.universal.groups import (
    GroupModelError,
    axb2d,
    check_group_axioms,
    translations,
)


@pytest.fixture
def axb():
    return axb2d(2)


@pytest.fixture
def plane():
    return translations(1)


class TestExpPoly:
    """Test cases for weighted exponential polynomials."""

    def test_gaussian_moments(self):
        """Test normalized moments of e^(mt) t^k against the Gaussian."""
        assert gaussian_moment(0, 4) == 3
        assert gaussian_moment(0, 3) == 0
        assert gaussian_moment(2, 2) == 5

    def test_integrate_unit_weight(self, plane):
        """Test the weight alone integrates to 2 pi."""
        space = plane.space
        weight = space.one().damped(["q1", "p1"])
        assert integrate(weight, ["q1", "p1"]) == (
            space.variable("sqrt2pi") ** 2
        )

    def test_integrate_needs_weight(self, plane):
        """Test polynomials without a weight are not integrable."""
        with pytest.raises(ClassViolation):
            integrate(plane.space.variable("q1"), ["q1"])

    def test_double_weight(self, plane):
        """Test a weight cannot be attached twice."""
        weighted = plane.space.one().damped(["q1"])
        with pytest.raises(ClassViolation):
            weighted.damped(["p1"])

    def test_antiderivative(self, axb):
        """Test d/da of the primitive of a e^a is a e^a."""
        space = axb.space
        f = space.variable("a") * space.exp("a")
        assert antiderivative(f, "a").diff("a") == f


class TestGroupModels:
    """Test cases for the group and action catalog."""

    @pytest.mark.parametrize(
        "action",
        [translations(1), translations(2), translations(1, 1), axb2d(1), axb2d(2)],
        ids=lambda a: a.name,
    )
    def test_axioms(self, action):
        """Test group and action axioms at generic elements."""
        assert check_group_axioms(action).status == CheckStatus.PASSED

    def test_invalid_translations(self):
        """Test translation models need n >= 1."""
        with pytest.raises(GroupModelError):
            translations(0)

    def test_invalid_scaling(self):
        """Test only scalings 1 and 2 exist."""
        with pytest.raises(GroupModelError) as exc_info:
            axb2d(3)

        assert "scaling" in str(exc_info.value)

    def test_spectators_are_orbit_constant(self):
        """Test spectator coordinates are untouched by the action."""
        action = translations(1, 1)
        assert action.is_orbit_constant(action.space.variable("s1"))
        assert not action.is_orbit_constant(action.space.variable("xq1"))


class TestUniversalDeformation:
    """Test cases for products induced through an action."""

    def test_moyal_commutator(self, plane):
        """Test q * p - p * q = -i lam for the group product."""
        space = plane.space
        star = MoyalGroupProduct(plane.group, 2)
        q, p = space.variable("q1"), space.variable("p1")
        assert star.commutator(q, p) == space.lam() * (-I_UNIT)

    def test_induced_commutator(self, plane):
        """Test the induced product on X has the canonical commutator."""
        space = plane.space
        star = MoyalGroupProduct(plane.group, 2)
        xq, xp = space.variable("xq1"), space.variable("xp1")
        commutator = star_X(star, plane, xq, xp) - star_X(star, plane, xp, xq)
        assert commutator == space.lam() * (-I_UNIT)

    def test_moyal_recovery(self):
        """Test translations induce the Moyal product on the plane."""
        result = checks.check_moyal_recovery(3, 20, seed=0)
        assert result.status == CheckStatus.PASSED

    def test_ralpha(self, plane):
        """Test alpha intertwines translations and the action."""
        result = checks.check_ralpha(plane, 2, 6, seed=1)
        assert result.status == CheckStatus.PASSED

    def test_associativity(self, plane):
        """Test the induced product is associative."""
        star = MoyalGroupProduct(plane.group, 2)
        result = checks.check_starx_associativity(star, plane, 2, 10, seed=2)
        assert result.status == CheckStatus.PASSED

    def test_tangential(self):
        """Test orbit-constant factors multiply pointwise."""
        action = translations(1, 1)
        star = MoyalGroupProduct(action.group, 2)
        result = checks.check_tangential(star, action, 2)
        assert result.status == CheckStatus.PASSED

    def test_bi_invariance(self, plane):
        """Test Moyal on translations is bi-invariant."""
        space = plane.space
        star = MoyalGroupProduct(plane.group, 2)
        polys = checks.monomials_in(space, ("q1", "p1"), 2)
        samples = [(f, g) for f in polys for g in polys][:12]
        result = checks.check_bi_invariance(star, plane, samples)
        assert result.status == CheckStatus.PASSED
        assert result.details["left"] and result.details["right"]

    def test_main_trace(self, plane):
        """Test the induced traces on the translation instance."""
        result = checks.check_main_trace(plane, 2, 1, 6, seed=3)
        assert result.status == CheckStatus.PASSED


class TestTOperator:
    """Test cases for the ax+b intertwiner."""

    def test_default_sign(self, axb):
        """Test T(l^2) = l^2 + lam^2 with the default exponent sign."""
        space = axb.space
        ell, lam = space.variable("l"), space.lam()
        T = TOperator(space, "l", 4)
        assert T(ell * ell) == ell * ell + lam * lam

    def test_positive_sign(self, axb):
        """Test T(l^2) = l^2 - lam^2 for eps = +1."""
        space = axb.space
        ell, lam = space.variable("l"), space.lam()
        T = TOperator(space, "l", 4, sign=1)
        assert T(ell * ell) == ell * ell - lam * lam

    def test_inverse(self, axb):
        """Test T^-1 T = id through the truncation order."""
        space = axb.space
        T = TOperator(space, "l", 4)
        f = space.variable("l") ** 4 * space.exp("a")
        assert T.inverse(T(f)) == f

    def test_invalid_sign(self, axb):
        """Test the exponent sign is validated."""
        with pytest.raises(ValueError):
            TOperator(axb.space, "l", 4, sign=0)

    def test_structure(self, axb):
        """Test T is real, even and invertible on samples."""
        T = TOperator(axb.space, "l", 4)
        samples = checks.axb_samples(axb.space, 3, 1)
        result = checks.check_t_operator(T, samples)
        assert result.status == CheckStatus.PASSED


class TestInnerDerivations:
    """Test cases for the right-invariant frame as inner derivations."""

    def test_default_sign(self, axb):
        """Test every frame field has a Hamiltonian."""
        T = TOperator(axb.space, "l", 2)
        result = checks.check_inner_derivation(axb.group, T)
        assert result.status == CheckStatus.PASSED
        assert len(result.details["hamiltonians"]) == 2

    def test_positive_sign_is_obstructed(self, axb):
        """Test eps = +1 has an obstruction at lambda^2."""
        T = TOperator(axb.space, "l", 2, sign=1)
        result = checks.check_inner_derivation(axb.group, T)
        assert result.status == CheckStatus.FAILED
        assert result.first_defect["order"] == 2

    def test_scaling_one_is_obstructed(self):
        """Test the scaling-1 law has no certificate."""
        action = axb2d(1)
        T = TOperator(action.space, "l", 2)
        result = checks.check_inner_derivation(action.group, T)
        assert result.status == CheckStatus.FAILED


class TestBMProduct:
    """Test cases for the conjugated product on ax+b."""

    def test_requires_axb(self, plane):
        """Test the product is only defined on the ax+b model."""
        with pytest.raises(ClassViolation):
            BMProduct(plane.group, 2)

    def test_associativity(self, axb):
        """Test associativity, unit, Hermiticity and the bracket."""
        star = BMProduct(axb.group, 2)
        samples = checks.axb_samples(axb.space, 1, 1)
        result = checks.check_bm_associativity(star, samples, 10, seed=4)
        assert result.status == CheckStatus.PASSED

    def test_trace(self, axb):
        """Test int T(.) is a positive trace."""
        star = BMProduct(axb.group, 2)
        samples = checks.axb_samples(axb.space, 1, 1)
        result = checks.check_bm_trace(star, samples, 6, seed=5)
        assert result.status == CheckStatus.PASSED

    def test_trace_needs_weight(self, axb):
        """Test the trace rejects unweighted arguments."""
        T = TOperator(axb.space, "l", 2)
        with pytest.raises(ClassViolation):
            trace_bm(axb.space.variable("l"), T)
