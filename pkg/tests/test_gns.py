"""Unit tests for the GNS representation of the orbit trace."""

import pytest
from sympy.polys.domains import QQ

from src.core.checks import CheckStatus
from src.core.exact import SymbolicScalar
from src.gns import verification as checks
from src.gns.representation import (
    DegreeBudgetExceeded,
    GNSError,
    GNSRepresentation,
    OrbitOperator,
)
from src.lie.catalog import catalog
from src.orbit.reduction import OrbitReducer, parse_radius
from src.poisson.polynomial import PolyG


@pytest.fixture
def su2():
    return catalog("su2")


@pytest.fixture
def gns(su2):
    return GNSRepresentation(OrbitReducer(su2, parse_radius("1"), order=4))


class TestPreHilbertSpace:
    """Test cases for vectors and the inner product."""

    def test_cyclic_vector_is_normalized(self, gns):
        """Test <1, 1> = 1."""
        assert gns.inner(gns.cyclic_vector, gns.cyclic_vector) == 1

    def test_linear_vector_norm(self, su2):
        """Test <psi_xi1, psi_xi1> = r2/3 on a symbolic sphere."""
        reducer = OrbitReducer(su2, parse_radius("symbolic"), order=4)
        gns = GNSRepresentation(reducer)
        v = gns.vector(PolyG.coordinate(su2, 0))
        norm = gns.inner(v, v)
        assert norm.lambda_coefficient(0) == SymbolicScalar.unit("r2") * QQ(
            1, 3
        )

    def test_inner_product_is_hermitian(self, su2, gns):
        """Test <phi, chi> = conj <chi, phi>."""
        phi = gns.vector(PolyG.parse(su2, "xi1 + I*xi2"))
        chi = gns.vector(PolyG.parse(su2, "xi3**2"))
        assert gns.inner(phi, chi).conjugate() == gns.inner(chi, phi)

    def test_gelfand_ideal(self, su2, gns):
        """Test the Casimir ideal is null and xi1 is not."""
        assert gns.gelfand_ideal_check(gns.reducer.J)
        assert not gns.gelfand_ideal_check(PolyG.coordinate(su2, 0))


class TestOperators:
    """Test cases for orbit operators."""

    def test_budget(self, su2):
        """Test applications beyond the degree budget are refused."""
        gns = GNSRepresentation(
            OrbitReducer(su2, parse_radius("1"), order=4), budget=2
        )
        phi = gns.vector(PolyG.coordinate(su2, 0))
        with pytest.raises(DegreeBudgetExceeded) as exc_info:
            gns.pi(PolyG.parse(su2, "xi2**2"))(phi)

        assert "budget 2" in str(exc_info.value)

    def test_pi_on_cyclic_vector(self, su2, gns):
        """Test pi(f) applied to the cyclic vector is psi_f."""
        f = PolyG.parse(su2, "xi1*xi2 + xi3")
        assert gns.pi(f)(gns.cyclic_vector) == gns.vector(f)

    def test_modular_is_antilinear(self, su2, gns):
        """Test the modular conjugation and its square."""
        modular = gns.modular()
        assert modular.antilinear
        assert not (modular @ modular).antilinear
        phi = gns.vector(PolyG.parse(su2, "I*xi1 + xi2"))
        assert modular(phi) == gns.vector(PolyG.parse(su2, "-I*xi1 + xi2"))
        assert (modular @ modular)(phi) == phi

    def test_modular_is_anti_unitary(self, su2, gns):
        """Test <J phi, J chi> = <chi, phi>."""
        modular = gns.modular()
        vectors = gns.reducer.harmonic_classes(1)
        vectors.append(gns.vector(PolyG.parse(su2, "I*xi1 + xi2*xi3")))
        for phi in vectors:
            for chi in vectors:
                assert gns.inner(modular(phi), modular(chi)) == gns.inner(chi, phi)

    def test_unknown_kind(self, gns):
        """Test operator kinds are validated."""
        with pytest.raises(GNSError):
            OrbitOperator("adjoint", gns)


class TestGNSChecks:
    """Test cases for the GNS identity checks."""

    def test_homomorphism(self, gns):
        """Test pi(f*g) = pi(f) pi(g)."""
        result = checks.check_homomorphism(gns, 1, 1)
        assert result.status == CheckStatus.PASSED

    def test_star_representation(self, gns):
        """Test pi(conj f) is the adjoint of pi(f)."""
        result = checks.check_star_representation(gns, 1, 1)
        assert result.status == CheckStatus.PASSED

    def test_commutant(self, su2, gns):
        """Test left and right multiplications commute."""
        polys = [PolyG.coordinate(su2, 0), PolyG.parse(su2, "xi2*xi3")]
        result = checks.check_commutant(gns, polys, 1)
        assert result.status == CheckStatus.PASSED

    def test_g_relations(self, su2, gns):
        """Test the su2 relations of pi, R and L."""
        result = checks.check_g_relations(gns, su2, 1)
        assert result.status == CheckStatus.PASSED

    def test_unitarity(self, gns):
        """Test L_x is skew-adjoint."""
        result = checks.check_unitarity(gns, 1)
        assert result.status == CheckStatus.PASSED
