"""Unit tests for polynomials on g*, the Poisson bracket and integrators."""

import pytest
from sympy.polys.domains import QQ

from src.core.exact import SymbolicScalar
from src.lie.catalog import catalog
from src.poisson.brackets import homogeneity_defect, poisson_bracket
from src.poisson.harmonic import harmonic_decompose, radial_square
from src.poisson.integrals import (
    GaussPoly,
    gaussian_integral,
    sphere_average,
)
from src.poisson.polynomial import (
    PoissonPolyError,
    PolyG,
    WrongDimension,
    monomials_up_to,
)
from src.poisson.samples import sample_pairs, sample_polynomials


@pytest.fixture
def su2():
    return catalog("su2")


class TestPolyG:
    """Test cases for the polynomial type."""

    def test_parse_nu(self, su2):
        """Test nu is stored as i*lam."""
        f = PolyG.parse(su2, "nu*xi3")
        assert f == PolyG.parse(su2, "I*lam*xi3")
        assert f.lambda_degree() == 1
        assert f.xi_degree() == 1

    def test_parse_error(self, su2):
        """Test unparsable input."""
        with pytest.raises(PoissonPolyError):
            PolyG.parse(su2, "xi1 +* xi2")

    def test_conjugate_flips_nu(self, su2):
        """Test nu-bar = -nu."""
        nu = PolyG.nu(su2)
        assert nu.conjugate() == -nu

    def test_conjugate_complex_coefficients(self, su2):
        """Test conjugation of coefficients with real and imaginary parts."""
        f = PolyG.parse(su2, "(1 + 2*I)*xi1*xi2 - I*r2/3")
        assert f.conjugate() == PolyG.parse(su2, "(1 - 2*I)*xi1*xi2 + I*r2/3")
        assert f.conjugate().conjugate() == f

    def test_truncate(self, su2):
        """Test lambda truncation."""
        f = PolyG.parse(su2, "xi1 + lam*xi2 + lam**3")
        assert f.truncate(1) == PolyG.parse(su2, "xi1 + lam*xi2")
        assert f.truncate(None) == f

    def test_json_round_trip(self, su2):
        """Test from_json inverts to_json."""
        f = PolyG.parse(su2, "xi1*xi2/3 - nu*r2 + 2")
        assert PolyG.from_json(su2, f.to_json()) == f

    def test_monomial_dimension_check(self, su2):
        """Test multi-index length against the dimension."""
        with pytest.raises(PoissonPolyError):
            PolyG.monomial(su2, (1, 0))

    def test_monomial_count(self):
        """Test C(n + d, d) monomials up to degree d."""
        assert len(monomials_up_to(3, 4)) == 35
        assert len(monomials_up_to(2, 2)) == 6

    def test_laplacian(self, su2):
        """Test the Laplacian of |xi|^2 in three variables."""
        assert radial_square(PolyG.one(su2)).laplacian() == 6


class TestPoissonBracket:
    """Test cases for the linear Poisson structure."""

    def test_coordinates(self, su2):
        """Test {xi1, xi2} = xi3."""
        x1, x2, x3 = (PolyG.coordinate(su2, i) for i in range(3))
        assert poisson_bracket(x1, x2) == x3
        assert poisson_bracket(x2, x3) == x1

    def test_casimir(self, su2):
        """Test |xi|^2 Poisson-commutes with everything on su2."""
        u = radial_square(PolyG.one(su2))
        for i in range(3):
            assert poisson_bracket(u, PolyG.coordinate(su2, i)).is_zero()

    def test_jacobi_on_samples(self, su2):
        """Test the Jacobi identity on sampled polynomials."""
        f, g, h = sample_polynomials(su2, 2, 3, seed=5)
        total = (
            poisson_bracket(f, poisson_bracket(g, h))
            + poisson_bracket(g, poisson_bracket(h, f))
            + poisson_bracket(h, poisson_bracket(f, g))
        )
        assert total.is_zero()

    def test_different_algebras(self, su2):
        """Test brackets across algebras are rejected."""
        with pytest.raises(PoissonPolyError):
            poisson_bracket(
                PolyG.one(su2), PolyG.one(catalog("heisenberg3"))
            )

    def test_pointwise_product_is_homogeneous(self, su2):
        """Test the Euler operator is a derivation of fg."""
        for f, g in sample_pairs(su2, 3, 10, seed=1):
            assert homogeneity_defect(lambda a, b: a * b, f, g).is_zero()


class TestHarmonic:
    """Test cases for the harmonic decomposition."""

    def test_square_coordinate(self, su2):
        """Test xi1^2 = u/3 + (xi1^2 - u/3)."""
        f = PolyG.parse(su2, "xi1**2")
        decomposition = harmonic_decompose(f)
        assert decomposition.components[(1, 0)] == PolyG.constant(
            su2, QQ(1, 3)
        )
        assert decomposition.components[(0, 2)] == PolyG.parse(
            su2, "xi1**2 - (xi1**2 + xi2**2 + xi3**2)/3"
        )
        assert decomposition.is_harmonic()

    def test_reassembles(self, su2):
        """Test every sample reassembles from its harmonic pieces."""
        for f in sample_polynomials(su2, 4, 6, seed=3):
            assert harmonic_decompose(f).reassemble(f) == f


class TestIntegrals:
    """Test cases for exact integrators."""

    def test_sphere_second_moment(self, su2):
        """Test the mean of xi1^2 over the sphere is r2/3."""
        value = sphere_average(PolyG.parse(su2, "xi1**2"))
        assert value == SymbolicScalar.unit("r2") * QQ(1, 3)

    def test_sphere_fourth_moment(self, su2):
        """Test the mean of xi1^2 xi2^2 is r2^2/15."""
        value = sphere_average(PolyG.parse(su2, "xi1**2*xi2**2"), 1)
        assert value == SymbolicScalar.constant(QQ(1, 15))

    def test_sphere_odd_moments_vanish(self, su2):
        """Test odd monomials average to zero."""
        assert sphere_average(PolyG.parse(su2, "xi1*xi2**2")).is_zero()

    def test_sphere_needs_dimension_three(self):
        """Test the sphere average dimension check."""
        with pytest.raises(WrongDimension):
            sphere_average(PolyG.one(catalog("aff1")))

    def test_gaussian_moments(self):
        """Test the fourth Gaussian moment is 3 sqrt(2 pi)."""
        line = catalog("abelian(1)")
        value = gaussian_integral(GaussPoly(PolyG.parse(line, "xi1**4")))
        assert value == SymbolicScalar.unit("sqrt2pi") * 3

    def test_gaussian_integral_of_derivative_vanishes(self):
        """Test integration by parts against the Gaussian weight."""
        plane = catalog("abelian(2)")
        f = GaussPoly(PolyG.parse(plane, "xi1**3*xi2**2 + xi1"))
        assert gaussian_integral(f.derivative(0)).is_zero()
