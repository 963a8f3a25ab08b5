"""Unit tests for exact scalars and formal series."""

import pytest
from sympy.polys.domains import QQ

from src.core.exact import (
    ExactArithmeticError,
    LambdaPoly,
    SeriesSign,
    SymbolicScalar,
    conjugate_gaussian,
    format_gaussian,
    gaussian,
    i_power,
    parse_gaussian,
    parse_rational,
    series_sign,
)


class TestRationals:
    """Test cases for rational and Gaussian-rational helpers."""

    def test_parse_rational(self):
        """Test p/q literals."""
        assert parse_rational("3/6") == QQ(1, 2)
        assert parse_rational("-4") == QQ(-4)
        assert parse_rational(7) == QQ(7)

    def test_parse_rational_rejects_floats(self):
        """Test that decimal literals are rejected."""
        with pytest.raises(ExactArithmeticError):
            parse_rational("0.5")

    def test_zero_denominator(self):
        """Test p/0 is rejected."""
        with pytest.raises(ExactArithmeticError):
            parse_rational("1/0")

    def test_gaussian_serialization(self):
        """Test the {re, im} form parses back."""
        value = gaussian(QQ(1, 3), -2)
        data = format_gaussian(value)
        assert data == {"re": "1/3", "im": "-2/1"}
        assert parse_gaussian(data) == value

    def test_i_power(self):
        """Test i^k cycles with period four."""
        assert i_power(2) == gaussian(-1)
        assert i_power(3) == gaussian(0, -1)
        assert i_power(-1) == gaussian(0, -1)

    def test_conjugate_gaussian(self):
        """Test conjugation flips the imaginary part only."""
        assert conjugate_gaussian(gaussian(QQ(1, 3), -2)) == gaussian(QQ(1, 3), 2)
        assert conjugate_gaussian(QQ(5, 7)) == gaussian(QQ(5, 7))


class TestLambdaPoly:
    """Test cases for truncated lambda series."""

    def test_truncated_product(self):
        """Test products keep the smaller order."""
        a = LambdaPoly.from_coefficients({0: 1, 1: 1}, order=2)
        b = LambdaPoly.from_coefficients({0: 1, 1: 1})
        product = a * b * b
        assert product.order == 2
        assert product.coefficients() == {
            0: gaussian(1),
            1: gaussian(3),
            2: gaussian(3),
        }

    def test_nu_squared(self):
        """Test nu^2 = -lambda^2."""
        nu = LambdaPoly.nu()
        assert nu * nu == LambdaPoly.from_coefficients({2: -1})

    def test_conjugate(self):
        """Test conjugation treats lambda as real."""
        assert LambdaPoly.nu().conjugate() == -LambdaPoly.nu()

    def test_conjugate_complex_coefficients(self):
        """Test conjugation of coefficients with both parts nonzero."""
        value = LambdaPoly.from_coefficients({0: gaussian(1, 2), 3: gaussian(0, -1)})
        assert value.conjugate() == LambdaPoly.from_coefficients(
            {0: gaussian(1, -2), 3: gaussian(0, 1)}
        )


class TestSeriesSign:
    """Test cases for the order of R[[lambda]]."""

    def test_lowest_coefficient_decides(self):
        """Test -lambda + 5 lambda^2 is negative."""
        value = LambdaPoly.from_coefficients({1: -1, 2: 5})
        assert series_sign(value) == SeriesSign.NEGATIVE

    def test_positive(self):
        """Test 2 - lambda is positive."""
        value = LambdaPoly.from_coefficients({0: 2, 1: -1})
        assert series_sign(value) == SeriesSign.POSITIVE

    def test_zero(self):
        """Test the zero series."""
        assert series_sign(LambdaPoly()) == SeriesSign.ZERO

    def test_non_real(self):
        """Test any imaginary coefficient makes the series non-real."""
        assert series_sign(LambdaPoly.nu()) == SeriesSign.NON_REAL

    def test_positive_units(self):
        """Test r2 and sqrt2pi count as positive."""
        value = SymbolicScalar.unit("r2") * SymbolicScalar.unit("sqrt2pi", 2)
        assert series_sign(value) == SeriesSign.POSITIVE

    def test_unsigned_unit_is_indefinite(self):
        """Test an unsigned unit makes the sign indefinite."""
        value = SymbolicScalar.unit("ap") + 1
        assert series_sign(value) == SeriesSign.INDEFINITE


class TestSymbolicScalar:
    """Test cases for scalars with symbolic units."""

    def test_exponentials_cancel(self):
        """Test E * Einv normalizes to one."""
        value = SymbolicScalar.unit("E") * SymbolicScalar.unit("Einv")
        assert value == 1

    def test_bind(self):
        """Test binding r2 to a rational."""
        value = SymbolicScalar.unit("r2") * QQ(1, 3)
        assert value.bind("r2", 3) == 1

    def test_conjugate(self):
        """Test conjugation keeps the units and conjugates coefficients."""
        value = SymbolicScalar.unit("r2") * gaussian(2, 3)
        assert value.conjugate() == SymbolicScalar.unit("r2") * gaussian(2, -3)

    def test_lambda_coefficients(self):
        """Test splitting on powers of lambda."""
        value = SymbolicScalar.unit("lam", 2) * 4 + SymbolicScalar.unit("r2")
        parts = value.lambda_coefficients()
        assert parts[2] == 4
        assert parts[0] == SymbolicScalar.unit("r2")

    def test_unknown_unit(self):
        """Test unknown unit names."""
        with pytest.raises(ExactArithmeticError):
            SymbolicScalar.unit("zeta")
