"""Unit tests for Lie algebras, the catalog, algebra files and BCH."""

import json
import os
import tempfile
import pytest
import yaml
from sympy.polys.domains import QQ

from src.lie.algebra import (
    AntisymmetryViolation,
    JacobiViolation,
    LieAlgebraError,
    adjoint_matrix,
    from_brackets,
    unimodular,
    validate,
    validation_report,
)
from src.lie.bch import bch_series, lyndon_words, specialize_bch
from src.lie.catalog import UnknownAlgebraError, catalog, direct_sum
from src.lie.loader import (
    AlgebraFileError,
    dump_algebra,
    load_algebra,
    resolve_algebra,
)


class TestValidation:
    """Test cases for structure-constant validation."""

    def test_su2_brackets(self):
        """Test [e1, e2] = e3 and its antisymmetric partner."""
        su2 = catalog("su2")
        assert su2.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
        assert su2.bracket([0, 1, 0], [1, 0, 0]) == [0, 0, -1]
        assert su2.bracket([0, 1, 0], [0, 0, 1]) == [1, 0, 0]

    def test_antisymmetry_violation(self):
        """Test a one-sided bracket is rejected."""
        with pytest.raises(AntisymmetryViolation) as exc_info:
            validate({(0, 1, 2): 1}, 3)

        violation = exc_info.value.violations[0]
        assert violation.kind == "AntisymmetryViolation"
        assert violation.indices == (1, 2, 3)

    def test_jacobi_violation(self):
        """Test [e1,e2]=e2, [e1,e3]=e1, [e2,e3]=e1 fails Jacobi."""
        with pytest.raises(JacobiViolation):
            from_brackets(
                {(0, 1): {1: 1}, (0, 2): {0: 1}, (1, 2): {0: 1}}, 3
            )

    def test_validation_report_is_empty_for_valid_table(self):
        """Test no violations are listed for heisenberg3."""
        h3 = catalog("heisenberg3")
        assert validation_report(h3.constants, 3) == []

    def test_dimension_out_of_range(self):
        """Test dimension bounds."""
        with pytest.raises(LieAlgebraError):
            validate({}, 0)

    def test_key_ignores_names(self):
        """Test the key hashes the constants only."""
        su2 = catalog("su2")
        renamed = from_brackets(
            {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}},
            3,
            "renamed",
            ["x", "y", "z"],
        )
        assert su2.key() == renamed.key()
        assert su2 == renamed
        assert su2.key() != catalog("heisenberg3").key()

    def test_unimodularity(self):
        """Test aff1 is the non-unimodular catalog member."""
        assert unimodular(catalog("su2")).unimodular
        assert unimodular(catalog("heisenberg3")).unimodular
        result = unimodular(catalog("aff1"))
        assert not result.unimodular
        assert result.witness == 1
        assert result.value == QQ(-1)
        assert result.trace == QQ(1)

    def test_adjoint_matrix(self):
        """Test column j of ad(e1) holds [e1, e_j]."""
        ad = adjoint_matrix(catalog("su2"), [1, 0, 0])
        assert list(ad[:, 1]) == [0, 0, 1]
        assert list(ad[:, 2]) == [0, -1, 0]


class TestCatalog:
    """Test cases for the algebra catalog."""

    def test_aliases(self):
        """Test so3 is su2."""
        assert catalog("so3") == catalog("su2")

    def test_abelian(self):
        """Test abelian(n) has no brackets."""
        algebra = catalog("abelian(4)")
        assert algebra.dim == 4
        assert algebra.is_abelian()

    def test_direct_sum(self):
        """Test block-shifted constants of a direct sum."""
        algebra = catalog("direct_sum(su2, abelian(1))")
        assert algebra.dim == 4
        assert algebra.bracket([1, 0, 0, 0], [0, 1, 0, 0]) == [0, 0, 1, 0]
        assert algebra.bracket([0, 0, 0, 1], [1, 0, 0, 0]) == [0, 0, 0, 0]
        assert algebra == direct_sum(catalog("su2"), catalog("abelian(1)"))

    def test_unknown_name(self):
        """Test unknown catalog names."""
        with pytest.raises(UnknownAlgebraError) as exc_info:
            catalog("e8")

        assert "Unknown algebra" in str(exc_info.value)


class TestAlgebraFiles:
    """Test cases for JSON/YAML algebra files."""

    def test_yaml_round_trip(self):
        """Test a dumped algebra loads back equal."""
        with tempfile.NamedTemporaryFile(suffix=".yaml", delete=False) as f:
            path = f.name

        try:
            dump_algebra(catalog("sl2"), path)
            loaded = load_algebra(path)
            assert loaded == catalog("sl2")
            assert loaded.basis == ("h", "e", "f")
        finally:
            os.unlink(path)

    def test_json_file(self):
        """Test one-based brackets in a JSON file."""
        document = {
            "name": "h3",
            "dim": 3,
            "brackets": [{"i": 1, "j": 2, "k": 3, "value": "1"}],
        }
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".json", delete=False
        ) as f:
            json.dump(document, f)
            path = f.name

        try:
            assert resolve_algebra(path) == catalog("heisenberg3")
        finally:
            os.unlink(path)

    def test_rational_values(self):
        """Test string rationals in brackets."""
        document = {
            "dim": 2,
            "brackets": [{"i": 1, "j": 2, "k": 2, "value": "3/2"}],
        }
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".yaml", delete=False
        ) as f:
            yaml.dump(document, f)
            path = f.name

        try:
            algebra = load_algebra(path)
            assert algebra.constant(0, 1, 1) == QQ(3, 2)
        finally:
            os.unlink(path)

    def test_bracket_order_enforced(self):
        """Test entries must satisfy i < j."""
        document = {"dim": 2, "brackets": [{"i": 2, "j": 1, "k": 1}]}
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".yaml", delete=False
        ) as f:
            yaml.dump(document, f)
            path = f.name

        try:
            with pytest.raises(AlgebraFileError) as exc_info:
                load_algebra(path)

            assert "i < j" in str(exc_info.value)
        finally:
            os.unlink(path)

    def test_missing_file(self):
        """Test handling of a missing algebra file."""
        with pytest.raises(AlgebraFileError) as exc_info:
            load_algebra("/nonexistent/algebra.yaml")

        assert "not found" in str(exc_info.value)


class TestBCH:
    """Test cases for the BCH series on the Lyndon basis."""

    def test_low_order_coefficients(self):
        """Test X + Y + [X,Y]/2 + [X,[X,Y]]/12 + [[X,Y],Y]/12."""
        series = bch_series(3)
        assert series == {
            (0,): 1,
            (1,): 1,
            (0, 1): QQ(1, 2),
            (0, 0, 1): QQ(1, 12),
            (0, 1, 1): QQ(1, 12),
        }

    def test_lyndon_word_count(self):
        """Test the number of Lyndon words on two letters by length."""
        words = lyndon_words(2, 5)
        counts = [sum(1 for w in words if len(w) == n) for n in range(1, 6)]
        assert counts == [2, 1, 2, 3, 6]

    def test_su2_third_order(self):
        """Test H3(e1, e2) = ([e1,[e1,e2]] + [[e1,e2],e2]) / 12 on su2."""
        components = specialize_bch(catalog("su2"), [1, 0, 0], [0, 1, 0], 3)
        # [e1, e3] = -e2 and [e3, e2] = -e1
        assert components[3] == [QQ(-1, 12), QQ(-1, 12), 0]

    def test_heisenberg_truncates(self):
        """Test the series stops at order two on heisenberg3."""
        components = specialize_bch(catalog("heisenberg3"), [1, 0, 0], [0, 1, 0])
        assert components[1] == [1, 1, 0]
        assert components[2] == [0, 0, QQ(1, 2)]
        assert all(components[j] == [0, 0, 0] for j in range(3, 6))

    def test_commuting_arguments(self):
        """Test H(x, x) = 2x."""
        components = specialize_bch(catalog("su2"), [1, 2, 3], [1, 2, 3])
        assert components[1] == [2, 4, 6]
        assert all(components[j] == [0, 0, 0] for j in range(2, 6))
