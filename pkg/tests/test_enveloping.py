"""Unit tests for PBW straightening and symmetrization."""

import pytest
from sympy.polys.domains import QQ

from src.enveloping.pbw import (
    EnvelopingError,
    enveloping_for,
    reset_tables,
)
from src.lie.catalog import catalog


@pytest.fixture(autouse=True)
def fresh_tables():
    reset_tables()
    yield
    reset_tables()


class TestStraightening:
    """Test cases for products of PBW monomials."""

    def test_su2_reordering(self):
        """Test e2 e1 = e1 e2 - e3."""
        store = enveloping_for(catalog("su2"))
        assert store.monomial_product((0, 1, 0), (1, 0, 0)) == {
            (1, 1, 0): 1,
            (0, 0, 1): -1,
        }

    def test_heisenberg_reordering(self):
        """Test e2 (e1 e3) = e1 e2 e3 - e3^2."""
        store = enveloping_for(catalog("heisenberg3"))
        assert store.monomial_product((0, 1, 0), (1, 0, 1)) == {
            (1, 1, 1): 1,
            (0, 0, 2): -1,
        }

    def test_ordered_product_is_concatenation(self):
        """Test e1 e2 needs no straightening."""
        store = enveloping_for(catalog("su2"))
        assert store.monomial_product((1, 0, 0), (0, 1, 0)) == {(1, 1, 0): 1}

    def test_abelian_is_commutative(self):
        """Test the symmetric algebra of an abelian algebra."""
        store = enveloping_for(catalog("abelian(2)"))
        assert store.monomial_product((0, 2), (1, 1)) == {(1, 3): 1}

    def test_associativity(self):
        """Test (e^a e^b) e^c = e^a (e^b e^c) on sl2."""
        store = enveloping_for(catalog("sl2"))
        a, b, c = (0, 1, 1), (1, 0, 1), (2, 1, 0)

        def times(left, right):
            out = {}
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    for m, v in store.monomial_product(m1, m2).items():
                        out[m] = out.get(m, QQ(0)) + c1 * c2 * v
            return {m: v for m, v in out.items() if v}

        ab = store.monomial_product(a, b)
        bc = store.monomial_product(b, c)
        assert times(ab, {c: QQ(1)}) == times({a: QQ(1)}, bc)


class TestSymmetrization:
    """Test cases for the symmetrization map."""

    def test_symmetrized_pair(self):
        """Test S(e1 e2) = e1 e2 - e3/2 on su2."""
        store = enveloping_for(catalog("su2"))
        assert store.symmetrized((1, 1, 0)) == {
            (1, 1, 0): 1,
            (0, 0, 1): QQ(-1, 2),
        }

    def test_symmetric_coordinates_invert(self):
        """Test coordinates of S(beta) are the unit vector at beta."""
        store = enveloping_for(catalog("su2"))
        for beta in [(2, 1, 0), (1, 1, 1), (0, 3, 0)]:
            assert store.symmetric_coordinates(store.symmetrized(beta)) == {
                beta: 1
            }

    def test_star_coefficients(self):
        """Test S(e1) S(e2) = S(e1 e2) + e3/2."""
        store = enveloping_for(catalog("su2"))
        assert store.star_coefficients((1, 0, 0), (0, 1, 0)) == {
            (1, 1, 0): 1,
            (0, 0, 1): QQ(1, 2),
        }


class TestTablePersistence:
    """Test cases for exporting and importing tables."""

    def test_export_import(self):
        """Test imported tables reproduce the products."""
        su2 = catalog("su2")
        store = enveloping_for(su2)
        expected = store.star_coefficients((1, 1, 0), (0, 1, 1))
        payload = store.export_tables()

        reset_tables()
        fresh = enveloping_for(su2)
        assert fresh.import_tables(payload) > 0
        assert fresh.table_sizes()["star_coefficients"] > 0
        assert fresh.star_coefficients((1, 1, 0), (0, 1, 1)) == expected

    def test_degree_filter(self):
        """Test export keeps only entries within the degree bound."""
        store = enveloping_for(catalog("su2"))
        store.symmetrized((2, 1, 1))
        payload = store.export_tables(max_degree=2)
        assert all(sum(alpha) <= 2 for alpha, _ in payload["symmetrized"])

    def test_malformed_payload(self):
        """Test malformed rows raise EnvelopingError."""
        store = enveloping_for(catalog("su2"))
        with pytest.raises(EnvelopingError):
            store.import_tables({"symmetrized": [[[1, 0, 0], [["x", "y"]]]]})

    def test_partial_payload_publishes_nothing(self):
        """Test a bad row after good ones leaves the tables untouched."""
        su2 = catalog("su2")
        store = enveloping_for(su2)
        store.star_coefficients((1, 1, 0), (0, 1, 1))
        payload = store.export_tables()
        payload["symmetrized"].append([[1, 0], [[[1, 0], "1/1"]]])

        reset_tables()
        fresh = enveloping_for(su2)
        with pytest.raises(EnvelopingError) as exc_info:
            fresh.import_tables(payload)
        assert "dimension 3" in str(exc_info.value)
        assert sum(fresh.table_sizes().values()) == 0
