"""Unit tests for the on-disk table cache."""

import json
import tempfile
from pathlib import Path

import pytest

from src.core.cache import (
    CACHE_FORMAT,
    CacheIOError,
    TableCache,
    body_digest,
    entry_key,
)
from src.enveloping.pbw import enveloping_for, reset_tables
from src.lie.algebra import from_brackets
from src.lie.catalog import catalog
from src.poisson.polynomial import PolyG
from src.star.base import star_bch
from src.star.diffop import clear_operator_cache


@pytest.fixture(autouse=True)
def fresh_tables():
    reset_tables()
    clear_operator_cache()
    yield
    reset_tables()
    clear_operator_cache()


def sample_product(algebra):
    f = PolyG.parse(algebra, "xi1*xi2")
    g = PolyG.parse(algebra, "xi3*xi1")
    return star_bch(algebra, f, g)


def stored_entry(cache, algebra, degree):
    path = cache.store(algebra, degree)
    with open(path, "r", encoding="utf-8") as f:
        return path, json.load(f)


def rewrite(path, data, reseal=True):
    if reseal:
        data["digest"] = body_digest(data["tables"], data["operators"])
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True)


class TestTableCache:
    """Test cases for TableCache."""

    def test_store_and_load(self):
        """Test a stored entry warms a fresh table."""
        su2 = catalog("su2")
        enveloping_for(su2).star_coefficients((1, 1, 0), (0, 1, 1))
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            path = cache.store(su2, 2)
            assert path.exists()
            assert path.name == f"{entry_key(su2, 2)}.json"

            reset_tables()
            assert cache.load(su2, 2) > 0
            assert enveloping_for(su2).table_sizes()["star_coefficients"] > 0

    def test_warm_product_matches_fresh(self):
        """Test products computed from loaded tables equal fresh ones."""
        su2 = catalog("su2")
        fresh = sample_product(su2)
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            cache.store(su2, 2)
            reset_tables()
            assert cache.load(su2, 2) > 0
            assert sample_product(su2) == fresh

    def test_miss(self):
        """Test a missing entry loads nothing."""
        with tempfile.TemporaryDirectory() as directory:
            assert TableCache(directory).load(catalog("su2"), 3) == 0

    def test_corrupt_entry_is_ignored(self):
        """Test unreadable files fall back to recomputation."""
        su2 = catalog("su2")
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            cache.path(su2, 2).write_text("{not json", encoding="utf-8")
            assert cache.load(su2, 2) == 0

    def test_unknown_format_is_ignored(self):
        """Test entries from another format version are skipped."""
        su2 = catalog("su2")
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            with open(cache.path(su2, 2), "w", encoding="utf-8") as f:
                json.dump({"format": 99, "tables": {}}, f)
            assert cache.load(su2, 2) == 0

    def test_tampered_value_is_rejected(self):
        """Test an altered but well-formed value fails the digest check."""
        su2 = catalog("su2")
        fresh = sample_product(su2)
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            path, data = stored_entry(cache, su2, 2)
            rows = data["tables"]["star_coefficients"]
            assert rows
            rows[-1][2][0][1] = "99"
            rewrite(path, data, reseal=False)

            reset_tables()
            assert cache.load(su2, 2) == 0
            assert enveloping_for(su2).table_sizes()["star_coefficients"] == 0
            assert sample_product(su2) == fresh

    def test_malformed_row_publishes_nothing(self):
        """Test a bad row after good ones leaves the tables empty."""
        su2 = catalog("su2")
        sample_product(su2)
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            path, data = stored_entry(cache, su2, 2)
            data["tables"]["star_coefficients"].append([[1, 0, 0], [0, 1], []])
            rewrite(path, data)

            reset_tables()
            assert cache.load(su2, 2) == 0
            sizes = enveloping_for(su2).table_sizes()
            assert sizes == {
                "generator_times": 0,
                "symmetrized": 0,
                "star_coefficients": 0,
            }

    def test_malformed_tables_are_ignored(self):
        """Test rows that do not parse are logged and skipped."""
        su2 = catalog("su2")
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            payload = {
                "format": CACHE_FORMAT,
                "algebra": su2.key(),
                "degree": 2,
                "tables": {"symmetrized": [[[1, 0, 0], [["x", "y"]]]]},
                "operators": [],
            }
            rewrite(cache.path(su2, 2), payload)
            assert cache.load(su2, 2) == 0

    def test_stale_entry_is_ignored(self):
        """Test an entry recorded for another degree is not trusted."""
        su2 = catalog("su2")
        sample_product(su2)
        with tempfile.TemporaryDirectory() as directory:
            cache = TableCache(directory)
            path, data = stored_entry(cache, su2, 2)
            data["degree"] = 3
            rewrite(path, data)

            reset_tables()
            assert cache.load(su2, 2) == 0

    def test_key_ignores_names(self):
        """Test renamed algebras with equal constants share an entry."""
        renamed = from_brackets(
            {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}},
            3,
            "renamed",
            ["x", "y", "z"],
        )
        cache = TableCache("/tmp/unused")
        assert cache.path(renamed, 4) == cache.path(catalog("su2"), 4)
        assert cache.path(renamed, 4) != cache.path(renamed, 5)

    def test_unwritable_directory(self):
        """Test write failures raise CacheIOError."""
        with tempfile.NamedTemporaryFile() as f:
            cache = TableCache(Path(f.name) / "sub")
            with pytest.raises(CacheIOError):
                cache.store(catalog("su2"), 2)
