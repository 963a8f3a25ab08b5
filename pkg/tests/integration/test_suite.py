"""End-to-end suite runs through run_suite and the renderer."""

import json
import tempfile

import pytest

from src.core.checks import CheckStatus
from src.enveloping.pbw import reset_tables
from src.reports.renderer import render
from src.reports.suite import SuiteConfig, run_suite


def statuses(report):
    return {r.name: r.status for r in report.records}


@pytest.fixture(autouse=True)
def fresh_tables():
    reset_tables()
    yield
    reset_tables()


class TestStarSuite:
    """Suite runs over the star identities."""

    def test_su2_star_identities(self):
        """Test the BCH identities hold on su2."""
        config = SuiteConfig(
            identities=["assoc", "strong-inv", "homog", "covariance"],
            degree=3,
            sample_count=10,
        )
        report = run_suite(config)
        assert report.passed
        assert set(statuses(report).values()) == {CheckStatus.PASSED}

    def test_aff1_closedness_fails(self):
        """Test the non-unimodular algebra fails closedness."""
        config = SuiteConfig(
            algebra="aff1",
            identities=["closedness", "unimodular"],
            degree=2,
        )
        report = run_suite(config)
        found = statuses(report)
        assert found["closedness"] == CheckStatus.FAILED
        assert found["unimodular"] == CheckStatus.WARNING
        assert not report.passed

    def test_bch_only_identities_skip(self):
        """Test BCH-only identities are skipped for Moyal."""
        config = SuiteConfig(
            star="moyal", identities=["strong-inv", "assoc"], sample_count=5
        )
        found = statuses(run_suite(config))
        assert found["strong-inv"] == CheckStatus.SKIPPED
        assert found["assoc"] == CheckStatus.PASSED


class TestOrbitSuite:
    """Suite runs over the orbit identities."""

    def test_trace_and_positivity(self):
        """Test the orbit trace on the unit sphere."""
        config = SuiteConfig(
            identities=["trace", "positivity"],
            r2="1",
            order=4,
            class_degree=2,
            sample_count=10,
        )
        report = run_suite(config)
        found = statuses(report)
        assert found["trace"] == CheckStatus.PASSED
        assert found["positivity"] == CheckStatus.PASSED

    def test_orbit_skipped_without_reducer(self):
        """Test orbit identities skip on algebras without sphere orbits."""
        config = SuiteConfig(algebra="heisenberg3", identities=["koszul"])
        found = statuses(run_suite(config))
        assert found["koszul"] == CheckStatus.SKIPPED


class TestReports:
    """Rendered reports and the table cache."""

    def test_report_is_deterministic(self):
        """Test equal configurations render equal JSON."""
        config = SuiteConfig(identities=["assoc"], degree=3, sample_count=8)
        first = render(run_suite(config), "json")
        second = render(run_suite(config), "json")
        assert first == second
        data = json.loads(first)
        assert data["config"]["seed"] == 0
        assert "wall_time" not in data["records"][0]

    def test_cache_round_trip(self):
        """Test a second run reuses the stored tables with equal results."""
        with tempfile.TemporaryDirectory() as directory:
            config = SuiteConfig(
                identities=["assoc"],
                degree=3,
                sample_count=8,
                cache_directory=directory,
            )
            first = render(run_suite(config), "json")
            reset_tables()
            second = render(run_suite(config), "json")
            assert first == second
