"""Unit tests for suite selection and report rendering."""

import json

import pytest

from src.core.checks import CheckResult, CheckStatus
from src.core.config import Configuration, DEFAULT_SETTINGS
from src.reports.renderer import (
    TEXT_DEFECT_LIMIT,
    dumps,
    render,
    render_records_text,
)
from src.reports.suite import (
    IDENTITIES,
    Report,
    SuiteConfig,
    SuiteContext,
    SuiteError,
    identities_in,
    selected_identities,
)


LIMITS = {"max_dim": 16, "max_degree": 8, "max_order": 8, "max_bch_order": 5}


def sample_report(*statuses):
    records = [
        CheckResult(
            name=f"check-{i}",
            status=status,
            message=status.value.lower(),
            reference="a = b",
        )
        for i, status in enumerate(statuses)
    ]
    return Report(SuiteConfig(), records)


class TestIdentitySelection:
    """Test cases for identity names and groups."""

    def test_empty_selects_everything(self):
        """Test an empty selection runs every identity."""
        assert selected_identities([]) == list(IDENTITIES)

    def test_group_expansion(self):
        """Test group names expand without duplicates."""
        names = selected_identities(["assoc", "star"])
        assert names[0] == "assoc"
        assert names.count("assoc") == 1
        assert set(identities_in("star")) <= set(names)

    def test_unknown_identity(self):
        """Test unknown names are rejected."""
        with pytest.raises(SuiteError) as exc_info:
            selected_identities(["assoc", "frobenius"])

        assert "frobenius" in str(exc_info.value)

    def test_unknown_group(self):
        """Test unknown groups are rejected."""
        with pytest.raises(SuiteError):
            identities_in("physics")

    def test_groups_cover_registry(self):
        """Test every identity belongs to one group."""
        groups = ("algebra", "star", "orbit", "gns", "universal")
        names = [n for g in groups for n in identities_in(g)]
        assert sorted(names) == sorted(IDENTITIES)


class TestSuiteConfig:
    """Test cases for suite settings."""

    def test_from_bundled_settings(self):
        """Test the bundled settings build a valid suite."""
        suite = SuiteConfig.from_configuration(
            Configuration(str(DEFAULT_SETTINGS))
        )
        assert suite.algebra == "su2"
        assert suite.t_exponent_sign == -1
        assert suite.axb_scaling == 2

    def test_overrides(self):
        """Test explicit overrides win and None is ignored."""
        suite = SuiteConfig.from_configuration(
            Configuration(str(DEFAULT_SETTINGS)), degree=2, seed=None
        )
        assert suite.degree == 2
        assert suite.seed == 0

    def test_degree_limit(self):
        """Test degrees beyond the limit are rejected."""
        with pytest.raises(SuiteError):
            SuiteConfig(degree=9).validate(LIMITS)

    def test_order_limit(self):
        """Test orders beyond the limit are rejected."""
        with pytest.raises(SuiteError):
            SuiteConfig(bm_order=12).validate(LIMITS)

    def test_null_order_is_allowed(self):
        """Test a null order means no truncation."""
        SuiteConfig(order=None).validate(LIMITS)

    def test_json_omits_runtime_settings(self):
        """Test cache directory and worker count stay out of reports."""
        data = SuiteConfig(cache_directory="/tmp/x").to_json()
        assert "cache_directory" not in data
        assert "workers" not in data


class TestSuiteContext:
    """Test cases for lazily built suite inputs."""

    def test_no_reducer_for_aff1(self):
        """Test algebras without sphere orbits have no reducer."""
        ctx = SuiteContext(SuiteConfig(algebra="aff1"))
        assert ctx.reducer() is None
        assert ctx.gns() is None

    def test_t_operator_follows_sign(self):
        """Test the configured exponent sign reaches T."""
        ctx = SuiteContext(SuiteConfig(t_exponent_sign=1, bm_order=2))
        T = ctx.t_operator()
        assert T.sign == 1
        assert T.order == 2
        assert ctx.bm_product().sign == 1


class TestRenderer:
    """Test cases for report rendering."""

    def test_json_is_deterministic(self):
        """Test sorted keys and a trailing newline."""
        text = dumps({"b": 1, "a": [1, 2]})
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')

    def test_json_report(self):
        """Test the JSON form carries counts and records."""
        report = sample_report(CheckStatus.PASSED, CheckStatus.WARNING)
        data = json.loads(render(report, "json"))
        assert data["passed"] is True
        assert data["counts"]["WARNING"] == 1
        assert [r["name"] for r in data["records"]] == ["check-0", "check-1"]

    def test_text_success(self):
        """Test the text summary of a passing run."""
        report = sample_report(CheckStatus.PASSED, CheckStatus.SKIPPED)
        text = render(report, "text")
        assert text.startswith("Suite: su2 / bch")
        assert "✅ check-0: passed" in text
        assert "⏭️ check-1: skipped" in text
        assert "✅ All identities hold (1 passed, 1 skipped)" in text

    def test_text_failure(self):
        """Test the text summary of a failing run."""
        report = sample_report(CheckStatus.FAILED)
        text = render(report, "text")
        assert "❌ check-0: failed" in text
        assert "❌ Identity failures (1 failed)" in text

    def test_long_defects_are_cut(self):
        """Test the text view truncates long defects."""
        record = {
            "name": "assoc",
            "status": "FAILED",
            "message": "Nonzero defect on sample 1",
            "first_defect": {"defect": "x" * (2 * TEXT_DEFECT_LIMIT)},
        }
        lines = render_records_text([record])
        assert lines[1].startswith("   First defect: ")
        assert lines[1].endswith(" ...")

    def test_unknown_format(self):
        """Test unknown formats are rejected."""
        with pytest.raises(ValueError):
            render(sample_report(CheckStatus.PASSED), "xml")
