"""Unit tests for the identity-check framework."""

from sympy.polys.domains import QQ

from src.core.checks import (
    CheckResult,
    CheckRunner,
    CheckStatus,
    FunctionCheck,
    collect_defects,
    combine_results,
    serialize,
    summarize,
)


def result(name, status):
    return CheckResult(name=name, status=status, message=status.value)


class TestCollectDefects:
    """Test cases for collect_defects."""

    def test_all_zero(self):
        """Test zero defects pass with a sample count."""
        outcome = collect_defects("zero", "0 = 0", [1, 2, 3], lambda s: 0)
        assert outcome.status == CheckStatus.PASSED
        assert outcome.sample_count == 3

    def test_first_defect_wins(self):
        """Test the first nonzero defect is reported."""
        outcome = collect_defects(
            "odd", "s is even", [2, 4, 5, 7], lambda s: s % 2
        )
        assert outcome.status == CheckStatus.FAILED
        assert outcome.sample_count == 3
        assert outcome.first_defect == {"sample": 5, "defect": 1}

    def test_nested_defects(self):
        """Test lists and dicts of defects are zero only when all parts are."""
        outcome = collect_defects(
            "nested", "", [[0, {"a": 0}], [0, {"a": 1}]], lambda s: s
        )
        assert outcome.status == CheckStatus.FAILED
        assert outcome.sample_count == 2


class TestSerialization:
    """Test cases for exact serialization."""

    def test_rationals(self):
        """Test rationals serialize as p/q strings."""
        assert serialize({"x": QQ(3, 4), "y": [1, None]}) == {
            "x": "3/4",
            "y": [1, None],
        }

    def test_timings_are_optional(self):
        """Test wall times only appear on request."""
        record = result("a", CheckStatus.PASSED)
        record.wall_time = 0.25
        assert "wall_time" not in record.to_json()
        assert record.to_json(include_timings=True)["wall_time"] == 0.25


class TestRunner:
    """Test cases for CheckRunner."""

    def test_sorted_records(self):
        """Test records come back sorted by name."""
        checks = [
            FunctionCheck(n, lambda n=n: result(n, CheckStatus.PASSED))
            for n in ("b", "c", "a")
        ]
        records = CheckRunner(checks, workers=2).run_all()
        assert [r.name for r in records] == ["a", "b", "c"]
        assert all(r.wall_time is not None for r in records)

    def test_exception_becomes_failure(self):
        """Test a raising check is recorded as FAILED."""

        def broken():
            raise ZeroDivisionError("division by zero")

        records = CheckRunner([FunctionCheck("broken", broken)]).run_all()
        assert records[0].status == CheckStatus.FAILED
        assert "ZeroDivisionError" in records[0].message

    def test_warnings_do_not_fail(self):
        """Test only FAILED records make a run fail."""
        records = [
            result("a", CheckStatus.PASSED),
            result("b", CheckStatus.WARNING),
            result("c", CheckStatus.SKIPPED),
        ]
        assert CheckRunner.all_passed(records)
        assert summarize(records) == (3, 0)
        records.append(result("d", CheckStatus.FAILED))
        assert not CheckRunner.all_passed(records)
        assert summarize(records) == (3, 1)


class TestCombineResults:
    """Test cases for combine_results."""

    def test_failure_wins(self):
        """Test the first failure is carried over."""
        combined = combine_results(
            "both",
            "",
            [
                result("x", CheckStatus.WARNING),
                result("y", CheckStatus.FAILED),
            ],
        )
        assert combined.status == CheckStatus.FAILED
        assert combined.message.startswith("y:")

    def test_warning_kept(self):
        """Test a warning survives when nothing fails."""
        combined = combine_results(
            "both",
            "",
            [
                result("x", CheckStatus.PASSED),
                result("y", CheckStatus.WARNING),
            ],
        )
        assert combined.status == CheckStatus.WARNING
        assert len(combined.details["parts"]) == 2
