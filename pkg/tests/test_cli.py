"""Tests for the startrace command line."""

import json
import os
import tempfile

import pytest
import yaml

from src.core.config import DEFAULT_SETTINGS
from src.poisson.polynomial import PolyG
from src.startrace import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    main,
    parse_arguments,
)
from src.star.moyal import phase_space


def run(capsys, *argv):
    code = main([*argv, "--config", str(DEFAULT_SETTINGS)])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestArguments:
    """Test cases for argument parsing."""

    def test_subcommands_required(self):
        """Test a group without an action is rejected."""
        with pytest.raises(SystemExit):
            parse_arguments(["star"])

    def test_star_choices(self):
        """Test unknown products are rejected by the parser."""
        with pytest.raises(SystemExit):
            parse_arguments(["star", "verify", "--star", "kontsevich"])

    def test_options(self):
        """Test shared options on a subcommand."""
        args = parse_arguments(
            ["orbit", "trace", "xi1**2", "--r2", "1", "--order", "4"]
        )
        assert args.group == "orbit"
        assert args.action == "trace"
        assert args.polynomial == "xi1**2"
        assert args.r2 == "1"
        assert args.order == 4


class TestAlgebraCommands:
    """Test cases for the algebra subcommands."""

    def test_validate_catalog(self, capsys):
        """Test su2 validates and is unimodular."""
        code, out, _ = run(capsys, "algebra", "validate", "--algebra", "su2")
        assert code == EXIT_PASS
        statuses = [r["status"] for r in json.loads(out)["records"]]
        assert statuses == ["PASSED", "PASSED"]

    def test_validate_non_unimodular(self, capsys):
        """Test aff1 validates with a unimodularity warning."""
        code, out, _ = run(
            capsys, "algebra", "validate", "--algebra", "aff1", "--format", "text"
        )
        assert code == EXIT_PASS
        assert "⚠️ unimodular" in out
        assert "tr ad(e1) = 1" in out

    def test_validate_jacobi_failure(self, capsys):
        """Test an algebra file violating Jacobi exits 1."""
        document = {
            "dim": 3,
            "brackets": [
                {"i": 1, "j": 2, "k": 2},
                {"i": 1, "j": 3, "k": 1},
                {"i": 2, "j": 3, "k": 1},
            ],
        }
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".yaml", delete=False
        ) as f:
            yaml.dump(document, f)
            path = f.name

        try:
            code, out, _ = run(capsys, "algebra", "validate", "--algebra", path)
            assert code == EXIT_FAIL
            assert json.loads(out)["records"][0]["status"] == "FAILED"
        finally:
            os.unlink(path)

    def test_unknown_algebra(self, capsys):
        """Test unknown names are configuration errors."""
        code, _, err = run(capsys, "algebra", "info", "--algebra", "e8")
        assert code == EXIT_CONFIG
        assert "UnknownAlgebraError" in err

    def test_info(self, capsys):
        """Test the canonical algebra data."""
        code, out, _ = run(capsys, "algebra", "info", "--algebra", "heisenberg3")
        data = json.loads(out)
        assert code == EXIT_PASS
        assert data["unimodular"] is True
        assert data["abelian"] is False


class TestStarCommands:
    """Test cases for the star subcommands."""

    def test_mul(self, capsys):
        """Test xi1 * xi2 on su2."""
        code, out, _ = run(capsys, "star", "mul", "xi1", "xi2", "--algebra", "su2")
        assert code == EXIT_PASS
        assert json.loads(out)["star"] == "bch"

    def test_mul_moyal(self, capsys):
        """Test the Moyal product on Darboux coordinates."""
        products = []
        for left, right in (("q", "p"), ("p", "q")):
            code, out, _ = run(capsys, "star", "mul", left, right, "--star", "moyal")
            assert code == EXIT_PASS
            products.append(PolyG.from_json(phase_space(1), json.loads(out)["product"]))
        assert products[0] - products[1] == PolyG.parse(phase_space(1), "-I*lam")

    def test_parse_error(self, capsys):
        """Test unparsable polynomials are configuration errors."""
        code, _, err = run(capsys, "star", "mul", "xi1 +* xi2", "xi2")
        assert code == EXIT_CONFIG
        assert "PoissonPolyError" in err

    def test_table(self, capsys):
        """Test the table lists pairs with total degree <= the bound."""
        code, out, _ = run(
            capsys, "star", "table", "--algebra", "heisenberg3", "--degree", "1"
        )
        rows = json.loads(out)["table"]
        assert code == EXIT_PASS
        # 1x1, 1xe_i, e_ix1
        assert len(rows) == 7

    def test_verify_aff1_fails(self, capsys):
        """Test closedness fails on aff1 and the run exits 1."""
        code, out, _ = run(
            capsys,
            "star",
            "verify",
            "--algebra",
            "aff1",
            "--suite",
            "closedness",
            "--degree",
            "2",
        )
        records = json.loads(out)["records"]
        assert code == EXIT_FAIL
        assert records[0]["name"] == "closedness"
        assert records[0]["status"] == "FAILED"

    def test_verify_unknown_identity(self, capsys):
        """Test unknown identity names are configuration errors."""
        code, _, err = run(capsys, "star", "verify", "--suite", "frobenius")
        assert code == EXIT_CONFIG
        assert "SuiteError" in err


class TestOrbitCommands:
    """Test cases for the orbit subcommands."""

    def test_trace_text(self, capsys):
        """Test the trace of 1 at a rational radius."""
        code, out, _ = run(
            capsys, "orbit", "trace", "1", "--r2", "1", "--format", "text"
        )
        assert code == EXIT_PASS
        assert out.strip() == "1"

    def test_reduce(self, capsys):
        """Test the reduced form of the Casimir is zero."""
        code, out, _ = run(
            capsys,
            "orbit",
            "reduce",
            "xi1**2 + xi2**2 + xi3**2 - 1",
            "--r2",
            "1",
        )
        data = json.loads(out)
        assert code == EXIT_PASS
        assert data["restriction"]["r2"] == "1/1"

    def test_invalid_radius(self, capsys):
        """Test non-positive radii are configuration errors."""
        code, _, err = run(capsys, "orbit", "trace", "1", "--r2", "-2")
        assert code == EXIT_CONFIG
        assert "OrbitReductionError" in err

    def test_wrong_algebra(self, capsys):
        """Test reduction needs a sphere orbit."""
        code, _, _ = run(
            capsys, "orbit", "trace", "1", "--algebra", "heisenberg3"
        )
        assert code == EXIT_CONFIG


class TestConfiguration:
    """Test cases for configuration handling in the CLI."""

    def test_missing_config(self, capsys):
        """Test a missing config file exits 2."""
        code = main(["algebra", "info", "--config", "/nonexistent.yaml"])
        assert code == EXIT_CONFIG
        assert "Configuration error" in capsys.readouterr().err

    def test_degree_out_of_range(self, capsys):
        """Test bounds are enforced on the command line."""
        code, _, err = run(capsys, "star", "table", "--degree", "20")
        assert code == EXIT_CONFIG
        assert "SuiteError" in err
