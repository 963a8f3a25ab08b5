"""Unit tests for Configuration Management."""

import os
import tempfile
import pytest
import yaml

from src.core.config import (
    DEFAULT_SETTINGS,
    Configuration,
    ConfigurationError,
)


def minimal_config(**suite):
    data = {"suite": {"algebra": "su2", "degree": 4, "order": 4}, "limits": {}}
    data["suite"].update(suite)
    return data


def write_config(config_data):
    with tempfile.NamedTemporaryFile(
        mode="w", suffix=".yaml", delete=False
    ) as f:
        yaml.dump(config_data, f)
        return f.name


class TestConfiguration:
    """Test cases for Configuration class."""

    def test_load_valid_config(self):
        """Test loading valid configuration."""
        config_path = write_config(minimal_config(seed=7))

        try:
            config = Configuration(config_path)
            assert config.get("suite.algebra") == "su2"
            assert config.get("suite.seed") == 7
            assert config.get_limits()["max_degree"] == 8
        finally:
            os.unlink(config_path)

    def test_bundled_settings_load(self):
        """Test the shipped settings file validates."""
        config = Configuration(str(DEFAULT_SETTINGS))
        assert config.get("suite.star") == "bch"
        assert config.get("universal.t_exponent_sign") == -1
        assert config.get("universal.axb_scaling") == 2
        assert config.get("cache.directory") is None

    def test_missing_config_file(self):
        """Test handling of missing configuration file."""
        with pytest.raises(ConfigurationError) as exc_info:
            Configuration("/nonexistent/config.yaml")

        assert "Configuration file not found" in str(exc_info.value)

    def test_invalid_yaml(self):
        """Test handling of invalid YAML."""
        with tempfile.NamedTemporaryFile(
            mode="w", suffix=".yaml", delete=False
        ) as f:
            f.write("invalid: yaml: content: [")
            config_path = f.name

        try:
            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "Invalid YAML" in str(exc_info.value)
        finally:
            os.unlink(config_path)

    def test_missing_required_section(self):
        """Test validation of missing required sections."""
        config_path = write_config({"suite": {"algebra": "su2"}})

        try:
            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "Required configuration section 'limits' is missing" in str(
                exc_info.value
            )
        finally:
            os.unlink(config_path)

    def test_degree_above_limit(self):
        """Test degree bound against limits.max_degree."""
        data = minimal_config(degree=9)
        config_path = write_config(data)

        try:
            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "suite.degree" in str(exc_info.value)
        finally:
            os.unlink(config_path)

    def test_null_order_allowed(self):
        """Test exact (untruncated) order."""
        config_path = write_config(minimal_config(order=None))

        try:
            config = Configuration(config_path)
            assert config.get("suite.order") is None
        finally:
            os.unlink(config_path)

    def test_unknown_star_selector(self):
        """Test validation of the star product selector."""
        config_path = write_config(minimal_config(star="kontsevich"))

        try:
            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "suite.star" in str(exc_info.value)
        finally:
            os.unlink(config_path)

    def test_invalid_t_exponent_sign(self):
        """Test the exponent sign of T is +1 or -1."""
        data = minimal_config()
        data["universal"] = {"t_exponent_sign": 0}
        config_path = write_config(data)

        try:
            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "t_exponent_sign" in str(exc_info.value)
        finally:
            os.unlink(config_path)

    def test_invalid_report_format(self):
        """Test validation of report.format."""
        data = minimal_config()
        data["report"] = {"format": "xml"}
        config_path = write_config(data)

        try:
            with pytest.raises(ConfigurationError):
                Configuration(config_path)
        finally:
            os.unlink(config_path)

    def test_environment_override_seed(self):
        """Test environment variable override for the seed."""
        config_path = write_config(minimal_config(seed=1))

        try:
            # Set environment variable
            os.environ["STARTRACE_SEED"] = "42"

            config = Configuration(config_path)
            assert config.get("suite.seed") == 42

        finally:
            os.unlink(config_path)
            if "STARTRACE_SEED" in os.environ:
                del os.environ["STARTRACE_SEED"]

    def test_environment_override_cache_dir(self):
        """Test environment variable override creating a missing section."""
        config_path = write_config(minimal_config())

        try:
            os.environ["STARTRACE_CACHE_DIR"] = "/tmp/startrace-cache"

            config = Configuration(config_path)
            assert config.get("cache.directory") == "/tmp/startrace-cache"

        finally:
            os.unlink(config_path)
            if "STARTRACE_CACHE_DIR" in os.environ:
                del os.environ["STARTRACE_CACHE_DIR"]

    def test_environment_override_not_an_integer(self):
        """Test a malformed override is a configuration error."""
        config_path = write_config(minimal_config())

        try:
            os.environ["STARTRACE_ORDER"] = "four"

            with pytest.raises(ConfigurationError) as exc_info:
                Configuration(config_path)

            assert "STARTRACE_ORDER" in str(exc_info.value)
        finally:
            os.unlink(config_path)
            if "STARTRACE_ORDER" in os.environ:
                del os.environ["STARTRACE_ORDER"]

    def test_get_nested_value(self):
        """Test getting nested configuration values."""
        data = minimal_config()
        data["gns"] = {"nested": {"deep": {"value": "test"}}}
        config_path = write_config(data)

        try:
            config = Configuration(config_path)
            assert config.get("gns.nested.deep.value") == "test"
            assert config.get("gns.nonexistent", "default") == "default"
        finally:
            os.unlink(config_path)

    def test_log_level_normalized(self):
        """Test logging.level is read case-insensitively."""
        data = minimal_config()
        data["logging"] = {"level": "debug"}
        config_path = write_config(data)

        try:
            config = Configuration(config_path)
            assert config.get_log_level() == "DEBUG"
        finally:
            os.unlink(config_path)

    def test_to_dict(self):
        """Test converting configuration to dictionary."""
        config_path = write_config(minimal_config())

        try:
            config = Configuration(config_path)
            config_dict = config.to_dict()
            assert config_dict["suite"]["algebra"] == "su2"
            assert config_dict["limits"]["max_order"] == 8
        finally:
            os.unlink(config_path)
