"""Configuration management for startrace.

This module handles YAML configuration loading, validation against the
configured limits, and environment variable overrides.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml


DEFAULT_SETTINGS = Path(__file__).resolve().parents[2] / "config" / "settings.yaml"

LIMIT_DEFAULTS = {
    "max_dim": 16,
    "max_degree": 8,
    "max_order": 8,
    "max_bch_order": 5,
}

ENVIRONMENT_OVERRIDES = {
    "STARTRACE_ALGEBRA": ("suite.algebra", str),
    "STARTRACE_SEED": ("suite.seed", int),
    "STARTRACE_ORDER": ("suite.order", int),
    "STARTRACE_R2": ("orbit.r2", str),
    "STARTRACE_CACHE_DIR": ("cache.directory", str),
}

STAR_SELECTORS = ("bch", "moyal", "pointwise")
REPORT_FORMATS = ("json", "text")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigurationError(Exception):
    """Raised when configuration is invalid or missing."""

    pass


class Configuration:
    """Configuration management with YAML loading and validation.

    Loads the suite, limits, orbit, gns, universal, cache, report and
    logging sections; ``suite`` and ``limits`` are required.
    """

    def __init__(self, config_path: Optional[str] = None) -> None:
        """Initialize configuration manager.

        Args:
            config_path: Optional path to configuration file.
                        If None, auto-detects config.yaml in current directory,
                        then falls back to the bundled settings.

        Raises:
            ConfigurationError: When configuration file is invalid
        """
        self._config: Dict[str, Any] = {}
        self._config_path = self._resolve_config_path(config_path)
        self._load_configuration()
        self._apply_environment_overrides()
        self._validate_configuration()

    @property
    def path(self) -> Path:
        return self._config_path

    def _resolve_config_path(self, config_path: Optional[str]) -> Path:
        """Resolve configuration file path.

        Raises:
            ConfigurationError: When configuration file not found
        """
        if config_path:
            path = Path(config_path)
        else:
            path = Path("config.yaml")
            if not path.exists():
                path = Path("config/settings.yaml")
            if not path.exists():
                path = DEFAULT_SETTINGS

        if not path.exists():
            raise ConfigurationError(
                f"Configuration file not found: {path}. "
                "Please create a configuration file or specify a valid path."
            )

        return path

    def _load_configuration(self) -> None:
        """Load configuration from YAML file.

        Raises:
            ConfigurationError: When YAML file is invalid
        """
        try:
            with open(self._config_path, "r", encoding="utf-8") as f:
                self._config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Invalid YAML in configuration file {self._config_path}: {e}"
            )
        except IOError as e:
            raise ConfigurationError(
                f"Unable to read configuration file {self._config_path}: {e}"
            )
        if not isinstance(self._config, dict):
            raise ConfigurationError(
                f"Configuration file {self._config_path} must hold a mapping"
            )

    def _validate_configuration(self) -> None:
        """Validate required sections and bounds.

        Raises:
            ConfigurationError: When a section is missing or a bound is
                out of range
        """
        for section in ("suite", "limits"):
            if not isinstance(self._config.get(section), dict):
                raise ConfigurationError(
                    f"Required configuration section '{section}' is missing"
                )

        limits = self._config["limits"]
        for key, default in LIMIT_DEFAULTS.items():
            value = limits.setdefault(key, default)
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(
                    f"Field 'limits.{key}' must be a positive integer"
                )

        suite = self._config["suite"]
        degree = suite.get("degree", 4)
        if not isinstance(degree, int) or not 0 <= degree <= limits["max_degree"]:
            raise ConfigurationError(
                f"Field 'suite.degree' must be in 0..{limits['max_degree']}"
            )
        order = suite.get("order")
        if order is not None and (
            not isinstance(order, int) or not 0 <= order <= limits["max_order"]
        ):
            raise ConfigurationError(
                f"Field 'suite.order' must be null or in 0..{limits['max_order']}"
            )
        bch_order = suite.get("bch_order", limits["max_bch_order"])
        if not isinstance(bch_order, int) or not 1 <= bch_order <= limits[
            "max_bch_order"
        ]:
            raise ConfigurationError(
                f"Field 'suite.bch_order' must be in 1..{limits['max_bch_order']}"
            )
        if not isinstance(suite.get("seed", 0), int):
            raise ConfigurationError("Field 'suite.seed' must be an integer")
        star = suite.get("star", "bch")
        if star not in STAR_SELECTORS:
            raise ConfigurationError(
                f"Field 'suite.star' must be one of {', '.join(STAR_SELECTORS)}"
            )
        identities = suite.get("identities", [])
        if identities is not None and not isinstance(identities, list):
            raise ConfigurationError("Field 'suite.identities' must be a list")

        universal = self._config.get("universal", {}) or {}
        if universal.get("t_exponent_sign", -1) not in (-1, 1):
            raise ConfigurationError(
                "Field 'universal.t_exponent_sign' must be -1 or 1"
            )
        if universal.get("axb_scaling", 2) not in (1, 2):
            raise ConfigurationError("Field 'universal.axb_scaling' must be 1 or 2")

        report_format = self.get("report.format", "json")
        if report_format not in REPORT_FORMATS:
            raise ConfigurationError(
                f"Field 'report.format' must be one of {', '.join(REPORT_FORMATS)}"
            )
        level = str(self.get("logging.level", "INFO")).upper()
        if level not in LOG_LEVELS:
            raise ConfigurationError(
                f"Field 'logging.level' must be one of {', '.join(LOG_LEVELS)}"
            )

    def _apply_environment_overrides(self) -> None:
        """Apply environment variable overrides to configuration.

        Raises:
            ConfigurationError: When an override does not parse
        """
        for variable, (key_path, kind) in ENVIRONMENT_OVERRIDES.items():
            if variable not in os.environ:
                continue
            raw = os.environ[variable]
            try:
                value = kind(raw)
            except ValueError:
                raise ConfigurationError(
                    f"Environment variable {variable}={raw!r} is not a valid "
                    f"{kind.__name__}"
                )
            self._set_nested_value(key_path, value)

    def _set_nested_value(self, key_path: str, value: Any) -> None:
        """Set nested configuration value using dot notation.

        Args:
            key_path: Dot-separated key path (e.g., 'suite.seed')
            value: Value to set
        """
        keys = key_path.split(".")
        current = self._config

        for key in keys[:-1]:
            if not isinstance(current.get(key), dict):
                current[key] = {}
            current = current[key]

        current[keys[-1]] = value

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value using dot notation.

        Args:
            key_path: Dot-separated key path (e.g., 'limits.max_dim')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        keys = key_path.split(".")
        current = self._config

        try:
            for key in keys:
                current = current[key]
            return current
        except (KeyError, TypeError):
            return default

    def get_limits(self) -> Dict[str, int]:
        return dict(self._config["limits"])

    def get_log_level(self) -> str:
        return str(self.get("logging.level", "INFO")).upper()

    def to_dict(self) -> Dict[str, Any]:
        """Get complete configuration as dictionary.

        Returns:
            Complete configuration dictionary
        """
        return self._config.copy()
