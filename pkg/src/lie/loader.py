"""Algebra files in JSON, TOML or YAML.

Format::

    name: su2
    dim: 3
    basis: [e1, e2, e3]
    brackets:
      - {i: 1, j: 2, k: 3, value: "1/1"}

Indices are one-based; only ``i < j`` entries are accepted and omitted
entries are zero.
"""

import json
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import yaml

from src.core.exact import ExactArithmeticError, parse_rational
from src.lie.algebra import LieAlgebra, LieAlgebraError, from_brackets
from src.lie.catalog import catalog


logger = logging.getLogger(__name__)


class AlgebraFileError(LieAlgebraError):
    """Raised when an algebra file cannot be read or is malformed."""

    pass


def _read_document(path: Path) -> Dict[str, Any]:
    suffix = path.suffix.lower()
    try:
        if suffix == ".json":
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        elif suffix == ".toml":
            with open(path, "rb") as f:
                data = tomllib.load(f)
        elif suffix in (".yaml", ".yml"):
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        else:
            raise AlgebraFileError(
                f"Unsupported algebra file type {suffix!r}: {path}"
            )
    except (json.JSONDecodeError, tomllib.TOMLDecodeError, yaml.YAMLError) as e:
        raise AlgebraFileError(f"Invalid algebra file {path}: {e}")
    except IOError as e:
        raise AlgebraFileError(f"Unable to read algebra file {path}: {e}")

    if not isinstance(data, dict):
        raise AlgebraFileError(f"Algebra file {path} must hold a mapping")
    return data


def parse_algebra(data: Mapping[str, Any]) -> LieAlgebra:
    """Build a validated algebra from a parsed algebra document.

    Raises:
        AlgebraFileError: When required fields are missing or malformed
    """
    if "dim" not in data:
        raise AlgebraFileError("Required field 'dim' is missing")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFileError("Field 'dim' must be a positive integer")

    brackets: Dict[Tuple[int, int], Dict[int, Any]] = {}
    for entry in data.get("brackets", []) or []:
        try:
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
            value = parse_rational(entry.get("value", "1"))
        except (KeyError, TypeError, ValueError, ExactArithmeticError) as e:
            raise AlgebraFileError(f"Malformed bracket entry {entry!r}: {e}")
        if not i < j:
            raise AlgebraFileError(
                f"Bracket entry ({i},{j},{k}) must satisfy i < j"
            )
        if not all(1 <= idx <= dim for idx in (i, j, k)):
            raise AlgebraFileError(
                f"Bracket entry ({i},{j},{k}) outside 1..{dim}"
            )
        brackets.setdefault((i - 1, j - 1), {})[k - 1] = value

    return from_brackets(
        brackets, dim, str(data.get("name", "custom")), data.get("basis")
    )


def load_algebra(path: Union[str, Path]) -> LieAlgebra:
    """Load and validate an algebra file."""
    path = Path(path)
    if not path.exists():
        raise AlgebraFileError(f"Algebra file not found: {path}")
    algebra = parse_algebra(_read_document(path))
    logger.info(f"Loaded algebra {algebra.name} (dim {algebra.dim}) from {path}")
    return algebra


def resolve_algebra(source: str) -> LieAlgebra:
    """Resolve a catalog name or an algebra file path."""
    candidate = Path(source)
    if candidate.suffix.lower() in (".json", ".toml", ".yaml", ".yml"):
        return load_algebra(candidate)
    return catalog(source)


def dump_algebra(algebra: LieAlgebra, path: Union[str, Path]) -> None:
    """Write an algebra file; the format follows the suffix (JSON or YAML)."""
    path = Path(path)
    document = algebra.to_json()
    with open(path, "w", encoding="utf-8") as f:
        if path.suffix.lower() in (".yaml", ".yml"):
            yaml.safe_dump(document, f, sort_keys=False)
        else:
            json.dump(document, f, indent=2)
