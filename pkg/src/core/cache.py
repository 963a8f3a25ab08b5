"""On-disk cache of straightening tables and extracted operators.

Entries are keyed by the algebra's constant hash and the degree bound, so
two algebras with the same constants share a file. Files are published
atomically with a digest of their contents; an unreadable, stale,
tampered or malformed entry is logged and recomputed.
"""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.enveloping.pbw import EnvelopingError, enveloping_for
from src.lie.algebra import LieAlgebra
from src.star.diffop import (
    BidifferentialOrderError,
    export_operators,
    parse_operators,
    publish_operators,
)


logger = logging.getLogger(__name__)

CACHE_FORMAT = 2


class CacheIOError(Exception):
    """Raised when a cache entry cannot be written."""

    pass


def entry_key(algebra: LieAlgebra, degree: int) -> str:
    """sha256 over the algebra key, the degree and the file format."""
    payload = f"{algebra.key()}:{degree}:{CACHE_FORMAT}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def body_digest(tables: Any, operators: Any) -> str:
    """sha256 of the canonical JSON of an entry's tables and operators."""
    body = json.dumps({"tables": tables, "operators": operators}, sort_keys=True)
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


class TableCache:
    """Directory of JSON entries, one per (algebra constants, degree).

    Args:
        directory: Cache directory, created on first write
    """

    def __init__(self, directory: Union[str, Path]) -> None:
        self.directory = Path(directory)

    def path(self, algebra: LieAlgebra, degree: int) -> Path:
        return self.directory / f"{entry_key(algebra, degree)}.json"

    def _read(self, path: Path) -> Optional[Dict[str, Any]]:
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None
        if not isinstance(data, dict) or data.get("format") != CACHE_FORMAT:
            logger.warning(f"Ignoring cache entry {path} with unknown format")
            return None
        return data

    def load(self, algebra: LieAlgebra, degree: int) -> int:
        """Warm the in-memory tables from disk.

        The entry is checked against its digest and parsed in full before
        anything is published, so a rejected entry leaves no rows behind.

        Returns:
            Number of entries loaded; 0 on a miss or a rejected file
        """
        path = self.path(algebra, degree)
        data = self._read(path)
        if data is None:
            return 0
        tables = data.get("tables", {})
        operators = data.get("operators", [])
        if data.get("algebra") != algebra.key() or data.get("degree") != degree:
            logger.warning(f"Ignoring stale cache entry {path}")
            return 0
        if data.get("digest") != body_digest(tables, operators):
            logger.warning(f"Ignoring cache entry {path} with a digest mismatch")
            return 0
        store = enveloping_for(algebra)
        try:
            parsed_tables = store.parse_tables(tables)
            parsed_operators = parse_operators(algebra, operators)
        except (EnvelopingError, BidifferentialOrderError) as e:
            logger.warning(f"Ignoring corrupt cache entry {path}: {e}")
            return 0
        count = store.publish_tables(parsed_tables)
        count += publish_operators(parsed_operators)
        logger.info(f"Loaded {count} cached entries for {algebra.name}")
        return count

    def store(self, algebra: LieAlgebra, degree: int) -> Path:
        """Publish the current tables with an atomic rename.

        Raises:
            CacheIOError: When the directory or the file cannot be written
        """
        path = self.path(algebra, degree)
        tables = enveloping_for(algebra).export_tables(max_degree=2 * degree)
        operators = export_operators(algebra)
        payload = {
            "format": CACHE_FORMAT,
            "algebra": algebra.key(),
            "degree": degree,
            "tables": tables,
            "operators": operators,
            "digest": body_digest(tables, operators),
        }
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(
                dir=self.directory, prefix=".entry-", suffix=".json"
            )
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(payload, f, sort_keys=True)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as e:
            raise CacheIOError(f"Unable to write cache entry {path}: {e}")
        logger.debug(f"Stored cache entry {path.name}")
        return path
