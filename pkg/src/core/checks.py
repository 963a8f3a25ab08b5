"""Identity-check framework.

Every verifier returns a :class:`CheckResult`. Defects are exact objects;
they are serialized through their ``to_json`` methods and never turned into
floats.
"""

import logging
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple


logger = logging.getLogger(__name__)


class CheckStatus(Enum):
    """Check result status."""

    PASSED = "PASSED"
    FAILED = "FAILED"
    WARNING = "WARNING"
    SKIPPED = "SKIPPED"


def serialize(value: Any) -> Any:
    """JSON-ready form of an exact object."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialize(v) for v in value]
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


@dataclass
class CheckResult:
    """Result of one identity check."""

    name: str
    status: CheckStatus
    message: str
    reference: str = ""
    sample_count: int = 0
    first_defect: Optional[Any] = None
    details: Optional[Dict[str, Any]] = None
    wall_time: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status in (CheckStatus.PASSED, CheckStatus.SKIPPED)

    def to_json(self, include_timings: bool = False) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "name": self.name,
            "reference": self.reference,
            "status": self.status.value,
            "message": self.message,
            "sample_count": self.sample_count,
            "first_defect": serialize(self.first_defect),
        }
        if self.details:
            record["details"] = serialize(self.details)
        if include_timings and self.wall_time is not None:
            record["wall_time"] = round(self.wall_time, 6)
        return record


def is_zero(value: Any) -> bool:
    if hasattr(value, "is_zero"):
        return bool(value.is_zero())
    if isinstance(value, (list, tuple)):
        return all(is_zero(v) for v in value)
    if isinstance(value, dict):
        return all(is_zero(v) for v in value.values())
    return not value


def collect_defects(
    name: str,
    reference: str,
    samples: Iterable[Any],
    defect: Callable[[Any], Any],
    describe: Optional[Callable[[Any], Any]] = None,
) -> CheckResult:
    """Evaluate ``defect`` on every sample; the first nonzero one fails.

    Args:
        name: Identity name
        reference: Mathematical description of the identity
        samples: Inputs to the defect function
        defect: Returns an exact object that is zero when the identity holds
        describe: Optional serializer for the failing sample

    Returns:
        PASSED when every defect vanishes, FAILED with the first witness
    """
    count = 0
    for sample in samples:
        count += 1
        value = defect(sample)
        if not is_zero(value):
            witness = describe(sample) if describe else sample
            logger.info(f"{name}: nonzero defect on sample {count}")
            return CheckResult(
                name=name,
                status=CheckStatus.FAILED,
                message=f"Nonzero defect on sample {count}",
                reference=reference,
                sample_count=count,
                first_defect={"sample": serialize(witness), "defect": serialize(value)},
            )
    return CheckResult(
        name=name,
        status=CheckStatus.PASSED,
        message=f"Exact zero defect on {count} samples",
        reference=reference,
        sample_count=count,
    )


class BaseCheck(ABC):
    """Base class for all identity checks."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Identity name."""
        pass

    @property
    def reference(self) -> str:
        return ""

    @abstractmethod
    def run(self) -> CheckResult:
        """Perform the check.

        Returns:
            CheckResult with status and first defect
        """
        pass

    def execute(self) -> CheckResult:
        """Run the check, timing it and capturing any error as FAILED."""
        started = time.perf_counter()
        try:
            result = self.run()
        except Exception as e:
            logger.error(f"Check {self.name} raised {type(e).__name__}: {e}")
            result = CheckResult(
                name=self.name,
                status=CheckStatus.FAILED,
                message=f"{type(e).__name__}: {e}",
                reference=self.reference,
            )
        result.wall_time = time.perf_counter() - started
        return result


class FunctionCheck(BaseCheck):
    """A check backed by a callable returning a CheckResult."""

    def __init__(
        self, name: str, run: Callable[[], CheckResult], reference: str = ""
    ) -> None:
        self._name = name
        self._run = run
        self._reference = reference

    @property
    def name(self) -> str:
        return self._name

    @property
    def reference(self) -> str:
        return self._reference

    def run(self) -> CheckResult:
        result = self._run()
        result.name = self._name
        if not result.reference:
            result.reference = self._reference
        return result


@dataclass
class CheckRunner:
    """Runs a batch of checks in a thread pool."""

    checks: List[BaseCheck] = field(default_factory=list)
    workers: int = 4

    def run_all(self) -> List[CheckResult]:
        """Run every check; records come back sorted by name."""
        if not self.checks:
            return []
        with ThreadPoolExecutor(max_workers=max(1, self.workers)) as pool:
            results = list(pool.map(lambda c: c.execute(), self.checks))
        return sorted(results, key=lambda r: r.name)

    @staticmethod
    def all_passed(results: List[CheckResult]) -> bool:
        """True iff no record failed."""
        for result in results:
            if result.status == CheckStatus.FAILED:
                return False
        return True


def summarize(results: List[CheckResult]) -> Tuple[int, int]:
    """(passed, failed) counts."""
    failed = sum(1 for r in results if r.status == CheckStatus.FAILED)
    return len(results) - failed, failed


def combine_results(
    name: str, reference: str, results: List[CheckResult]
) -> CheckResult:
    """One record for an identity checked on several instances.

    The first failure wins; otherwise any warning is kept.
    """
    parts = [{"instance": r.name, "status": r.status.value} for r in results]
    samples = sum(r.sample_count for r in results)
    for status in (CheckStatus.FAILED, CheckStatus.WARNING):
        for r in results:
            if r.status == status:
                return CheckResult(
                    name=name,
                    status=status,
                    message=f"{r.name}: {r.message}",
                    reference=reference,
                    sample_count=samples,
                    first_defect=r.first_defect,
                    details={"parts": parts},
                )
    return CheckResult(
        name=name,
        status=CheckStatus.PASSED,
        message=f"Exact zero defect on {len(results)} instances",
        reference=reference,
        sample_count=samples,
        details={"parts": parts},
    )
