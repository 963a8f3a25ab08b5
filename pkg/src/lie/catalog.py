"""Built-in Lie algebras addressed by name.

Names: ``su2`` (alias ``so3``), ``sl2``, ``heisenberg3``, ``aff1``,
``abelian(n)`` and ``direct_sum(a,b,...)`` over any of these.
"""

import logging
import re
from typing import Callable, Dict, List, Tuple

from src.lie.algebra import (
    LieAlgebra,
    LieAlgebraError,
    Triple,
    from_brackets,
    validate,
)


logger = logging.getLogger(__name__)


class UnknownAlgebraError(LieAlgebraError):
    """Raised when a catalog name is not recognized."""

    pass


def _su2() -> LieAlgebra:
    return from_brackets(
        {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}},
        3,
        "su2",
        ["e1", "e2", "e3"],
    )


def _sl2() -> LieAlgebra:
    # basis (h, e, f)
    return from_brackets(
        {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}},
        3,
        "sl2",
        ["h", "e", "f"],
    )


def _heisenberg3() -> LieAlgebra:
    return from_brackets({(0, 1): {2: 1}}, 3, "heisenberg3", ["e1", "e2", "e3"])


def _aff1() -> LieAlgebra:
    return from_brackets({(0, 1): {1: 1}}, 2, "aff1", ["e1", "e2"])


_NAMED: Dict[str, Callable[[], LieAlgebra]] = {
    "su2": _su2,
    "so3": _su2,
    "sl2": _sl2,
    "heisenberg3": _heisenberg3,
    "aff1": _aff1,
}

_ABELIAN = re.compile(r"^abelian\((\d+)\)$")
_DIRECT_SUM = re.compile(r"^direct_sum\((.*)\)$")


def abelian(dim: int) -> LieAlgebra:
    """The abelian Lie algebra of the given dimension."""
    return validate({}, dim, f"abelian({dim})")


def direct_sum(*parts: LieAlgebra) -> LieAlgebra:
    """Direct sum with block-shifted indices and prefixed basis labels."""
    if not parts:
        raise LieAlgebraError("Direct sum of no algebras")
    table: Dict[Triple, object] = {}
    labels: List[str] = []
    offset = 0
    for part in parts:
        for (i, j, k), v in part.nonzero_constants():
            table[(i + offset, j + offset, k + offset)] = v
        labels.extend(f"{part.name}.{b}" for b in part.basis)
        offset += part.dim
    name = "direct_sum(" + ",".join(p.name for p in parts) + ")"
    return validate(table, offset, name, labels)


def _split_arguments(text: str) -> List[str]:
    args: List[str] = []
    depth = 0
    current = ""
    for ch in text:
        if ch == "," and depth == 0:
            args.append(current.strip())
            current = ""
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        current += ch
    if current.strip():
        args.append(current.strip())
    return args


def catalog(name: str) -> LieAlgebra:
    """Look up a built-in algebra.

    Args:
        name: Catalog name

    Returns:
        Validated LieAlgebra

    Raises:
        UnknownAlgebraError: When the name is not recognized
    """
    key = name.strip().replace(" ", "")
    if key in _NAMED:
        return _NAMED[key]()

    match = _ABELIAN.match(key)
    if match:
        return abelian(int(match.group(1)))

    match = _DIRECT_SUM.match(key)
    if match:
        return direct_sum(*(catalog(arg) for arg in _split_arguments(match.group(1))))

    raise UnknownAlgebraError(
        f"Unknown algebra {name!r}; expected one of "
        f"{sorted(_NAMED)} or abelian(n) or direct_sum(...)"
    )


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(_NAMED))
