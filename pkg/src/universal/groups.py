"""Group models with symbolic product laws and their actions.

A group element is a mapping from coordinate names (and, for exponentiated
coordinates, their ``exp_``/``expinv_`` companions) to ExpPoly values.
Generic elements use prefixed parameters: ``h_a``, ``k_a``, ... Group
axioms and action axioms are polynomial identities in these parameters.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from src.core.checks import CheckResult, collect_defects
from src.universal.expoly import (
    ExpPoly,
    ExpSpace,
    VectorField,
    exp_name,
    expinv_name,
)


logger = logging.getLogger(__name__)

PARAMETER_PREFIXES = ("h_", "k_", "m_")
AXB_SCALINGS = (1, 2)


class GroupModelError(Exception):
    """Raised when a group or action model is malformed."""

    pass


@dataclass
class GroupElement:
    """Values of the coordinates (and companions) of one group element."""

    values: Dict[str, ExpPoly]

    def __getitem__(self, key: str) -> ExpPoly:
        return self.values[key]

    def images(self, names: Mapping[str, str]) -> Dict[str, ExpPoly]:
        """Substitution images keyed by generator names.

        Args:
            names: Coordinate name -> generator name it replaces
        """
        out: Dict[str, ExpPoly] = {}
        for coord, target in names.items():
            out[target] = self.values[coord]
            if exp_name(coord) in self.values:
                out[exp_name(target)] = self.values[exp_name(coord)]
                out[expinv_name(target)] = self.values[expinv_name(coord)]
        return out

    def difference(self, other: "GroupElement") -> List[ExpPoly]:
        return [self.values[k] - other.values[k] for k in sorted(self.values)]

    def to_json(self) -> Dict[str, object]:
        return {k: v.to_json() for k, v in sorted(self.values.items())}


Law = Callable[["GroupModel", GroupElement, GroupElement], GroupElement]
Inversion = Callable[["GroupModel", GroupElement], GroupElement]


@dataclass
class GroupModel:
    """Finite-dimensional group given by symbolic coordinate formulas.

    Args:
        name: Model name used in reports
        coordinates: Coordinate names on G
        exponentiated: Coordinates that appear through e^(m v); their
            identity value must be 0
        space: Ring holding G, its generic parameters and any acted space
        law: Product formulas m(g, h)
        inversion: Inverse formulas
        darboux: (q, p) coordinate pairs of the invariant symplectic form
    """

    name: str
    coordinates: Tuple[str, ...]
    exponentiated: FrozenSet[str]
    space: ExpSpace
    law: Law
    inversion: Inversion
    darboux: Tuple[Tuple[str, str], ...] = ()
    identity_values: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for c in self.exponentiated:
            if self.identity_values.get(c, 0) != 0:
                raise GroupModelError(f"Exponentiated {c} must vanish at e")

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def names(self, prefix: str = "") -> Dict[str, str]:
        return {c: prefix + c for c in self.coordinates}

    def generic(self, prefix: str = "") -> GroupElement:
        """The element whose coordinates are the generators ``prefix + c``."""
        values: Dict[str, ExpPoly] = {}
        for c in self.coordinates:
            name = prefix + c
            values[c] = self.space.variable(name)
            if c in self.exponentiated:
                values[exp_name(c)] = self.space.exp(name)
                values[expinv_name(c)] = self.space.exp(name, -1)
        return GroupElement(values)

    def identity(self) -> GroupElement:
        values: Dict[str, ExpPoly] = {}
        for c in self.coordinates:
            values[c] = self.space.constant(self.identity_values.get(c, 0))
            if c in self.exponentiated:
                values[exp_name(c)] = self.space.one()
                values[expinv_name(c)] = self.space.one()
        return GroupElement(values)

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.law(self, g, h)

    def inverse(self, g: GroupElement) -> GroupElement:
        return self.inversion(self, g)

    # -- pullbacks of functions on G --------------------------------------

    def pullback(
        self, f: ExpPoly, element: GroupElement, prefix: str = ""
    ) -> ExpPoly:
        """f with the generic coordinates ``prefix + c`` replaced by ``element``."""
        return f.substitute(
            element.images(self.names(prefix)),
            weight_targets=list(self.names(prefix).values()),
        )

    def right_translate(self, f: ExpPoly, h: GroupElement) -> ExpPoly:
        """(R*_h f)(g) = f(g h)."""
        return self.pullback(f, self.multiply(self.generic(), h))

    def left_translate(self, f: ExpPoly, h: GroupElement) -> ExpPoly:
        """(L*_h f)(g) = f(h g)."""
        return self.pullback(f, self.multiply(h, self.generic()))

    def invert(self, f: ExpPoly) -> ExpPoly:
        """(iota* f)(g) = f(g^-1)."""
        return self.pullback(f, self.inverse(self.generic()))

    def at_identity(self, f: ExpPoly) -> ExpPoly:
        return f.at(self.identity().images(self.names()))

    # -- Lie data ---------------------------------------------------------

    def right_invariant_frame(self) -> List[VectorField]:
        """X_j f(g) = d/dh_j f(h g) at h = e, one field per coordinate."""
        prefix = PARAMETER_PREFIXES[0]
        product = self.multiply(self.generic(prefix), self.generic())
        at_e = self.identity().images(self.names(prefix))
        frame = []
        for j in self.coordinates:
            components = {
                c: product[c].diff(prefix + j).at(at_e) for c in self.coordinates
            }
            frame.append(VectorField(self.space, components))
        return frame

    def structure_constants(self) -> Dict[Tuple[int, int], List[ExpPoly]]:
        """[X_i, X_j] evaluated at e, in the frame basis."""
        frame = self.right_invariant_frame()
        at_e = self.identity().images(self.names())
        out = {}
        for i in range(self.dim):
            for j in range(self.dim):
                bracket = frame[i].bracket(frame[j]).at(at_e)
                out[(i, j)] = [
                    bracket.components.get(c, self.space.zero())
                    for c in self.coordinates
                ]
        return out


# -- action models --------------------------------------------------------


Action = Callable[["ActionModel", GroupElement, GroupElement], GroupElement]


@dataclass
class ActionModel:
    """Left action tau of a group model on a coordinate space X.

    Points of X are GroupElement-style mappings keyed by the X coordinate
    names. ``spectators`` are X coordinates the group does not move.
    """

    name: str
    group: GroupModel
    x_coordinates: Tuple[str, ...]
    action: Action
    x_exponentiated: FrozenSet[str] = frozenset()
    spectators: Tuple[str, ...] = ()
    invariance: str = "bi"

    @property
    def space(self) -> ExpSpace:
        return self.group.space

    @property
    def x_names(self) -> Dict[str, str]:
        return {c: c for c in self.x_coordinates}

    def point(self, prefix: str = "") -> GroupElement:
        """The symbolic point whose coordinates are ``prefix + x``."""
        values: Dict[str, ExpPoly] = {}
        for c in self.x_coordinates:
            values[c] = self.space.variable(prefix + c)
            if c in self.x_exponentiated:
                values[exp_name(c)] = self.space.exp(prefix + c)
                values[expinv_name(c)] = self.space.exp(prefix + c, -1)
        return GroupElement(values)

    def act(self, g: GroupElement, x: GroupElement) -> GroupElement:
        return self.action(self, g, x)

    def move(self, f: ExpPoly, x: GroupElement, targets: Sequence[str]) -> ExpPoly:
        return f.substitute(x.images(self.x_names), weight_targets=list(targets))

    def alpha(self, f: ExpPoly, x: Optional[GroupElement] = None) -> ExpPoly:
        """(alpha^x f)(g) = f(g.x), a function on G; x defaults to the symbolic point.

        Raises:
            ClassViolation: When the weight of f is not carried by a translation
        """
        x = x if x is not None else self.point()
        moved = self.act(self.group.generic(), x)
        return self.move(f, moved, self.group.coordinates)

    def tau_pullback(self, f: ExpPoly, h: GroupElement) -> ExpPoly:
        """(tau*_h f)(x) = f(h.x)."""
        return self.move(f, self.act(h, self.point()), self.x_coordinates)

    def is_orbit_constant(self, f: ExpPoly) -> bool:
        """True when f only involves spectator coordinates."""
        return not any(
            f.depends_on(c)
            for c in self.x_coordinates
            if c not in self.spectators
        )


# -- catalog ----------------------------------------------------------------


def _prefixed(names: Sequence[str]) -> List[str]:
    return [p + c for p in ("",) + PARAMETER_PREFIXES for c in names]


def _translation_law(model: GroupModel, g: GroupElement, h: GroupElement) -> GroupElement:
    return GroupElement({c: g[c] + h[c] for c in model.coordinates})


def _translation_inverse(model: GroupModel, g: GroupElement) -> GroupElement:
    return GroupElement({c: -g[c] for c in model.coordinates})


def translations(n: int = 1, spectators: int = 0) -> ActionModel:
    """R^2n acting on X = R^2n x R^spectators by x -> x + g.

    Group coordinates are q1..qn, p1..pn; X coordinates are xq1.., xp1..
    and the untouched s1..s_spectators.
    """
    if n < 1 or spectators < 0:
        raise GroupModelError(f"Invalid translation model n={n}, spectators={spectators}")
    coords = tuple(f"q{k}" for k in range(1, n + 1)) + tuple(
        f"p{k}" for k in range(1, n + 1)
    )
    x_coords = tuple(f"x{c}" for c in coords)
    extra = tuple(f"s{k}" for k in range(1, spectators + 1))
    space = ExpSpace(_prefixed(coords) + list(x_coords) + list(extra))
    group = GroupModel(
        name=f"translations({n})",
        coordinates=coords,
        exponentiated=frozenset(),
        space=space,
        law=_translation_law,
        inversion=_translation_inverse,
        darboux=tuple((f"q{k}", f"p{k}") for k in range(1, n + 1)),
    )

    def act(model: ActionModel, g: GroupElement, x: GroupElement) -> GroupElement:
        values = {f"x{c}": x[f"x{c}"] + g[c] for c in coords}
        for s in extra:
            values[s] = x[s]
        return GroupElement(values)

    return ActionModel(
        name=f"translations({n}, spectators={spectators})",
        group=group,
        x_coordinates=x_coords + extra,
        action=act,
        spectators=extra,
        invariance="bi",
    )


def axb2d(scaling: int = 2) -> ActionModel:
    """ax+b group (a, l) acting on itself by left translations.

    The law is m((a, l), (a', l')) = (a + a', e^(-scaling a') l + l').

    Raises:
        GroupModelError: When ``scaling`` is not 1 or 2
    """
    if scaling not in AXB_SCALINGS:
        raise GroupModelError(f"ax+b scaling must be one of {AXB_SCALINGS}, got {scaling}")

    def law(model: GroupModel, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(
            {
                "a": g["a"] + h["a"],
                "exp_a": g["exp_a"] * h["exp_a"],
                "expinv_a": g["expinv_a"] * h["expinv_a"],
                "l": h["expinv_a"] ** scaling * g["l"] + h["l"],
            }
        )

    def inversion(model: GroupModel, g: GroupElement) -> GroupElement:
        return GroupElement(
            {
                "a": -g["a"],
                "exp_a": g["expinv_a"],
                "expinv_a": g["exp_a"],
                "l": -(g["exp_a"] ** scaling) * g["l"],
            }
        )

    coords = ("a", "l")
    x_coords = ("xa", "xl")
    space = ExpSpace(
        _prefixed(coords) + list(x_coords),
        exponentiated=[p + "a" for p in ("",) + PARAMETER_PREFIXES] + ["xa"],
    )
    group = GroupModel(
        name=f"axb2d(scaling={scaling})",
        coordinates=coords,
        exponentiated=frozenset({"a"}),
        space=space,
        law=law,
        inversion=inversion,
        darboux=(("a", "l"),),
    )

    def act(model: ActionModel, g: GroupElement, x: GroupElement) -> GroupElement:
        as_group = GroupElement(
            {
                "a": x["xa"],
                "exp_a": x["exp_xa"],
                "expinv_a": x["expinv_xa"],
                "l": x["xl"],
            }
        )
        moved = model.group.multiply(g, as_group)
        return GroupElement(
            {
                "xa": moved["a"],
                "exp_xa": moved["exp_a"],
                "expinv_xa": moved["expinv_a"],
                "xl": moved["l"],
            }
        )

    return ActionModel(
        name=f"axb2d(scaling={scaling})",
        group=group,
        x_coordinates=x_coords,
        action=act,
        x_exponentiated=frozenset({"xa"}),
        invariance="left",
    )


# -- checks -----------------------------------------------------------------

GROUP_AXIOMS_REFERENCE = (
    "(gh)k = g(hk), eg = ge = g, g g^-1 = g^-1 g = e, e.x = x, "
    "g.(h.x) = (gh).x"
)


def check_group_axioms(action: ActionModel) -> CheckResult:
    """Group and action axioms at generic symbolic elements and points."""
    group = action.group
    g, h, k = (group.generic(p) for p in ("",) + PARAMETER_PREFIXES[:2])
    e = group.identity()
    x = action.point()
    cases: List[Tuple[str, Callable[[], List[ExpPoly]]]] = [
        (
            "associativity",
            lambda: group.multiply(group.multiply(g, h), k).difference(
                group.multiply(g, group.multiply(h, k))
            ),
        ),
        ("left identity", lambda: group.multiply(e, g).difference(g)),
        ("right identity", lambda: group.multiply(g, e).difference(g)),
        ("right inverse", lambda: group.multiply(g, group.inverse(g)).difference(e)),
        ("left inverse", lambda: group.multiply(group.inverse(g), g).difference(e)),
        ("action identity", lambda: action.act(e, x).difference(x)),
        (
            "action composition",
            lambda: action.act(g, action.act(h, x)).difference(
                action.act(group.multiply(g, h), x)
            ),
        ),
    ]
    result = collect_defects(
        "group-axioms",
        GROUP_AXIOMS_REFERENCE,
        cases,
        lambda case: case[1](),
        lambda case: {"model": action.name, "axiom": case[0]},
    )
    result.details = {"model": action.name}
    return result
