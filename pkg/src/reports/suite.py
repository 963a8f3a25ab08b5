"""Suite orchestration: configuration, the identity registry and reports.

Identities are grouped by package. Each entry builds its inputs from a
:class:`SuiteContext` and returns a :class:`CheckResult`; errors raised by
the mathematics are captured by the runner and never escape ``run_suite``.
"""

import logging
import threading
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.core.cache import CacheIOError, TableCache
from src.core.checks import (
    CheckResult,
    CheckRunner,
    CheckStatus,
    FunctionCheck,
    combine_results,
    summarize,
)
from src.core.config import Configuration
from src.gns import verification as gns_checks
from src.gns.representation import DEFAULT_DEGREE_BUDGET, GNSRepresentation
from src.lie.algebra import LieAlgebra, unimodular, validation_report
from src.lie.loader import resolve_algebra
from src.orbit import verification as orbit_checks
from src.orbit.reduction import (
    DEFAULT_ORBIT_ORDER,
    OrbitReducer,
    OrbitReductionError,
    Radius,
    parse_radius,
)
from src.poisson.polynomial import PolyG
from src.poisson.samples import (
    monomial_samples,
    sample_pairs,
    sample_polynomials,
    sample_triples,
)
from src.star import verification as star_checks
from src.star.base import BCHStarProduct, PointwiseProduct, StarProduct
from src.star.functionals import make_functional
from src.star.moyal import MoyalProduct, darboux_aliases, phase_space
from src.star.projection import MatrixOverStar, check_projection
from src.universal import verification as universal_checks
from src.universal.axb import BMProduct, TOperator
from src.universal.deformation import (
    MoyalGroupProduct,
    PointwiseGroupProduct,
    inversion_conjugate,
)
from src.universal.groups import ActionModel, axb2d, translations


logger = logging.getLogger(__name__)

GROUPS = ("algebra", "star", "orbit", "gns", "universal")

PROJECTION_EXAMPLE = (("1 + q*p", "-p"), ("q + q**2*p", "-q*p"))


class SuiteError(Exception):
    """Raised when a suite request names unknown identities or groups."""

    pass


@dataclass
class SuiteConfig:
    """Everything one suite run depends on."""

    algebra: str = "su2"
    star: str = "bch"
    identities: List[str] = field(default_factory=list)
    degree: int = 4
    order: Optional[int] = 4
    bch_order: int = 5
    seed: int = 0
    sample_count: int = 40
    workers: int = 4
    r2: str = "symbolic"
    class_degree: int = 3
    gns_budget: int = DEFAULT_DEGREE_BUDGET
    vector_degree: int = 2
    translations: int = 1
    t_exponent_sign: int = -1
    axb_scaling: int = 2
    bm_order: int = 4
    inner_derivation_order: int = 2
    cache_directory: Optional[str] = None
    output_format: str = "json"
    include_timings: bool = False

    @classmethod
    def from_configuration(
        cls, config: Configuration, **overrides: Any
    ) -> "SuiteConfig":
        """Build from a loaded configuration; ``None`` overrides are ignored."""
        values: Dict[str, Any] = {
            "algebra": config.get("suite.algebra", "su2"),
            "star": config.get("suite.star", "bch"),
            "identities": list(config.get("suite.identities") or []),
            "degree": config.get("suite.degree", 4),
            "order": config.get("suite.order", 4),
            "bch_order": config.get("suite.bch_order", 5),
            "seed": config.get("suite.seed", 0),
            "sample_count": config.get("suite.sample_count", 40),
            "workers": config.get("suite.workers", 4),
            "r2": str(config.get("orbit.r2", "symbolic")),
            "class_degree": config.get("orbit.class_degree", 3),
            "gns_budget": config.get("gns.budget", DEFAULT_DEGREE_BUDGET),
            "vector_degree": config.get("gns.vector_degree", 2),
            "translations": config.get("universal.translations", 1),
            "t_exponent_sign": config.get("universal.t_exponent_sign", -1),
            "axb_scaling": config.get("universal.axb_scaling", 2),
            "bm_order": config.get("universal.bm_order", 4),
            "inner_derivation_order": config.get(
                "universal.inner_derivation_order", 2
            ),
            "cache_directory": config.get("cache.directory"),
            "output_format": config.get("report.format", "json"),
            "include_timings": bool(config.get("report.include_timings", False)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        suite = cls(**values)
        suite.validate(config.get_limits())
        return suite

    def validate(self, limits: Dict[str, int]) -> None:
        """Check bounds against the configured limits.

        Raises:
            SuiteError: When a bound is out of range or an identity is unknown
        """
        if not 0 <= self.degree <= limits["max_degree"]:
            raise SuiteError(f"Degree {self.degree} outside 0..{limits['max_degree']}")
        for name in ("order", "bm_order", "inner_derivation_order"):
            value = getattr(self, name)
            if value is not None and not 0 <= value <= limits["max_order"]:
                raise SuiteError(f"{name} {value} outside 0..{limits['max_order']}")
        if not 1 <= self.bch_order <= limits["max_bch_order"]:
            raise SuiteError(
                f"BCH order {self.bch_order} outside 1..{limits['max_bch_order']}"
            )
        if self.sample_count < 1:
            raise SuiteError("sample_count must be positive")
        selected_identities(self.identities)

    def to_json(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("cache_directory")
        data.pop("workers")
        return data


@dataclass
class Report:
    """Sorted identity records of one suite run."""

    config: SuiteConfig
    records: List[CheckResult]

    @property
    def passed(self) -> bool:
        return CheckRunner.all_passed(self.records)

    def counts(self) -> Dict[str, int]:
        out = {status.value: 0 for status in CheckStatus}
        for record in self.records:
            out[record.status.value] += 1
        return out

    def to_json(self) -> Dict[str, Any]:
        include = self.config.include_timings
        return {
            "config": self.config.to_json(),
            "passed": self.passed,
            "counts": self.counts(),
            "records": [r.to_json(include) for r in self.records],
        }


def skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name=name, status=CheckStatus.SKIPPED, message=reason)


class SuiteContext:
    """Shared, lazily built inputs for one run."""

    def __init__(self, config: SuiteConfig) -> None:
        self.config = config
        self._lock = threading.RLock()
        self._built: Dict[str, Any] = {}

    def _once(self, key: str, build: Callable[[], Any]) -> Any:
        with self._lock:
            if key not in self._built:
                self._built[key] = build()
            return self._built[key]

    @property
    def algebra(self) -> LieAlgebra:
        return self._once("algebra", lambda: resolve_algebra(self.config.algebra))

    @property
    def radius(self) -> Radius:
        return self._once("radius", lambda: parse_radius(self.config.r2))

    def star_product(self) -> StarProduct:
        selector = self.config.star
        order = self.config.order
        if selector == "moyal":
            return MoyalProduct(order)
        if selector == "pointwise":
            return PointwiseProduct(order)
        return BCHStarProduct(self.algebra, order)

    @property
    def star_algebra(self) -> LieAlgebra:
        """The algebra the star samples live over."""
        if self.config.star == "moyal":
            return phase_space(self.config.translations)
        return self.algebra

    def reducer(self) -> Optional[OrbitReducer]:
        """Orbit reducer, or None when the algebra has no sphere orbits."""

        def build() -> Optional[OrbitReducer]:
            try:
                return OrbitReducer(
                    self.algebra,
                    self.radius,
                    order=self.config.order or DEFAULT_ORBIT_ORDER,
                )
            except OrbitReductionError as e:
                logger.info(f"No orbit reduction for {self.config.algebra}: {e}")
                return None

        return self._once("reducer", build)

    def gns(self) -> Optional[GNSRepresentation]:
        reducer = self.reducer()
        if reducer is None:
            return None
        return self._once(
            "gns", lambda: GNSRepresentation(reducer, self.config.gns_budget)
        )

    @property
    def translation_action(self) -> ActionModel:
        return self._once(
            "translations", lambda: translations(self.config.translations)
        )

    @property
    def spectator_action(self) -> ActionModel:
        return self._once(
            "spectators",
            lambda: translations(self.config.translations, spectators=1),
        )

    @property
    def axb_action(self) -> ActionModel:
        return self._once("axb", lambda: axb2d(self.config.axb_scaling))

    def bm_product(self, order: Optional[int] = None) -> BMProduct:
        return BMProduct(
            self.axb_action.group,
            order if order is not None else self.config.bm_order,
            self.config.t_exponent_sign,
        )

    def t_operator(self, order: Optional[int] = None) -> TOperator:
        return TOperator(
            self.axb_action.space,
            "l",
            order if order is not None else self.config.bm_order,
            self.config.t_exponent_sign,
        )


# -- identity entries --------------------------------------------------------

Entry = Callable[[SuiteContext], CheckResult]


def _structure(ctx: SuiteContext) -> CheckResult:
    algebra = ctx.algebra
    violations = validation_report(algebra.constants, algebra.dim)
    if violations:
        return CheckResult(
            name="structure",
            status=CheckStatus.FAILED,
            message=f"{len(violations)} structure violations",
            first_defect=[v.describe() for v in violations],
        )
    return CheckResult(
        name="structure",
        status=CheckStatus.PASSED,
        message=f"{algebra.name} satisfies antisymmetry and Jacobi",
        sample_count=algebra.dim**3,
    )


def _unimodular(ctx: SuiteContext) -> CheckResult:
    result = unimodular(ctx.algebra)
    if result.unimodular:
        return CheckResult(
            name="unimodular",
            status=CheckStatus.PASSED,
            message=f"{ctx.algebra.name} is unimodular",
            details={"unimodular": True},
        )
    return CheckResult(
        name="unimodular",
        status=CheckStatus.WARNING,
        message=f"{ctx.algebra.name} is not unimodular",
        first_defect={"index": result.witness, "trace": result.trace},
        details={"unimodular": False},
    )


def _bch_only(name: str, run: Entry) -> Entry:
    def entry(ctx: SuiteContext) -> CheckResult:
        if ctx.config.star != "bch":
            return skipped(name, f"{name} is a property of the BCH product")
        return run(ctx)

    return entry


def _pairs(ctx: SuiteContext) -> List[Tuple[PolyG, PolyG]]:
    c = ctx.config
    return sample_pairs(ctx.star_algebra, c.degree, c.sample_count, c.seed)


def _assoc(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    triples = sample_triples(ctx.star_algebra, c.degree, c.sample_count, c.seed)
    return star_checks.check_associativity(ctx.star_product(), triples)


def _strong_inv(ctx: SuiteContext) -> CheckResult:
    samples = monomial_samples(ctx.algebra, ctx.config.degree)
    return star_checks.check_strong_invariance(ctx.star_product(), samples)


def _homog(ctx: SuiteContext) -> CheckResult:
    return star_checks.check_homogeneity(ctx.star_product(), _pairs(ctx))


def _covariance(ctx: SuiteContext) -> CheckResult:
    return star_checks.check_covariance(ctx.star_product(), ctx.algebra)


def _hermitian(ctx: SuiteContext) -> CheckResult:
    return star_checks.check_hermitian(ctx.star_product(), _pairs(ctx))


def _exp_bch(ctx: SuiteContext) -> CheckResult:
    return star_checks.check_exp_bch(ctx.algebra, order=ctx.config.bch_order)


def _closedness(ctx: SuiteContext) -> CheckResult:
    star = ctx.star_product().with_order(None)
    fdeg = min(ctx.config.degree, 4)
    return star_checks.check_closedness(star, ctx.star_algebra, fdeg, 2)


def _invariant_trace(ctx: SuiteContext) -> CheckResult:
    if ctx.reducer() is None:
        return skipped(
            "invariant-trace", "No invariant sphere functional for this algebra"
        )
    functional = make_functional("sphere", ctx.radius.value)
    return star_checks.check_invariant_trace(
        ctx.star_product(), functional, _pairs(ctx)
    )


def projection_example(order: int) -> MatrixOverStar:
    """The nonconstant 2x2 Moyal projection on R^2."""
    algebra = phase_space(1)
    aliases = darboux_aliases(1)
    rows = [[PolyG.parse(algebra, e, aliases) for e in row] for row in PROJECTION_EXAMPLE]
    return MatrixOverStar(MoyalProduct(order), rows)


def _projection(ctx: SuiteContext) -> CheckResult:
    order = ctx.config.order if ctx.config.order is not None else 4
    p0 = projection_example(order)
    return check_projection(p0.star, p0, order)


def _orbit_entry(run: Callable[[OrbitReducer, SuiteConfig], CheckResult]) -> Entry:
    def entry(ctx: SuiteContext) -> CheckResult:
        reducer = ctx.reducer()
        if reducer is None:
            return skipped("orbit", f"{ctx.config.algebra} has no sphere orbits")
        return run(reducer, ctx.config)

    return entry


def _gns_entry(run: Callable[[GNSRepresentation, SuiteContext], CheckResult]) -> Entry:
    def entry(ctx: SuiteContext) -> CheckResult:
        gns = ctx.gns()
        if gns is None:
            return skipped("gns", f"{ctx.config.algebra} has no sphere orbits")
        return run(gns, ctx)

    return entry


def _vdeg(gns: GNSRepresentation, ctx: SuiteContext) -> int:
    return min(ctx.config.vector_degree, gns.budget // 2)


def _group_axioms(ctx: SuiteContext) -> CheckResult:
    return universal_checks.check_universal_group_axioms(
        [ctx.spectator_action, ctx.axb_action]
    )


def _ralpha(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    return combine_results(
        "ralpha",
        universal_checks.REFERENCES["ralpha"],
        [
            universal_checks.check_ralpha(
                ctx.spectator_action, min(c.degree, 3), c.sample_count, c.seed
            ),
            universal_checks.check_ralpha(ctx.axb_action, 2, c.sample_count, c.seed),
        ],
    )


def _moyal_recovery(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    return universal_checks.check_moyal_recovery(
        min(c.degree, 4), c.sample_count, c.seed
    )


def _universal_order(ctx: SuiteContext) -> int:
    return ctx.config.order if ctx.config.order is not None else ctx.config.degree


def _starx_assoc(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    action = ctx.spectator_action
    moyal = MoyalGroupProduct(action.group, _universal_order(ctx))
    count = min(c.sample_count, 12)
    return combine_results(
        "starx-assoc",
        universal_checks.REFERENCES["starx-assoc"],
        [
            universal_checks.check_starx_associativity(
                moyal, action, min(c.degree, 2), c.sample_count, c.seed
            ),
            universal_checks.check_starx_associativity(
                ctx.bm_product(),
                ctx.axb_action,
                1,
                count,
                c.seed,
                invariance="left",
            ),
        ],
    )


def _tangential(ctx: SuiteContext) -> CheckResult:
    action = ctx.spectator_action
    moyal = MoyalGroupProduct(action.group, _universal_order(ctx))
    return universal_checks.check_tangential(moyal, action, min(ctx.config.degree, 3))


def _bi_invariance(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    action = ctx.translation_action
    group = action.group
    space = action.space
    group_polys = universal_checks.monomials_in(space, group.coordinates, 2)
    group_pairs = universal_checks.pick(
        [(f, g) for f in group_polys for g in group_polys], c.sample_count, c.seed
    )
    x_polys = universal_checks.monomials_in(space, action.x_coordinates, 2)
    x_pairs = universal_checks.pick(
        [(f, g) for f in x_polys for g in x_polys], c.sample_count, c.seed
    )
    bm = ctx.bm_product()
    axb_polys = universal_checks.axb_samples(bm.group.space, 1, max_m=1)
    axb_pairs = universal_checks.pick(
        [(f, g) for f in axb_polys for g in axb_polys],
        min(c.sample_count, 12),
        c.seed,
    )
    return combine_results(
        "bi-invariance",
        universal_checks.REFERENCES["bi-invariance"],
        [
            universal_checks.check_bi_invariance(
                MoyalGroupProduct(group, _universal_order(ctx)),
                action,
                group_pairs,
                x_pairs,
            ),
            universal_checks.check_bi_invariance(
                PointwiseGroupProduct(group, _universal_order(ctx)),
                action,
                group_pairs,
                x_pairs,
            ),
            universal_checks.check_bi_invariance(bm, ctx.axb_action, axb_pairs),
        ],
    )


def _left_universal(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    action = ctx.translation_action
    right_moyal = MoyalGroupProduct(
        action.group, _universal_order(ctx), invariance="right"
    )
    return combine_results(
        "left-universal",
        universal_checks.REFERENCES["left-universal"],
        [
            universal_checks.check_left_universal(
                right_moyal, action, min(c.degree, 2), c.sample_count, c.seed
            ),
            universal_checks.check_left_universal(
                inversion_conjugate(ctx.bm_product()),
                ctx.axb_action,
                1,
                min(c.sample_count, 12),
                c.seed,
            ),
        ],
    )


def _main_trace(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    return universal_checks.check_main_trace(
        ctx.translation_action,
        _universal_order(ctx),
        min(c.degree, 2),
        c.sample_count,
        c.seed,
    )


def _t_operator(ctx: SuiteContext) -> CheckResult:
    T = ctx.t_operator()
    samples = universal_checks.axb_samples(T.space, 2)
    return universal_checks.check_t_operator(T, samples)


def _bm_assoc(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    star = ctx.bm_product()
    samples = universal_checks.axb_samples(star.group.space, 3)
    return universal_checks.check_bm_associativity(
        star, samples, c.sample_count, c.seed
    )


def _inner_derivation(ctx: SuiteContext) -> CheckResult:
    T = ctx.t_operator(ctx.config.inner_derivation_order)
    return universal_checks.check_inner_derivation(ctx.axb_action.group, T)


def _bm_trace(ctx: SuiteContext) -> CheckResult:
    c = ctx.config
    star = ctx.bm_product()
    samples = universal_checks.axb_samples(star.group.space, 2)
    return universal_checks.check_bm_trace(star, samples, c.sample_count, c.seed)


IDENTITIES: Dict[str, Tuple[str, Entry]] = {
    "structure": ("algebra", _structure),
    "unimodular": ("algebra", _unimodular),
    "assoc": ("star", _assoc),
    "strong-inv": ("star", _bch_only("strong-inv", _strong_inv)),
    "homog": ("star", _bch_only("homog", _homog)),
    "covariance": ("star", _bch_only("covariance", _covariance)),
    "hermitian": ("star", _hermitian),
    "exp-bch": ("star", _bch_only("exp-bch", _exp_bch)),
    "closedness": ("star", _closedness),
    "invariant-trace": ("star", _bch_only("invariant-trace", _invariant_trace)),
    "projection": ("star", _projection),
    "koszul": (
        "orbit",
        _orbit_entry(lambda r, c: orbit_checks.check_koszul(r, c.degree)),
    ),
    "deformed-koszul": (
        "orbit",
        _orbit_entry(
            lambda r, c: orbit_checks.check_deformed_koszul(
                r, c.degree, c.sample_count, c.seed
            )
        ),
    ),
    "orbit-assoc": (
        "orbit",
        _orbit_entry(
            lambda r, c: orbit_checks.check_orbit_associativity(
                r, c.class_degree, c.sample_count, c.seed
            )
        ),
    ),
    "orbit-hermitian": (
        "orbit",
        _orbit_entry(
            lambda r, c: orbit_checks.check_orbit_hermitian(
                r, c.class_degree, c.sample_count, c.seed
            )
        ),
    ),
    "orbit-poisson": (
        "orbit",
        _orbit_entry(
            lambda r, c: orbit_checks.check_orbit_poisson(
                r, c.class_degree, c.sample_count, c.seed
            )
        ),
    ),
    "equivariance": (
        "orbit",
        _orbit_entry(lambda r, c: orbit_checks.check_equivariance(r, c.degree)),
    ),
    "trace": (
        "orbit",
        _orbit_entry(
            lambda r, c: orbit_checks.check_orbit_trace(
                r, c.class_degree, max(c.sample_count, 50), c.seed
            )
        ),
    ),
    "positivity": (
        "orbit",
        _orbit_entry(lambda r, c: orbit_checks.check_positivity(r, c.seed)),
    ),
    "gns-homomorphism": (
        "gns",
        _gns_entry(
            lambda g, ctx: gns_checks.check_homomorphism(g, 2, _vdeg(g, ctx))
        ),
    ),
    "gns-star": (
        "gns",
        _gns_entry(
            lambda g, ctx: gns_checks.check_star_representation(
                g, 2, _vdeg(g, ctx)
            )
        ),
    ),
    "commutant": (
        "gns",
        _gns_entry(
            lambda g, ctx: gns_checks.check_commutant(
                g,
                sample_polynomials(ctx.algebra, 1, 3, ctx.config.seed),
                _vdeg(g, ctx),
            )
        ),
    ),
    "g-relations": (
        "gns",
        _gns_entry(
            lambda g, ctx: gns_checks.check_g_relations(
                g, ctx.algebra, _vdeg(g, ctx)
            )
        ),
    ),
    "gns-unitary": (
        "gns",
        _gns_entry(lambda g, ctx: gns_checks.check_unitarity(g, _vdeg(g, ctx))),
    ),
    "group-axioms": ("universal", _group_axioms),
    "ralpha": ("universal", _ralpha),
    "moyal-recovery": ("universal", _moyal_recovery),
    "starx-assoc": ("universal", _starx_assoc),
    "tangential": ("universal", _tangential),
    "bi-invariance": ("universal", _bi_invariance),
    "left-universal": ("universal", _left_universal),
    "main-trace": ("universal", _main_trace),
    "t-operator": ("universal", _t_operator),
    "bm-assoc": ("universal", _bm_assoc),
    "inner-derivation": ("universal", _inner_derivation),
    "bm-trace": ("universal", _bm_trace),
}


def identities_in(group: str) -> List[str]:
    """Identity names of one package group, in registry order.

    Raises:
        SuiteError: When the group is unknown
    """
    if group not in GROUPS:
        raise SuiteError(f"Unknown identity group {group!r}")
    return [name for name, (g, _) in IDENTITIES.items() if g == group]


def selected_identities(names: List[str]) -> List[str]:
    """Expand group names and validate identity names; empty means all.

    Raises:
        SuiteError: When a name is neither an identity nor a group
    """
    if not names:
        return list(IDENTITIES)
    out: List[str] = []
    for name in names:
        if name in GROUPS:
            expanded = identities_in(name)
        elif name in IDENTITIES:
            expanded = [name]
        else:
            raise SuiteError(f"Unknown identity {name!r}")
        out += [n for n in expanded if n not in out]
    return out


def _warm_cache(ctx: SuiteContext) -> Optional[TableCache]:
    directory = ctx.config.cache_directory
    if not directory:
        return None
    cache = TableCache(directory)
    cache.load(ctx.algebra, ctx.config.degree)
    return cache


def run_suite(config: SuiteConfig) -> Report:
    """Run the selected identities in a thread pool.

    Raises:
        SuiteError: When the identity selection is invalid
        LieAlgebraError: When the algebra source cannot be resolved
    """
    names = selected_identities(config.identities)
    ctx = SuiteContext(config)
    ctx.algebra
    cache = _warm_cache(ctx)
    checks = [
        FunctionCheck(name, (lambda entry=IDENTITIES[name][1]: entry(ctx)))
        for name in names
    ]
    logger.info(f"Running {len(checks)} identities on {config.algebra}")
    records = CheckRunner(checks, workers=config.workers).run_all()
    if cache is not None:
        try:
            cache.store(ctx.algebra, config.degree)
        except CacheIOError as e:
            logger.warning(f"{e}; continuing without cache")
    passed, failed = summarize(records)
    logger.info(f"Suite finished: {passed} passed, {failed} failed")
    return Report(config, records)
