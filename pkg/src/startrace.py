#!/usr/bin/env python3
"""startrace - Main Entry Point.

Exact checks of star products, traces, orbit reduction, GNS
representations and universal deformations from the command line.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add project root to path for absolute imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src import __version__
from src.core.checks import CheckRunner, serialize
from src.core.config import Configuration, ConfigurationError
from src.lie.algebra import (
    AlgebraValidationError,
    LieAlgebraError,
    unimodular,
)
from src.lie.loader import resolve_algebra
from src.orbit.reduction import (
    DEFAULT_ORBIT_ORDER,
    OrbitReducer,
    OrbitReductionError,
    parse_radius,
)
from src.poisson.polynomial import PoissonPolyError, PolyG, monomials_up_to
from src.reports.renderer import dumps, render, render_records_text
from src.reports.suite import SuiteConfig, SuiteContext, SuiteError, run_suite
from src.star.moyal import darboux_aliases


logger = logging.getLogger("startrace")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

CONFIG_ERRORS = (
    ConfigurationError,
    SuiteError,
    LieAlgebraError,
    OrbitReductionError,
    PoissonPolyError,
)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        help="Path to configuration file (default: auto-detect config.yaml)",
    )
    common.add_argument(
        "--algebra", help="Catalog name or algebra file (overrides suite.algebra)"
    )
    common.add_argument(
        "--star",
        choices=("bch", "moyal", "pointwise"),
        help="Star product for the star identities",
    )
    common.add_argument("--order", type=int, help="Lambda truncation order")
    common.add_argument("--degree", type=int, help="Degree bound of samples")
    common.add_argument(
        "--r2", help='Orbit radius squared: "symbolic" or a positive rational'
    )
    common.add_argument(
        "--suite",
        help="Comma-separated identity or group names to run",
    )
    common.add_argument("--seed", type=int, help="Seed of the sample selection")
    common.add_argument("--cache-dir", help="Persistent table cache directory")
    common.add_argument(
        "--format", choices=("json", "text"), help="Report format"
    )
    common.add_argument(
        "--verbose", "-v", action="store_true", help="Log at DEBUG level"
    )
    return common


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments.

    Returns:
        Parsed arguments namespace
    """
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="startrace",
        description="Exact verification of deformation quantization identities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s algebra validate --algebra my_algebra.yaml
  %(prog)s star mul "xi1" "xi2" --algebra su2
  %(prog)s star table --degree 2 --algebra heisenberg3
  %(prog)s star verify --suite assoc,closedness --algebra aff1
  %(prog)s orbit trace "xi3**2" --r2 1 --order 4
  %(prog)s universal verify --format text

Exit codes: 0 all identities hold, 1 an identity failed, 2 configuration error.
        """,
    )
    parser.add_argument(
        "--version", action="version", version=f"startrace v{__version__}"
    )
    commands = parser.add_subparsers(dest="group", required=True)

    algebra = commands.add_parser("algebra", help="Lie algebra input")
    algebra_actions = algebra.add_subparsers(dest="action", required=True)
    algebra_actions.add_parser(
        "validate", parents=[common], help="Check antisymmetry and Jacobi"
    )
    algebra_actions.add_parser(
        "info", parents=[common], help="Print the canonical algebra data"
    )

    star = commands.add_parser("star", help="Star products on g*")
    star_actions = star.add_subparsers(dest="action", required=True)
    mul = star_actions.add_parser(
        "mul", parents=[common], help="Multiply two polynomials"
    )
    mul.add_argument("left", help='Polynomial such as "xi1*xi2 + nu*xi3"')
    mul.add_argument("right", help="Second polynomial")
    star_actions.add_parser(
        "table", parents=[common], help="Monomial product table as JSON"
    )
    star_actions.add_parser(
        "verify", parents=[common], help="Run the star identities"
    )

    orbit = commands.add_parser("orbit", help="Reduction to the su(2) spheres")
    orbit_actions = orbit.add_subparsers(dest="action", required=True)
    reduce_parser = orbit_actions.add_parser(
        "reduce", parents=[common], help="Deformed restriction of a polynomial"
    )
    reduce_parser.add_argument("polynomial", help="Polynomial on g*")
    trace_parser = orbit_actions.add_parser(
        "trace", parents=[common], help="Positive trace of a polynomial"
    )
    trace_parser.add_argument("polynomial", help="Polynomial on g*")
    orbit_actions.add_parser(
        "verify", parents=[common], help="Run the orbit identities"
    )

    gns = commands.add_parser("gns", help="GNS representation")
    gns_actions = gns.add_subparsers(dest="action", required=True)
    gns_actions.add_parser(
        "verify", parents=[common], help="Run the GNS identities"
    )

    universal = commands.add_parser(
        "universal", help="Universal deformations of group actions"
    )
    universal_actions = universal.add_subparsers(dest="action", required=True)
    universal_actions.add_parser(
        "verify", parents=[common], help="Run the universal identities"
    )

    return parser.parse_args(argv)


def configure_logging(config: Configuration, verbose: bool) -> None:
    level = "DEBUG" if verbose else config.get_log_level()
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def suite_config(
    config: Configuration, args: argparse.Namespace, group: Optional[str]
) -> SuiteConfig:
    """Merge configuration and command line; flags win.

    Raises:
        SuiteError: When a bound is out of range or a name is unknown
    """
    identities: Optional[List[str]] = None
    if args.suite:
        identities = [n.strip() for n in args.suite.split(",") if n.strip()]
    elif group is not None:
        identities = [group]
    return SuiteConfig.from_configuration(
        config,
        algebra=args.algebra,
        star=args.star,
        identities=identities,
        degree=args.degree,
        order=args.order,
        seed=args.seed,
        r2=args.r2,
        cache_directory=args.cache_dir,
        output_format=args.format,
    )


def _emit(data: Any) -> None:
    print(dumps(data), end="")


def algebra_validate(suite: SuiteConfig) -> int:
    """Validate the algebra source and report unimodularity."""
    try:
        algebra = resolve_algebra(suite.algebra)
    except AlgebraValidationError as e:
        records = [
            {
                "name": "structure",
                "status": "FAILED",
                "message": f"{len(e.violations)} structure violations",
                "first_defect": [v.describe() for v in e.violations],
            }
        ]
        _print_records(records, suite.output_format)
        return EXIT_FAIL

    result = unimodular(algebra)
    records = [
        {
            "name": "structure",
            "status": "PASSED",
            "message": f"{algebra.name} satisfies antisymmetry and Jacobi",
        },
        {
            "name": "unimodular",
            "status": "PASSED" if result.unimodular else "WARNING",
            "message": (
                f"{algebra.name} is unimodular"
                if result.unimodular
                else f"tr ad(e{result.witness}) = {result.trace}"
            ),
        },
    ]
    _print_records(records, suite.output_format)
    return EXIT_PASS


def _print_records(records: List[Dict[str, Any]], output_format: str) -> None:
    if output_format == "text":
        for line in render_records_text(records):
            print(line)
    else:
        _emit({"records": serialize(records)})


def algebra_info(suite: SuiteConfig) -> int:
    algebra = resolve_algebra(suite.algebra)
    result = unimodular(algebra)
    data = algebra.to_json()
    data["key"] = algebra.key()
    data["abelian"] = algebra.is_abelian()
    data["unimodular"] = result.unimodular
    _emit(data)
    return EXIT_PASS


def _star_operands(suite: SuiteConfig) -> Dict[str, Any]:
    """Product, algebra and parsing aliases of the selected star."""
    ctx = SuiteContext(suite)
    aliases = darboux_aliases(suite.translations) if suite.star == "moyal" else None
    return {
        "star": ctx.star_product(),
        "algebra": ctx.star_algebra,
        "aliases": aliases,
    }


def star_mul(suite: SuiteConfig, left: str, right: str) -> int:
    operands = _star_operands(suite)
    f = PolyG.parse(operands["algebra"], left, operands["aliases"])
    g = PolyG.parse(operands["algebra"], right, operands["aliases"])
    product = operands["star"].multiply(f, g)
    if suite.output_format == "text":
        print(product)
    else:
        _emit(
            {
                "star": suite.star,
                "order": suite.order,
                "left": f.to_json(),
                "right": g.to_json(),
                "product": product.to_json(),
            }
        )
    return EXIT_PASS


def star_table(suite: SuiteConfig) -> int:
    """Products of all monomial pairs with total degree <= the bound."""
    operands = _star_operands(suite)
    algebra = operands["algebra"]
    star = operands["star"]
    monomials = monomials_up_to(algebra.dim, suite.degree)
    rows = []
    for alpha in monomials:
        for gamma in monomials:
            if sum(alpha) + sum(gamma) > suite.degree:
                continue
            product = star.multiply(
                PolyG.monomial(algebra, alpha), PolyG.monomial(algebra, gamma)
            )
            rows.append(
                {
                    "left": list(alpha),
                    "right": list(gamma),
                    "product": product.to_json(),
                }
            )
    _emit(
        {
            "algebra": algebra.name,
            "star": suite.star,
            "degree": suite.degree,
            "order": suite.order,
            "table": rows,
        }
    )
    return EXIT_PASS


def _reducer(suite: SuiteConfig) -> OrbitReducer:
    return OrbitReducer(
        resolve_algebra(suite.algebra),
        parse_radius(suite.r2),
        order=suite.order if suite.order is not None else DEFAULT_ORBIT_ORDER,
    )


def orbit_reduce(suite: SuiteConfig, text: str) -> int:
    reducer = _reducer(suite)
    f = PolyG.parse(reducer.algebra, text)
    _emit(
        {
            "input": f.to_json(),
            "restriction": reducer.restrict(f).to_json(),
            "deformed_restriction": reducer.deformed_restrict(f).to_json(),
        }
    )
    return EXIT_PASS


def orbit_trace(suite: SuiteConfig, text: str) -> int:
    reducer = _reducer(suite)
    f = PolyG.parse(reducer.algebra, text)
    value = reducer.positive_trace(f)
    if suite.output_format == "text":
        print(value)
    else:
        _emit(
            {
                "input": f.to_json(),
                "r2": str(reducer.radius),
                "trace": serialize(value),
            }
        )
    return EXIT_PASS


def verify(suite: SuiteConfig) -> int:
    report = run_suite(suite)
    print(render(report, suite.output_format), end="")
    return EXIT_PASS if CheckRunner.all_passed(report.records) else EXIT_FAIL


def dispatch(args: argparse.Namespace, config: Configuration) -> int:
    """Run one subcommand.

    Raises:
        SuiteError, LieAlgebraError, OrbitReductionError, PoissonPolyError:
            When the request cannot be carried out
    """
    group = args.group if args.action == "verify" else None
    suite = suite_config(config, args, group)
    logger.debug(f"Running {args.group} {args.action} on {suite.algebra}")

    if args.group == "algebra":
        if args.action == "validate":
            return algebra_validate(suite)
        return algebra_info(suite)
    if args.action == "verify":
        return verify(suite)
    if args.group == "star":
        if args.action == "mul":
            return star_mul(suite, args.left, args.right)
        return star_table(suite)
    if args.action == "reduce":
        return orbit_reduce(suite, args.polynomial)
    return orbit_trace(suite, args.polynomial)


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point.

    Returns:
        Exit code (0 pass, 1 failure, 2 configuration error)
    """
    try:
        args = parse_arguments(argv)

        try:
            config = Configuration(args.config)
        except ConfigurationError as e:
            print(f"❌ Configuration error: {e}", file=sys.stderr)
            return EXIT_CONFIG

        configure_logging(config, args.verbose)

        try:
            return dispatch(args, config)
        except CONFIG_ERRORS as e:
            print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_CONFIG

    except KeyboardInterrupt:
        print("\n\n👋 Operation cancelled by user.")
        return 130

    except Exception as e:
        print(f"\n❌ Unexpected error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
