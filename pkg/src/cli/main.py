"""conelab command line: one subcommand per analysis, JSON on stdout."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from src import __version__
from src.classify import ClassifyOptions
from src.cli import commands
from src.cli.gallery import run_gallery, write_figures
from src.config import config
from src.errors import ConelabError, DimensionError, ParseError
from src.logger import get_logger, set_level

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3

VALUE_OPTIONS = frozenset({"--at", "--region", "--patch", "--union", "--order"})


def cmd_gallery(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    report, runs = run_gallery(
        options,
        name_filter=args.filter,
        numeric_demo=args.numeric_demo,
        timings=getattr(args, "timings", False),
    )
    for directory in {args.svg, args.csv} - {None}:
        write_figures(runs, directory)
    return report.model_dump(mode="json", by_alias=True, exclude_none=True)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed for sampled quantities")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="Angular tolerance in radians")
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS, help="Sphere samples for sign tests")
    common.add_argument("--resolution", type=float, default=argparse.SUPPRESS, help="Finest grid spacing")
    common.add_argument(
        "--json",
        nargs="?",
        const="-",
        default=argparse.SUPPRESS,
        metavar="OUT",
        help="Write the JSON result to OUT instead of stdout",
    )
    common.add_argument("--quiet", "-q", action="store_true", default=argparse.SUPPRESS, help="Only warnings on stderr")
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS, help="Report wall-clock times")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Subcommands share the global flags, which may appear before or after the subcommand."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="conelab",
        description="Tangent cones and regularity verdicts at points of real algebraic hypersurfaces",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help_text: str, expr: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if expr:
            p.add_argument("expr", help="Polynomial in x, y[, z], e.g. 'y^2 - x^3'")
        p.set_defaults(handler=handler)
        return p

    def add_variety_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--patch", action="append", default=[], metavar="INEQ", help="Constraint g > 0 on the first patch")
        p.add_argument("--union", action="append", default=[], metavar="EQ;INEQ", help="Further patch 'EQ;INEQ;...'")

    add("parse", commands.cmd_parse, "Parse and normalize a polynomial")

    p = add("leading-form", commands.cmd_leading_form, "Leading form at a point and its factorization")
    p.add_argument("--at", required=True, metavar="POINT", help="Point such as 0,0 or -1,1/2")

    p = add("cone", commands.cmd_cone, "Algebraic and sampled tangent cone")
    p.add_argument("--at", required=True, metavar="POINT")
    add_variety_flags(p)

    p = add("multiplicity", commands.cmd_multiplicity, "Density ratio against the tangent cone")
    p.add_argument("--at", required=True, metavar="POINT")
    p.add_argument("--csv", metavar="FILE", help="Write the r, measure, ratio table")
    add_variety_flags(p)

    p = add("puiseux", commands.cmd_puiseux, "Puiseux branches of a plane curve germ")
    p.add_argument("--at", metavar="POINT", help="Default: the origin")
    p.add_argument("--order", metavar="Q", help="Truncation order, a rational")

    p = add("support", commands.cmd_support, "Support radii, convexity and normal modulus of a sampled hypersurface")
    p.add_argument("--region", required=True, metavar="BOX", help="Box a:b,c:d[,e:f]")
    p.add_argument("--spacing", type=float, help="Sample spacing (default: box scale / 200 in the plane, / 40 in space)")
    p.add_argument("--csv", metavar="FILE", help="Write the sample cloud")
    p.add_argument("--per-sample", action="store_true", help="Include per-sample radii")

    p = add("closure", commands.cmd_closure, "Points at infinity of the projective closure")
    p.add_argument("--region", metavar="BOX", help="Also test convexity and the entire-graph property")
    p.add_argument("--spacing", type=float)

    p = add("classify", commands.cmd_classify, "Regularity verdict at a point or at every singular point of a curve")
    target = p.add_mutually_exclusive_group()
    target.add_argument("--at", metavar="POINT")
    target.add_argument("--region", metavar="BOX", help="Classify all rational singular points of a curve in the box")
    add_variety_flags(p)

    p = add("gallery", cmd_gallery, "Run the built-in corpus and check every stored expectation", expr=False)
    p.add_argument("--filter", metavar="TEXT", help="Only entries whose name contains TEXT")
    p.add_argument("--svg", metavar="DIR", help="Write one SVG figure per entry")
    p.add_argument("--csv", metavar="DIR", help="Write density tables")
    p.add_argument("--numeric-demo", action="store_true", help="Also run the non-algebraic convex curve demo")
    return parser


def attach_option_values(argv: Sequence[str]) -> list[str]:
    """Join a value option with a following value that starts with a single dash, e.g. ``--region -2:2,-1:1``."""
    tokens = list(argv)
    joined = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        following = tokens[i + 1] if i + 1 < len(tokens) else None
        if token in VALUE_OPTIONS and following is not None and following.startswith("-") and not following.startswith("--"):
            joined.append(f"{token}={following}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def _json_default(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def emit(payload, destination: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=_json_default)
    if destination in (None, "-"):
        sys.stdout.write(text + "\n")
        return
    path = Path(destination)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"result written to {path}")


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch to the handler and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(attach_option_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT

    if getattr(args, "quiet", False):
        set_level(logging.WARNING)

    errors = config.validate()
    if errors:
        logger.error("Configuration errors:")
        for error in errors:
            logger.error(f"  - {error}")
        return EXIT_INPUT

    try:
        options = commands.options_from_args(args)
        started = time.perf_counter()
        payload = args.handler(args, options)
        if getattr(args, "timings", False) and isinstance(payload, dict) and args.command != "gallery":
            payload["timings"] = {"total_seconds": time.perf_counter() - started}
    except (ParseError, DimensionError, ValueError) as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_INPUT
    except ConelabError as exc:
        logger.error(f"{args.command}: {exc}")
        return EXIT_ANALYSIS
    except OSError as exc:
        logger.error(f"{args.command}: cannot write output: {exc}")
        return EXIT_INPUT

    try:
        emit(payload, getattr(args, "json", None))
    except OSError as exc:
        logger.error(f"{args.command}: cannot write output: {exc}")
        return EXIT_INPUT
    if args.command == "gallery" and not payload.get("ok", False):
        logger.error(f"gallery: {payload['failed']} of {len(payload['results'])} entries failed")
        return EXIT_MISMATCH
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
