"""Subcommand handlers: each takes parsed arguments and returns a JSON-ready payload."""

from __future__ import annotations

import argparse
from dataclasses import replace
from fractions import Fraction
from typing import Sequence

from src.classify import ClassifyOptions, classify_curve, classify_point
from src.cone import (
    FlatCone,
    algebraic_cone,
    cone_is_flat,
    flat_normal,
    is_symmetric,
    sampled_cone,
)
from src.cone.descriptors import ConeDescriptor
from src.errors import IsolatedPointError, ParseError
from src.expr import NumericPolynomial, parse, square_free_factor
from src.logger import get_logger
from src.measure import MultiplicityEstimate, Variety, check_on_variety, local_equation, multiplicity
from src.projective import entire_graph_direction, projective_closure, recession_cone_sample, assess_strict_convexity
from src.puiseux import classify_germ, expand_germ
from src.support import Box, assess_convexity, normal_modulus, positive_support, sample_surface

logger = get_logger(__name__)


def parse_point(text: str) -> tuple[Fraction, ...]:
    """Comma-separated rationals such as "0,1/2"."""
    coordinates = []
    offset = 0
    for piece in text.split(","):
        try:
            coordinates.append(Fraction(piece.strip()))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad point coordinate {piece.strip()!r}", offset) from None
        offset += len(piece.encode("utf-8")) + 1
    return tuple(coordinates)


def parse_region(text: str) -> Box:
    try:
        return Box.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def build_variety(expr: str, constraints: Sequence[str] = (), unions: Sequence[str] = ()) -> Variety:
    """First patch from EXPR and --patch inequalities, one more patch per "EQ;INEQ;..." union argument."""
    patches = [(expr, list(constraints))]
    for union in unions:
        equation, *rest = [piece.strip() for piece in union.split(";")]
        patches.append((equation, [c for c in rest if c]))
    return Variety.from_text(patches)


def options_from_args(args: argparse.Namespace) -> ClassifyOptions:
    """Global flags override the configured defaults."""
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        overrides["angular_tol"] = args.tol
    if getattr(args, "samples", None) is not None:
        overrides["sphere_samples"] = args.samples
    if getattr(args, "resolution", None) is not None:
        overrides["resolution"] = args.resolution
    return replace(ClassifyOptions(), **overrides)


def default_spacing(region: Box, per_side: tuple[int, int] = (200, 40)) -> float:
    return region.scale / (per_side[0] if region.dimension == 2 else per_side[1])


def measurement_cone(V: Variety, p: Sequence, options: ClassifyOptions) -> ConeDescriptor:
    """Flat cone when the leading form or the sampled cone is a hyperplane, else the sampled cone."""
    equation = local_equation(V, p)
    normal, _ = flat_normal(algebraic_cone(equation, p), options.sphere_samples, options.seed)
    if normal is not None:
        return FlatCone.of(normal)
    cone = sampled_cone(V, p, tolerance=options.angular_tol, seed=options.seed)
    normal = cone_is_flat(cone, options.angular_tol)
    return FlatCone.of(normal) if normal is not None else cone


def measure_multiplicity(V: Variety, p: Sequence, options: ClassifyOptions) -> MultiplicityEstimate:
    cone = measurement_cone(V, p, options)
    return multiplicity(V, p, cone, resolution=options.resolution)


def cmd_parse(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    f = parse(args.expr)
    return {
        "input": args.expr,
        "variables": list(f.variables),
        "polynomial": str(f),
        "degree": f.degree,
        "terms": len(f.terms),
    }


def cmd_leading_form(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    f = parse(args.expr)
    p = parse_point(args.at)
    h = algebraic_cone(f, p)
    factors = square_free_factor(h.base)
    return {
        "point": [str(x) for x in p],
        "leading_form": str(h),
        "degree": h.degree,
        "constant": str(factors.constant),
        "factors": [{"factor": str(g), "multiplicity": k} for g, k in factors.factors],
    }


def cmd_cone(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    V = build_variety(args.expr, args.patch, args.union)
    p = parse_point(args.at)
    check_on_variety(V, p, tol=0.0)
    equation = local_equation(V, p)
    h = algebraic_cone(equation, p)
    normal, locus = flat_normal(h, options.sphere_samples, options.seed)
    cone = sampled_cone(V, p, tolerance=options.angular_tol, seed=options.seed)
    directions = cone.as_array()
    residual = NumericPolynomial(h.base).value(directions) if len(directions) else []
    return {
        "point": [str(x) for x in p],
        "leading_form": str(h),
        "degree": h.degree,
        "sign_locus": locus.to_dict() if locus is not None else None,
        "flat_normal": [float(x) for x in normal] if normal is not None else None,
        "sampled": cone.to_dict(),
        "drift": [list(d) for d in cone.drift],
        "containment_residual": float(max(abs(r) for r in residual)) if len(residual) else None,
        "symmetric": is_symmetric(cone, options.angular_tol),
    }


def cmd_multiplicity(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    V = build_variety(args.expr, args.patch, args.union)
    p = parse_point(args.at)
    check_on_variety(V, p, tol=0.0)
    estimate = measure_multiplicity(V, p, options)
    if args.csv:
        estimate.numerator.to_csv(args.csv)
        logger.info(f"density table written to {args.csv}")
    return {
        "point": [str(x) for x in p],
        "multiplicity": estimate.value,
        "density": estimate.numerator.to_dict(),
        "cone_density": estimate.denominator.liminf_estimate,
    }


def cmd_puiseux(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    f = parse(args.expr)
    p = parse_point(args.at) if args.at else (0,) * f.nvars
    order = Fraction(args.order) if args.order else None
    try:
        report = classify_germ(f, p, order)
    except IsolatedPointError as exc:
        logger.warning(str(exc))
        data = expand_germ(f.translate(p), order).to_dict()
        data["verdict"] = "isolated"
        return data
    return report.to_dict()


def cmd_support(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    f = parse(args.expr)
    region = parse_region(args.region)
    spacing = args.spacing or default_spacing(region)
    S = sample_surface(f, region, spacing, options.seed, options.threads)
    if args.csv:
        S.to_csv(args.csv)
        logger.info(f"{len(S)} samples written to {args.csv}")
    report = positive_support(S, threads=options.threads)
    convexity = assess_convexity(S)
    data = {
        "sampling": S.to_dict(),
        "support": report.to_dict(per_sample=args.per_sample),
        "convexity": convexity.to_dict(S),
        "normal_modulus": normal_modulus(S).to_dict(),
    }
    if convexity.convex:
        data["strict_convexity"] = assess_strict_convexity(S, convexity).to_dict()
    return data


def cmd_closure(args: argparse.Namespace, options: ClassifyOptions) -> dict:
    f = parse(args.expr)
    report = projective_closure(f, options.sphere_samples, options.threads)
    data = report.to_dict()
    data["singular_count"] = len(report.singular_points)
    if args.region:
        region = parse_region(args.region)
        S = sample_surface(f, region, args.spacing or default_spacing(region), options.seed, options.threads)
        convexity = assess_convexity(S)
        data["convexity"] = convexity.to_dict()
        if convexity.convex:
            data["recession_cone"] = recession_cone_sample(S, convexity=convexity, seed=options.seed).to_dict()
        data["entire_graph"] = entire_graph_direction(f, S, seed=options.seed, convexity=convexity).to_dict()
    return data


def cmd_classify(args: argparse.Namespace, options: ClassifyOptions) -> dict | list:
    V = build_variety(args.expr, args.patch, args.union)
    if args.region:
        if not V.is_single_patch or V.patches[0].constraints:
            raise ParseError("--region classifies a single unconstrained curve", 0)
        region = parse_region(args.region)
        results = classify_curve(V.patches[0].equation, region, options, options.threads)
        return [verdict.to_json_dict() for _, verdict in results]
    if not args.at:
        raise ParseError("classify needs --at POINT or --region BOX", 0)
    return classify_point(V, parse_point(args.at), options).to_json_dict()

