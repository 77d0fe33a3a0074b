"""Gallery corpus: entries, expectation checks and the run report."""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src import __version__
from src.classify import ClassifyOptions, Verdict, VerdictClass, classify_curve, classify_point
from src.classify.verdict import Rule
from src.cli.commands import measure_multiplicity, parse_point, parse_region
from src.cli.plots import FigureData, curve_figure, render_svg, support_circles, surface_slice_figure
from src.errors import ConelabError
from src.expr import leading_form, parse
from src.expr.numeric import horseshoe_field
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.measure import MultiplicityEstimate, Variety
from src.projective import (
    entire_graph_direction,
    equivalent_quadratic_cones,
    homogenize,
    projective_closure,
    recession_cone_sample,
    swap_chart,
)
from src.support import SampledHypersurface, SupportReport, assess_convexity, positive_support, sample_surface

logger = get_logger(__name__)

CORPUS_PATH = Path(__file__).with_name("corpus.json")
EXPECTED_CORPUS_SIZE = 17
PER_SIDE = (200, 40)


class PatchSpec(BaseModel):
    equation: str
    constraints: list[str] = Field(default_factory=list)


class Tolerance(BaseModel):
    value: float
    rel_tol: float

    def accepts(self, observed: float) -> bool:
        return abs(observed - self.value) <= self.rel_tol * abs(self.value)


class CurvePoint(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    point: list[str]
    verdict_class: VerdictClass = Field(alias="class")


class CurveExpectation(BaseModel):
    region: str
    points: list[CurvePoint] = Field(default_factory=list)


class ClosureExpectation(BaseModel):
    singular: Optional[int] = None
    equivalent_to: Optional[str] = None
    asymptotes: Optional[list[str]] = None
    twin: Optional[str] = None


class EntireGraphExpectation(BaseModel):
    region: str
    verified: bool
    direction: Optional[list[float]] = None
    single_hits: Optional[int] = None


class SupportExpectation(BaseModel):
    region: str
    double_uniform_r: Optional[Tolerance] = None


class Expected(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    verdict_class: Optional[VerdictClass] = Field(default=None, alias="class")
    rule: Optional[Rule] = None
    multiplicity: Optional[Tolerance] = None
    density: Optional[Tolerance] = None
    hoelder: Optional[Tolerance] = None
    support_ratio: Optional[float] = None
    curve: Optional[CurveExpectation] = None
    closure: Optional[ClosureExpectation] = None
    entire_graph: Optional[EntireGraphExpectation] = None
    support: Optional[SupportExpectation] = None


class GalleryEntry(BaseModel):
    """One corpus item: a variety, the point to analyze and what must come out."""

    name: str
    patches: list[PatchSpec]
    point: list[str]
    source: str
    provenance: dict[str, str] = Field(default_factory=dict)
    expected: Expected
    tags: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def definition_parses(self) -> "GalleryEntry":
        try:
            variety = self.variety()
            parse_point(",".join(self.point))
        except ConelabError as exc:
            raise ValueError(f"entry {self.name!r} does not parse: {exc}") from exc
        if len(self.point) != variety.dimension:
            raise ValueError(f"entry {self.name!r}: point of length {len(self.point)} in R^{variety.dimension}")
        return self

    def variety(self) -> Variety:
        return Variety.from_text([(p.equation, p.constraints) for p in self.patches])

    def exact_point(self) -> tuple:
        return parse_point(",".join(self.point))


class CheckResult(BaseModel):
    name: str
    expected: Any
    observed: Any
    passed: bool


class EntryResult(BaseModel):
    name: str
    source: str
    tags: list[str]
    verdict: Optional[dict] = None
    measurements: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckResult] = Field(default_factory=list)
    passed: bool = False
    error: Optional[str] = None
    seconds: Optional[float] = None


class Report(BaseModel):
    """Outcome of a gallery run; deterministic given corpus, seed and options."""

    tool: str = "conelab"
    version: str = __version__
    seed: int
    options: dict[str, Any]
    corpus_size: int
    results: list[EntryResult]
    passed: int
    failed: int
    ok: bool
    numeric_demo: Optional[dict] = None
    timings: Optional[dict[str, float]] = None


@dataclass
class Artifacts:
    """Computed geometry kept for figures and tables, not serialized."""

    verdict: Verdict | None = None
    multiplicity: MultiplicityEstimate | None = None
    samples: SampledHypersurface | None = None
    support: SupportReport | None = None
    extra: dict = field(default_factory=dict)


@dataclass
class EntryRun:
    entry: GalleryEntry
    result: EntryResult
    artifacts: Artifacts


def load_corpus(path: str | Path = CORPUS_PATH) -> list[GalleryEntry]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [GalleryEntry.model_validate(item) for item in data["entries"]]


def same_up_to_scalar(a: Polynomial, b: Polynomial) -> bool:
    if a.is_zero or b.is_zero or set(a.terms) != set(b.terms):
        return False
    key = max(a.terms)
    ratio = b.terms[key] / a.terms[key]
    return a.scale(ratio) == b


def _check(name: str, expected: Any, observed: Any, passed: bool) -> CheckResult:
    if not passed:
        logger.warning(f"check {name}: expected {expected}, observed {observed}")
    return CheckResult(name=name, expected=expected, observed=observed, passed=bool(passed))


def _tolerance_check(name: str, tolerance: Tolerance, observed: float | None) -> CheckResult:
    passed = observed is not None and tolerance.accepts(observed)
    return _check(name, tolerance.model_dump(), observed, passed)


def check_verdict(entry: GalleryEntry, verdict: Verdict) -> list[CheckResult]:
    expected = entry.expected
    checks = []
    if expected.verdict_class is not None:
        checks.append(_check("class", expected.verdict_class.value, verdict.verdict_class.value,
                             verdict.verdict_class == expected.verdict_class))
    if expected.rule is not None:
        checks.append(_check("rule", expected.rule.value, verdict.rule.value, verdict.rule == expected.rule))
    if expected.hoelder is not None:
        fit = verdict.evidence.hoelder
        checks.append(_tolerance_check("hoelder", expected.hoelder, fit["exponent"] if fit else None))
    if expected.support_ratio is not None:
        reports = verdict.evidence.support or []
        ratio = None
        if len(reports) >= 2:
            coarse, fine = reports[0]["uniform_r"], reports[-1]["uniform_r"]
            ratio = coarse / fine if fine > 0 else float("inf")
        checks.append(_check("support_ratio", {"min": expected.support_ratio}, ratio,
                             ratio is not None and ratio >= expected.support_ratio))
    return checks


def check_multiplicity(entry: GalleryEntry, verdict: Verdict, options: ClassifyOptions, artifacts: Artifacts) -> list[CheckResult]:
    expected = entry.expected
    if expected.multiplicity is None and expected.density is None:
        return []
    value = density = None
    if verdict.evidence.multiplicity is not None:
        value = verdict.evidence.multiplicity["value"]
        density = verdict.evidence.multiplicity["density"]
    else:
        estimate = measure_multiplicity(entry.variety(), entry.exact_point(), options)
        artifacts.multiplicity = estimate
        value, density = estimate.value, estimate.numerator.liminf_estimate
    checks = []
    if expected.multiplicity is not None:
        checks.append(_tolerance_check("multiplicity", expected.multiplicity, value))
    if expected.density is not None:
        checks.append(_tolerance_check("density", expected.density, density))
    return checks


def check_curve(entry: GalleryEntry, options: ClassifyOptions) -> tuple[list[CheckResult], list]:
    expectation = entry.expected.curve
    if expectation is None:
        return [], []
    V = entry.variety()
    found = classify_curve(V.patches[0].equation, parse_region(expectation.region), options, options.threads)
    observed = [{"point": [str(x) for x in p], "class": v.verdict_class.value} for p, v in found]
    wanted = [{"point": c.point, "class": c.verdict_class.value} for c in expectation.points]
    return [_check("curve", wanted, observed, observed == wanted)], observed


def check_closure(entry: GalleryEntry, options: ClassifyOptions) -> tuple[list[CheckResult], dict]:
    expectation = entry.expected.closure
    if expectation is None:
        return [], {}
    f = entry.variety().patches[0].equation
    report = projective_closure(f, options.sphere_samples, options.threads)
    singular = report.singular_points
    checks = []
    if expectation.singular is not None:
        checks.append(_check("closure.singular", expectation.singular, len(singular), len(singular) == expectation.singular))
    if expectation.equivalent_to is not None:
        target = leading_form(parse(expectation.equivalent_to))
        quadratic = [p for p in singular if p.cone is not None and p.cone.degree == 2]
        observed = [list(p.signature) for p in quadratic if p.signature is not None]
        passed = bool(quadratic) and all(equivalent_quadratic_cones(p.cone, target) for p in quadratic)
        checks.append(_check("closure.equivalent_to", expectation.equivalent_to, observed, passed))
    if expectation.asymptotes is not None:
        wanted = [parse(text, f.variables) for text in expectation.asymptotes]
        found = list(report.asymptotes)
        matched = len(found) == len(wanted) and all(any(same_up_to_scalar(a, w) for a in found) for w in wanted)
        checks.append(_check("closure.asymptotes", expectation.asymptotes, [str(a) for a in found], matched))
    if expectation.twin is not None:
        twin = homogenize(parse(expectation.twin, f.variables))
        mine = homogenize(f)
        n = f.nvars
        swapped = swap_chart(mine, n - 1, n)
        passed = swapped.degree == twin.degree and same_up_to_scalar(swapped.base, twin.base)
        checks.append(_check("closure.twin", expectation.twin, str(swapped), passed))
    return checks, report.to_dict()


def check_entire_graph(entry: GalleryEntry, options: ClassifyOptions) -> tuple[list[CheckResult], dict]:
    expectation = entry.expected.entire_graph
    if expectation is None:
        return [], {}
    f = entry.variety().patches[0].equation
    region = parse_region(expectation.region)
    S = sample_surface(f, region, region.scale / PER_SIDE[0], options.seed, options.threads)
    result = entire_graph_direction(f, S, seed=options.seed)
    checks = [_check("entire_graph.verified", expectation.verified, result.verified, result.verified == expectation.verified)]
    if expectation.direction is not None:
        observed = list(result.direction) if result.direction else None
        close = observed is not None and max(abs(a - b) for a, b in zip(observed, expectation.direction)) <= options.angular_tol
        checks.append(_check("entire_graph.direction", expectation.direction, observed, close))
    if expectation.single_hits is not None:
        checks.append(_check("entire_graph.single_hits", expectation.single_hits, result.single_hits,
                             result.single_hits == expectation.single_hits))
    return checks, result.to_dict()


def check_support(entry: GalleryEntry, options: ClassifyOptions, artifacts: Artifacts) -> tuple[list[CheckResult], dict]:
    expectation = entry.expected.support
    if expectation is None:
        return [], {}
    region = parse_region(expectation.region)
    index = 0 if region.dimension == 2 else 1
    S = sample_surface(entry.variety().patches[0].equation, region, region.scale / PER_SIDE[index], options.seed, options.threads)
    report = positive_support(S, threads=options.threads)
    artifacts.samples, artifacts.support = S, report
    checks = []
    if expectation.double_uniform_r is not None:
        checks.append(_tolerance_check("support.double_uniform_r", expectation.double_uniform_r, report.double_uniform_r))
    return checks, report.to_dict()


def run_entry(entry: GalleryEntry, options: ClassifyOptions) -> EntryRun:
    """Classify one entry and evaluate every stored expectation."""
    started = time.perf_counter()
    artifacts = Artifacts()
    result = EntryResult(name=entry.name, source=entry.source, tags=entry.tags)
    try:
        verdict = classify_point(entry.variety(), entry.exact_point(), options)
        artifacts.verdict = verdict
        result.verdict = verdict.to_json_dict()
        checks = check_verdict(entry, verdict)
        checks += check_multiplicity(entry, verdict, options, artifacts)
        for name, step in (("curve", check_curve), ("closure", check_closure), ("entire_graph", check_entire_graph)):
            more, measured = step(entry, options)
            checks += more
            if more:
                result.measurements[name] = measured
        more, measured = check_support(entry, options, artifacts)
        checks += more
        if more:
            result.measurements["support"] = measured
        if artifacts.multiplicity is not None:
            result.measurements["multiplicity"] = artifacts.multiplicity.to_dict()
        result.checks = checks
        result.passed = all(c.passed for c in checks)
    except ConelabError as exc:
        logger.error(f"gallery entry {entry.name} failed: {exc}")
        result.error = str(exc)
        result.passed = False
    result.seconds = time.perf_counter() - started
    logger.info(f"gallery entry {entry.name}: {'pass' if result.passed else 'FAIL'} ({result.seconds:.2f}s)")
    return EntryRun(entry, result, artifacts)


def run_numeric_demo(options: ClassifyOptions) -> dict:
    """Sampling, convexity and the entire-graph test on x^2 + exp(-y) = 1."""
    field_ = horseshoe_field()
    region = parse_region("-0.99:0.99,-1:6")
    S = sample_surface(field_, region, region.scale / PER_SIDE[0], options.seed, options.threads)
    convexity = assess_convexity(S)
    data = {"equation": str(field_), "sampling": S.to_dict(), "convexity": convexity.to_dict()}
    if convexity.convex:
        data["recession_cone"] = recession_cone_sample(S, convexity=convexity, seed=options.seed).to_dict()
    data["entire_graph"] = entire_graph_direction(field_, S, seed=options.seed, convexity=convexity).to_dict()
    return data


def select(entries: list[GalleryEntry], name_filter: str | None) -> list[GalleryEntry]:
    if not name_filter:
        return entries
    return [e for e in entries if name_filter in e.name]


def run_gallery(
    options: ClassifyOptions,
    name_filter: str | None = None,
    numeric_demo: bool = False,
    timings: bool = False,
    corpus_path: str | Path = CORPUS_PATH,
) -> tuple[Report, list[EntryRun]]:
    """Run the selected entries in parallel; results keep corpus order."""
    entries = load_corpus(corpus_path)
    if corpus_path == CORPUS_PATH and len(entries) != EXPECTED_CORPUS_SIZE:
        raise ConelabError(f"corpus holds {len(entries)} entries, expected {EXPECTED_CORPUS_SIZE}")
    chosen = select(entries, name_filter)
    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, min(options.threads, len(chosen) or 1))) as pool:
        runs = list(pool.map(lambda entry: run_entry(entry, options), chosen))
    demo = run_numeric_demo(options) if numeric_demo else None
    results = []
    for run in runs:
        results.append(run.result if timings else run.result.model_copy(update={"seconds": None}))
    passed = sum(1 for r in results if r.passed)
    report = Report(
        seed=options.seed,
        options=asdict(options),
        corpus_size=len(entries),
        results=results,
        passed=passed,
        failed=len(results) - passed,
        ok=passed == len(results),
        numeric_demo=demo,
        timings={"total_seconds": time.perf_counter() - started} if timings else None,
    )
    return report, runs


def figure_for(run: EntryRun) -> FigureData:
    entry, artifacts = run.entry, run.artifacts
    V = entry.variety()
    p = entry.exact_point()
    title = " ∪ ".join(patch.equation for patch in entry.patches)
    if V.dimension == 3:
        return surface_slice_figure(V.patches[0].equation, p, title)
    rays = []
    evidence = artifacts.verdict.evidence if artifacts.verdict is not None else None
    if evidence is not None and evidence.branches:
        rays = [h["dir"] for branch in evidence.branches["branches"] for h in branch["half_branches"]]
    elif evidence is not None and evidence.cone and "directions" in evidence.cone:
        rays = evidence.cone["directions"]
    data = curve_figure(V, p, title, rays)
    if artifacts.support is not None and artifacts.samples is not None:
        data.circles = support_circles(artifacts.support, artifacts.samples.normals)
    return data


def write_figures(runs: list[EntryRun], directory: str | Path) -> list[Path]:
    """One SVG per entry, plus a density CSV where a multiplicity was measured."""
    directory = Path(directory)
    written = []
    for run in runs:
        if run.result.error is not None:
            continue
        try:
            written.append(render_svg(figure_for(run), directory / f"{run.entry.name}.svg"))
        except ConelabError as exc:
            logger.warning(f"no figure for {run.entry.name}: {exc}")
        if run.artifacts.multiplicity is not None:
            written.append(run.artifacts.multiplicity.numerator.to_csv(directory / f"{run.entry.name}-density.csv"))
    logger.info(f"{len(written)} files written to {directory}")
    return written
