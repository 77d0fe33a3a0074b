"""Evidence stages of the classification workflow and the verdict writer."""

from __future__ import annotations

import numpy as np

from src.classify.hoelder import fit_hoelder
from src.classify.state import PointAnalysis, RouteType
from src.classify.verdict import (
    SHEETS_CAVEAT,
    Evidence,
    Rule,
    Verdict,
    VerdictClass,
    Witness,
    hoelder_caveat,
)
from src.cone.algebraic import algebraic_cone, flat_normal, random_unit_vectors
from src.cone.descriptors import FlatCone, canonical_normal, cone_is_flat, is_symmetric
from src.cone.sampled import sampled_cone
from src.errors import AnalysisError, ConelabError, IsolatedPointError
from src.expr.numeric import NumericPolynomial
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.measure.density import multiplicity
from src.measure.variety import local_equation
from src.puiseux.germ import GermKind, classify_germ
from src.support.radii import normal_modulus, positive_support
from src.support.sampling import Box, sample_variety

logger = get_logger(__name__)

SPAN_TOL = 0.1
CURVE_GAP = 0.25
MULTIPLICITY_BOUND = 1.5


def _record(state: PointAnalysis, step: str, exc: ConelabError) -> None:
    logger.warning(f"{step} stage at {_label(state)}: {exc}")
    state.failures[step] = str(exc)


def _label(state: PointAnalysis) -> str:
    return "(" + ", ".join(str(x) for x in state.point) + ")"


class ClassifySupervisor:
    """Picks the next stage from the evidence gathered so far."""

    def route(self, state: PointAnalysis) -> PointAnalysis:
        state.route = self.next_step(state)
        logger.debug(f"route at {_label(state)}: {state.route}")
        return state

    def next_step(self, state: PointAnalysis) -> RouteType:
        visited = set(state.visited)
        if state.verdict is not None or state.status == "failed":
            return "done"
        if "gradient" not in visited:
            return "gradient"
        if state.regular:
            return "verdict"
        if "cone" not in visited:
            return "cone"
        if state.planar_germ and "germ" not in visited:
            return "germ"
        if state.planar_germ or not state.flat:
            return "symmetry" if "symmetry" not in visited else "verdict"
        if "continuity" not in visited:
            return "continuity"
        if "support" not in visited:
            return "support"
        if "symmetry" not in visited:
            return "symmetry"
        if state.discontinuity or (state.support_passed and state.hypersurface_assumed):
            return "verdict"
        if "multiplicity" not in visited:
            return "multiplicity"
        return "verdict"


class GradientStage:
    """Regular point test on the square-free equation of the patches through p."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        V, p = state.variety, state.point
        through = V.patches_through(p)
        state.equation = local_equation(V, p)
        state.single_patch = len(through) == 1 and not through[0].constraints
        state.planar_germ = V.dimension == 2 and state.single_patch
        gradient = tuple(float(g.evaluate(p)) for g in state.equation.gradient)
        interior = len(through) == 1 and all(c.evaluate(p) > 0 for c in through[0].constraints)
        state.gradient = gradient
        state.regular = interior and any(g != 0 for g in gradient)
        logger.info(f"gradient at {_label(state)}: {'regular' if state.regular else 'singular'}")
        return state


class ConeStage:
    """Leading form, sign-change locus, flatness and the sampled tangent cone."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        options = state.options
        normal = None
        try:
            state.leading_form = algebraic_cone(state.equation, state.point)
            normal, state.locus = flat_normal(state.leading_form, options.sphere_samples, options.seed)
        except ConelabError as exc:
            _record(state, "leading_form", exc)
        try:
            state.cone = sampled_cone(state.variety, state.point, tolerance=options.angular_tol, seed=options.seed)
        except ConelabError as exc:
            _record(state, "cone", exc)
        if normal is None and state.cone is not None:
            normal = cone_is_flat(state.cone, options.angular_tol)
        state.flat_normal = None if normal is None else tuple(float(x) for x in normal)
        logger.info(f"cone at {_label(state)}: h = {state.leading_form}, flat = {state.flat}")
        return state


class GermStage:
    """Puiseux classification of a plane curve germ, with the Hölder fit for C1 germs."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        try:
            report = classify_germ(state.equation, state.point)
        except IsolatedPointError as exc:
            _record(state, "isolated", exc)
            return state
        except ConelabError as exc:
            _record(state, "germ", exc)
            state.planar_germ = False
            return state
        state.germ = report
        if report.kind == GermKind.C1:
            dx, dy = report.rays[0]
            normal = canonical_normal((-dy, dx))
            state.flat_normal = tuple(float(x) for x in normal)
            try:
                state.hoelder = fit_hoelder(state.variety, state.point, normal, state.options.hoelder_grid)
            except AnalysisError as exc:
                _record(state, "hoelder", exc)
        return state


class ContinuityStage:
    """Sample the variety on the region ladder and measure the normal modulus near p."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        options = state.options
        center = [float(x) for x in state.point]
        n = state.dimension
        samples = []
        try:
            for half_width in options.region_ladder:
                region = Box.cube(center, half_width)
                samples.append(sample_variety(state.variety, region, options.spacing(half_width, n),
                                              options.seed, options.threads))
        except ConelabError as exc:
            _record(state, "continuity", exc)
        state.samples = samples
        if samples:
            state.continuity = normal_modulus(samples[-1])
            logger.info(f"normal modulus at {_label(state)}: angles {state.continuity.angles}")
        return state


class SupportStage:
    """Positive and double support radii on every region of the ladder."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        reports = []
        for S in state.samples:
            threshold = state.options.support_threshold * S.region.scale
            reports.append(positive_support(S, threshold=threshold, threads=state.options.threads))
        state.support = reports
        if reports:
            logger.info(f"support at {_label(state)}: uniform radii {[r.uniform_r for r in reports]}")
        return state


class MultiplicityStage:
    """Multiplicity of the flat tangent cone from the lower density of the variety."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        try:
            state.multiplicity = multiplicity(
                state.variety, state.point, FlatCone.of(state.flat_normal), resolution=state.options.resolution
            )
        except ConelabError as exc:
            _record(state, "multiplicity", exc)
        return state


def hypersurface_candidate(directions: np.ndarray, n: int) -> bool:
    """Whether a sampled direction set can be the section of a cone that is itself a hypersurface.

    In the plane that means an even number of rays, at least two; in space,
    no isolated ray.
    """
    if n == 2:
        return len(directions) >= 2 and len(directions) % 2 == 0
    if len(directions) < 3:
        return False
    close = (directions @ directions.T) >= np.cos(CURVE_GAP)
    return bool(np.all(close.sum(axis=1) >= 3))


def changes_sign(equation: Polynomial, point: tuple, radius: float, samples: int, seed: int) -> bool:
    """Sample f on a small sphere about p and report whether it takes both signs."""
    local = NumericPolynomial(equation.translate(point))
    rng = np.random.default_rng(seed)
    values = local.value(radius * random_unit_vectors(rng, samples, equation.nvars))
    return bool(np.any(values > 0) and np.any(values < 0))


class SymmetryStage:
    """Symmetry of the sampled cone under x -> -x when the hypersurface hypotheses hold."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        cone = state.cone
        if cone is None:
            state.symmetry = {"candidate": False, "sign_change": False, "symmetric": None, "unmatched": []}
            return state
        options = state.options
        directions = cone.as_array()
        radius = 1.0 / cone.scale_ladder[0]
        symmetric = is_symmetric(cone, options.angular_tol)
        unmatched = []
        if not symmetric:
            similarity = directions @ (-directions).T
            lonely = similarity.max(axis=1) < np.cos(options.angular_tol)
            unmatched = [[float(x) for x in d] for d in directions[lonely]]
        state.symmetry = {
            "candidate": hypersurface_candidate(directions, state.dimension),
            "sign_change": changes_sign(state.equation, state.point, radius, options.sphere_samples, options.seed),
            "symmetric": symmetric,
            "unmatched": unmatched,
        }
        logger.info(f"symmetry at {_label(state)}: {state.symmetry['symmetric']}")
        return state


def spanning_directions(directions: np.ndarray, n: int) -> np.ndarray | None:
    """n directions of the set that no hyperplane through the origin contains, if any."""
    if len(directions) < n:
        return None
    a = directions[0]
    if n == 2:
        cross = np.abs(directions[:, 0] * a[1] - directions[:, 1] * a[0])
        j = int(np.argmax(cross))
        return np.stack([a, directions[j]]) if cross[j] > np.sin(SPAN_TOL) else None
    b = directions[int(np.argmax(np.linalg.norm(np.cross(directions, a), axis=1)))]
    volumes = np.abs(np.cross(a, b) @ directions.T)
    k = int(np.argmax(volumes))
    return np.stack([a, b, directions[k]]) if volumes[k] > SPAN_TOL else None


def nonflat_witness(state: PointAnalysis) -> Witness | None:
    """Tangent directions spanning the whole space: the cone is no hyperplane."""
    sources = []
    if state.locus is not None:
        sources.append(("sign-change directions", state.locus.zero_directions()))
    if state.cone is not None:
        sources.append(("sampled cone directions", state.cone.as_array()))
    for kind, directions in sources:
        chosen = spanning_directions(directions, state.dimension)
        if chosen is not None:
            return Witness(kind=kind, directions=[[float(x) for x in d] for d in chosen], threshold=SPAN_TOL)
    return None


def discontinuity_witness(state: PointAnalysis) -> Witness:
    S = state.samples[-1]
    modulus = state.continuity
    points, normals = [], []
    for pair in modulus.pairs:
        for index in pair or ():
            points.append([float(x) for x in S.points[index]])
            normals.append([float(x) for x in S.normals[index]])
    return Witness(
        kind="normal jump at every distance",
        points=points,
        normals=normals,
        distances=list(modulus.distances),
        angles=list(modulus.angles),
        threshold=state.options.discontinuity_angle,
    )


def build_evidence(state: PointAnalysis) -> Evidence:
    h = state.leading_form
    support = None
    if state.support:
        support = [dict(report.to_dict(), region=S.region.to_dict()) for report, S in zip(state.support, state.samples)]
    return Evidence(
        leading_form=str(h) if h is not None else None,
        degree=h.degree if h is not None else None,
        gradient=list(state.gradient) if state.gradient is not None else None,
        flat_normal=list(state.flat_normal) if state.flat_normal is not None else None,
        sign_locus=state.locus.to_dict() if state.locus is not None else None,
        cone=state.cone.to_dict() if state.cone is not None else None,
        multiplicity=state.multiplicity.to_dict() if state.multiplicity is not None else None,
        support=support,
        continuity=state.continuity.to_dict() if state.continuity is not None else None,
        symmetry=state.symmetry or None,
        branches=state.germ.to_dict() if state.germ is not None else None,
        hoelder=state.hoelder.to_dict() if state.hoelder is not None else None,
        failures=dict(state.failures) or None,
    )


class VerdictWriter:
    """Applies the decision rules in order of strength to the gathered evidence."""

    def run(self, state: PointAnalysis) -> PointAnalysis:
        state.verdict = self.decide(state)
        state.status = "done"
        logger.info(f"verdict at {_label(state)}: {state.verdict.verdict_class.value} ({state.verdict.rule.value})")
        return state

    def decide(self, state: PointAnalysis) -> Verdict:
        evidence = build_evidence(state)
        point = [str(x) for x in state.point]

        def verdict(cls: VerdictClass, rule: Rule, caveats: list[str] | None = None) -> Verdict:
            return Verdict(point=point, verdict_class=cls, rule=rule, evidence=evidence, caveats=caveats or [])

        if state.regular:
            return verdict(VerdictClass.REGULAR_POINT, Rule.NONZERO_GRADIENT)
        if "isolated" in state.failures:
            return verdict(VerdictClass.INCONCLUSIVE, Rule.ISOLATED_POINT, ["isolated real point: no real half-branch"])
        if state.germ is not None:
            return self._germ_verdict(state, verdict)

        if not state.flat:
            witness = nonflat_witness(state)
            if witness is not None:
                evidence.witness = witness
                return verdict(VerdictClass.NOT_C1, Rule.NONFLAT_CONE)
        else:
            if state.discontinuity:
                evidence.witness = discontinuity_witness(state)
                return verdict(VerdictClass.NOT_C1, Rule.NORMAL_DISCONTINUITY)
            if state.support_passed and (state.hypersurface_assumed or self._low_multiplicity(state)):
                caveats = []
                if state.hypersurface_assumed:
                    caveats.append("topological hypersurface near p inferred from the sign change of f")
                if state.double_support_passed:
                    return verdict(VerdictClass.C11_HYPERSURFACE, Rule.DOUBLE_SUPPORT, caveats)
                return verdict(VerdictClass.C1_HYPERSURFACE, Rule.POSITIVE_SUPPORT, caveats)
            if state.multiplicity is not None:
                return self._multiplicity_verdict(state, verdict)

        symmetry = state.symmetry
        if symmetry.get("candidate") and symmetry.get("sign_change") and symmetry.get("symmetric") is False:
            evidence.witness = Witness(kind="direction without antipode", directions=symmetry["unmatched"],
                                       threshold=state.options.angular_tol)
            return verdict(VerdictClass.NOT_C1, Rule.ASYMMETRIC_CONE)
        return verdict(VerdictClass.INCONCLUSIVE, Rule.NONE, self._missing(state))

    def _germ_verdict(self, state: PointAnalysis, verdict) -> Verdict:
        report = state.germ
        caveats = []
        if not report.resolved:
            caveats.append("a repeated numeric root stands for branches that were not separated")
        if report.kind == GermKind.CUSP:
            return verdict(VerdictClass.CUSP, Rule.PLANAR_GERM, caveats)
        if report.kind == GermKind.MULTI_BRANCH:
            return verdict(VerdictClass.MULTI_BRANCH, Rule.PLANAR_GERM, caveats)
        if state.hoelder is not None:
            caveat = hoelder_caveat(state.hoelder.exponent)
            if caveat:
                caveats.append(caveat)
        return verdict(VerdictClass.C1_HYPERSURFACE, Rule.PLANAR_GERM, caveats)

    @staticmethod
    def _low_multiplicity(state: PointAnalysis) -> bool:
        if state.multiplicity is None:
            return False
        return state.multiplicity.value < MULTIPLICITY_BOUND - state.options.multiplicity_margin

    def _multiplicity_verdict(self, state: PointAnalysis, verdict) -> Verdict:
        caveats = []
        if state.continuity is not None:
            caveats.append(f"continuity near p checked on samples only: normal modulus constant {state.continuity.constant:.3g}")
        if self._low_multiplicity(state):
            return verdict(VerdictClass.C1_HYPERSURFACE, Rule.FLAT_CONE_MULTIPLICITY, caveats)
        caveats.append(SHEETS_CAVEAT)
        return verdict(VerdictClass.UNION_OF_C1_SHEETS, Rule.FLAT_CONE_MULTIPLICITY, caveats)

    def _missing(self, state: PointAnalysis) -> list[str]:
        missing = []
        if not state.flat:
            missing.append("missing hypothesis: flat tangent cone")
        else:
            missing.append("missing hypothesis: positive support")
            missing.append("missing hypothesis: multiplicity estimate")
        for step, message in sorted(state.failures.items()):
            missing.append(f"{step} failed: {message}")
        return missing
