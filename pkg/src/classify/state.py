"""State definitions for the classification workflow."""

from dataclasses import dataclass, field
from typing import Any, Literal, TypedDict

from src.config import config


RouteType = Literal["gradient", "cone", "germ", "continuity", "support", "multiplicity", "symmetry", "verdict", "done"]
StatusType = Literal["pending", "running", "done", "failed"]


@dataclass(frozen=True)
class ClassifyOptions:
    """Knobs of a single classification run.

    Attributes:
        seed: RNG seed for every sampled quantity.
        angular_tol: Merge and symmetry tolerance in radians.
        resolution: Finest grid spacing for local measures.
        sphere_samples: Sphere samples for sign tests.
        region_ladder: Half-widths of the cubes around p searched for support, largest first.
        samples_per_side: Grid nodes per box side when sampling the variety.
        support_threshold: Support radii must exceed this times the region width.
        multiplicity_margin: C1 is accepted when the multiplicity is below 3/2 minus this.
        discontinuity_angle: Normal-line angle that counts as a jump at every distance of the ladder.
        hoelder_grid: Range of log10 radii fitted by the Hölder fit.
        threads: Worker cap.
    """

    seed: int = config.runtime.seed
    angular_tol: float = config.numeric.angular_tol
    resolution: float = config.numeric.resolution
    sphere_samples: int = config.numeric.sphere_samples
    region_ladder: tuple[float, ...] = (1.0, 0.1)
    samples_per_side: tuple[int, int] = (200, 40)
    support_threshold: float = config.verdict.support_threshold
    multiplicity_margin: float = config.verdict.multiplicity_margin
    discontinuity_angle: float = 0.5
    hoelder_grid: tuple[float, float] = (-8.0, -3.0)
    threads: int = config.runtime.threads

    def spacing(self, half_width: float, n: int) -> float:
        per_side = self.samples_per_side[0] if n == 2 else self.samples_per_side[1]
        return 2 * half_width / per_side


class ClassifyState(TypedDict, total=False):
    """LangGraph state definition using TypedDict."""

    variety: Any
    point: tuple
    options: ClassifyOptions
    equation: Any
    single_patch: bool
    planar_germ: bool
    regular: bool
    gradient: tuple[float, ...] | None
    leading_form: Any
    locus: Any
    flat_normal: tuple[float, ...] | None
    cone: Any
    germ: Any
    hoelder: Any
    samples: list
    continuity: Any
    support: list
    multiplicity: Any
    symmetry: dict
    verdict: Any
    failures: dict[str, str]
    visited: list[str]
    route: RouteType | None
    status: StatusType
    error: str | None


@dataclass
class PointAnalysis:
    """Dataclass view of the evidence gathered so far at one point."""

    variety: Any = None
    point: tuple = ()
    options: ClassifyOptions = field(default_factory=ClassifyOptions)
    equation: Any = None
    single_patch: bool = False
    planar_germ: bool = False
    regular: bool = False
    gradient: tuple[float, ...] | None = None
    leading_form: Any = None
    locus: Any = None
    flat_normal: tuple[float, ...] | None = None
    cone: Any = None
    germ: Any = None
    hoelder: Any = None
    samples: list = field(default_factory=list)
    continuity: Any = None
    support: list = field(default_factory=list)
    multiplicity: Any = None
    symmetry: dict = field(default_factory=dict)
    verdict: Any = None
    failures: dict[str, str] = field(default_factory=dict)
    visited: list[str] = field(default_factory=list)
    route: RouteType | None = None
    status: StatusType = "pending"
    error: str | None = None

    @property
    def dimension(self) -> int:
        return len(self.point)

    @property
    def flat(self) -> bool:
        return self.flat_normal is not None

    @property
    def support_passed(self) -> bool:
        """Positive support on the smallest region of the ladder."""
        return bool(self.support) and self.support[-1].uniform_r > self.support[-1].threshold

    @property
    def double_support_passed(self) -> bool:
        return bool(self.support) and self.support[-1].double_uniform_r > self.support[-1].threshold

    @property
    def hypersurface_assumed(self) -> bool:
        """One unconstrained patch whose cone passes the hypersurface check and whose equation changes sign."""
        return self.single_patch and bool(self.symmetry.get("candidate")) and bool(self.symmetry.get("sign_change"))

    @property
    def discontinuity(self) -> bool:
        return self.continuity is not None and self.continuity.persistent_jump(self.options.discontinuity_angle)

    @classmethod
    def from_graph_state(cls, state: dict) -> "PointAnalysis":
        """Create PointAnalysis from LangGraph state dict."""
        return cls(
            variety=state.get("variety"),
            point=state.get("point", ()),
            options=state.get("options") or ClassifyOptions(),
            equation=state.get("equation"),
            single_patch=state.get("single_patch", False),
            planar_germ=state.get("planar_germ", False),
            regular=state.get("regular", False),
            gradient=state.get("gradient"),
            leading_form=state.get("leading_form"),
            locus=state.get("locus"),
            flat_normal=state.get("flat_normal"),
            cone=state.get("cone"),
            germ=state.get("germ"),
            hoelder=state.get("hoelder"),
            samples=list(state.get("samples", [])),
            continuity=state.get("continuity"),
            support=list(state.get("support", [])),
            multiplicity=state.get("multiplicity"),
            symmetry=dict(state.get("symmetry", {})),
            verdict=state.get("verdict"),
            failures=dict(state.get("failures", {})),
            visited=list(state.get("visited", [])),
            route=state.get("route"),
            status=state.get("status", "pending"),
            error=state.get("error"),
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for graph state update."""
        return {
            "variety": self.variety,
            "point": self.point,
            "options": self.options,
            "equation": self.equation,
            "single_patch": self.single_patch,
            "planar_germ": self.planar_germ,
            "regular": self.regular,
            "gradient": self.gradient,
            "leading_form": self.leading_form,
            "locus": self.locus,
            "flat_normal": self.flat_normal,
            "cone": self.cone,
            "germ": self.germ,
            "hoelder": self.hoelder,
            "samples": self.samples,
            "continuity": self.continuity,
            "support": self.support,
            "multiplicity": self.multiplicity,
            "symmetry": self.symmetry,
            "verdict": self.verdict,
            "failures": self.failures,
            "visited": self.visited,
            "route": self.route,
            "status": self.status,
            "error": self.error,
        }
