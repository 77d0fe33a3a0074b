"""LangGraph workflow classifying one point of a variety."""

from functools import lru_cache
from typing import Callable, Literal, Sequence

from langgraph.graph import END, StateGraph

from src.classify.nodes import (
    ClassifySupervisor,
    ConeStage,
    ContinuityStage,
    GermStage,
    GradientStage,
    MultiplicityStage,
    SupportStage,
    SymmetryStage,
    VerdictWriter,
)
from src.classify.state import ClassifyOptions, ClassifyState, PointAnalysis
from src.classify.verdict import Verdict
from src.errors import AnalysisError, DimensionError
from src.expr.polynomial import Polynomial, exact_point
from src.logger import get_logger
from src.measure.variety import Variety, check_on_variety

logger = get_logger(__name__)

STAGES = ("gradient", "cone", "germ", "continuity", "support", "multiplicity", "symmetry", "verdict")
RECURSION_LIMIT = 48


def create_classify_workflow():
    """Create the point classification graph.

    A supervisor node inspects the evidence and routes to one stage at a
    time; every stage reports back to the supervisor, and the verdict
    writer ends the run.
    """
    supervisor = ClassifySupervisor()
    stages = {
        "gradient": GradientStage(),
        "cone": ConeStage(),
        "germ": GermStage(),
        "continuity": ContinuityStage(),
        "support": SupportStage(),
        "multiplicity": MultiplicityStage(),
        "symmetry": SymmetryStage(),
        "verdict": VerdictWriter(),
    }

    def supervisor_node(state: ClassifyState) -> dict:
        """Supervisor node - routes to next stage."""
        analysis = supervisor.route(PointAnalysis.from_graph_state(state))
        return {"route": analysis.route}

    def stage_node(name: str) -> Callable[[ClassifyState], dict]:
        stage = stages[name]

        def node(state: ClassifyState) -> dict:
            analysis = PointAnalysis.from_graph_state(state)
            analysis.status = "running"
            try:
                analysis = stage.run(analysis)
            except Exception as e:
                logger.error(f"{name} stage error: {e}")
                analysis.status = "failed"
                analysis.error = f"{name} stage error: {e}"
            analysis.visited.append(name)
            return analysis.to_dict()

        node.__name__ = f"{name}_node"
        return node

    def route_decision(state: ClassifyState) -> Literal[
        "gradient", "cone", "germ", "continuity", "support", "multiplicity", "symmetry", "verdict", "__end__"
    ]:
        """Route to next node based on supervisor decision."""
        route = state.get("route")
        if route in (None, "done"):
            return "__end__"
        if state.get("status") in ("failed", "done"):
            return "__end__"
        return route

    graph = StateGraph(ClassifyState)

    graph.add_node("supervisor", supervisor_node)
    for name in STAGES:
        graph.add_node(name, stage_node(name))

    graph.set_entry_point("supervisor")

    graph.add_conditional_edges(
        "supervisor",
        route_decision,
        {**{name: name for name in STAGES}, "__end__": END},
    )

    for name in STAGES:
        graph.add_edge(name, "supervisor")

    return graph.compile()


@lru_cache(maxsize=1)
def get_workflow():
    return create_classify_workflow()


def classify_point(V: Variety | Polynomial, p: Sequence, options: ClassifyOptions | None = None) -> Verdict:
    """Classify the point p of V.

    Raises:
        DimensionError: V is not in R^2 or R^3, or p has the wrong length.
        NotOnVarietyError: p is not exactly on V.
        DegenerateError: some patch equation is the zero polynomial.
        AnalysisError: a stage failed unexpectedly.
    """
    if isinstance(V, Polynomial):
        V = Variety.from_polynomial(V)
    if V.dimension not in (2, 3):
        raise DimensionError(f"classification needs 2 or 3 variables, got {V.dimension}")
    point = exact_point(p)
    check_on_variety(V, point, tol=0.0)
    logger.info(f"classifying {V} at ({', '.join(str(x) for x in point)})")

    initial: ClassifyState = {
        "variety": V,
        "point": point,
        "options": options or ClassifyOptions(),
        "status": "pending",
        "visited": [],
        "failures": {},
    }
    final = get_workflow().invoke(initial, {"recursion_limit": RECURSION_LIMIT})
    if final.get("status") == "failed":
        raise AnalysisError(final.get("error") or "classification failed")
    return final["verdict"]
