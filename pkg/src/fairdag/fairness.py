"""Prediction nodes and structural fairness criteria.

A predictor is modelled as a fresh leaf node whose parents are the
variables the prediction is computed from; the prediction edges
themselves are justified. The three observational criteria then reduce
to d-separation statements on the augmented graph:

* independence:  x independent of yhat given nothing;
* separation:    yhat independent of x given the outcome y;
* sufficiency:   y independent of x given yhat.

Sufficiency comes in two modes. The structural mode conditions on the
predictor node itself. When the prediction is declared deterministic
and has a single input, conditioning on the prediction is the same as
conditioning on that input, so the deterministic mode conditions on the
predictor's parent set instead. Both are always reported; the
deterministic mode degrades to "not applicable" when its premise fails.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bias import DisparityVerdict, WitnessPath, has_disparity
from .errors import (
    EmptyPredictorSetError,
    NameCollisionError,
    NotAPredictorError,
    SameNodeError,
    UnknownNodeError,
    UnknownPredictorError,
)
from .graph import Dag, EdgeDecl, NodeDecl, build_dag
from .paths import PathTrace, d_separated

CRITERIA = ("independence", "separation", "sufficiency")


@dataclass(frozen=True)
class PredictorSpec:
    """Declaration of a prediction node (conventionally called Yhat)."""

    name: str
    predictor_set: frozenset[str]
    deterministic: bool = False


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of one criterion check.

    For sufficiency, `holds` is the structural mode and the
    deterministic mode lands in `deterministic_holds` (None when not
    applicable). Open witness paths are attached whenever a mode fails.
    """

    criterion: str
    holds: bool
    open_paths: tuple[PathTrace, ...] = ()
    deterministic_holds: bool | None = None
    deterministic_open_paths: tuple[PathTrace, ...] = ()


@dataclass(frozen=True)
class FairnessReport:
    independence: bool
    separation: bool
    sufficiency_structural: bool
    sufficiency_deterministic: bool | None
    disparity_in_outcome: bool
    disparity_in_prediction: bool
    outcome_witnesses: tuple[WitnessPath, ...]
    prediction_witnesses: tuple[WitnessPath, ...]


def attach_predictor(dag: Dag, spec: PredictorSpec) -> Dag:
    """Return a new graph with the prediction node added as a leaf.

    Adds `spec.name` plus one justified edge from every member of the
    predictor set. The base graph is untouched; attaching a leaf cannot
    change any verdict among pre-existing nodes unless the new node is
    conditioned on.
    """
    if not spec.predictor_set:
        raise EmptyPredictorSetError(spec.name)
    if spec.name in dag:
        raise NameCollisionError(spec.name)
    for parent in sorted(spec.predictor_set):
        if parent not in dag:
            raise UnknownPredictorError(parent)
    nodes = dag.nodes + (NodeDecl(spec.name),)
    edges = dag.edges + tuple(
        EdgeDecl(parent, spec.name) for parent in sorted(spec.predictor_set)
    )
    return build_dag(nodes, edges)


def _require_predictor(dag: Dag, yhat: str) -> frozenset[str]:
    if yhat not in dag:
        raise UnknownNodeError(yhat)
    if dag.children(yhat):
        raise NotAPredictorError(yhat, "it has outgoing edges")
    parents = dag.parents(yhat)
    if not parents:
        raise NotAPredictorError(yhat, "it has no incoming edges")
    return parents


def check_criterion(
    dag: Dag,
    criterion: str,
    x: str,
    y: str,
    yhat: str,
    *,
    deterministic: bool = False,
) -> CriterionVerdict:
    """Evaluate one fairness criterion on an augmented graph.

    `deterministic` states that the prediction is an invertible function
    of its inputs; it only matters for sufficiency, and only when the
    predictor has exactly one parent.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}, expected one of {CRITERIA}")
    predictor_set = _require_predictor(dag, yhat)
    for name in (x, y):
        if name not in dag:
            raise UnknownNodeError(name)
        if name == yhat:
            raise SameNodeError(name)
    if x == y:
        raise SameNodeError(x)

    if criterion == "independence":
        verdict = d_separated(dag, x, yhat, ())
        return CriterionVerdict(criterion, verdict.separated, verdict.open_paths)
    if criterion == "separation":
        verdict = d_separated(dag, yhat, x, (y,))
        return CriterionVerdict(criterion, verdict.separated, verdict.open_paths)

    structural = d_separated(dag, y, x, (yhat,))
    det_holds: bool | None = None
    det_paths: tuple[PathTrace, ...] = ()
    if deterministic and len(predictor_set) == 1:
        det = d_separated(dag, y, x, predictor_set)
        det_holds = det.separated
        det_paths = det.open_paths
    return CriterionVerdict(
        criterion,
        structural.separated,
        structural.open_paths,
        deterministic_holds=det_holds,
        deterministic_open_paths=det_paths,
    )


def fairness_report(
    dag: Dag,
    x: str,
    y: str,
    yhat: str,
    *,
    deterministic: bool = False,
) -> FairnessReport:
    """All three criteria plus disparity checks for outcome and
    prediction, on an already augmented graph."""
    independence = check_criterion(dag, "independence", x, y, yhat)
    separation = check_criterion(dag, "separation", x, y, yhat)
    sufficiency = check_criterion(
        dag, "sufficiency", x, y, yhat, deterministic=deterministic
    )
    in_outcome: DisparityVerdict = has_disparity(dag, x, y)
    in_prediction: DisparityVerdict = has_disparity(dag, x, yhat)
    return FairnessReport(
        independence=independence.holds,
        separation=separation.holds,
        sufficiency_structural=sufficiency.holds,
        sufficiency_deterministic=sufficiency.deterministic_holds,
        disparity_in_outcome=in_outcome.present,
        disparity_in_prediction=in_prediction.present,
        outcome_witnesses=in_outcome.witnesses,
        prediction_witnesses=in_prediction.witnesses,
    )
