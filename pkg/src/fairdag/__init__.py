"""Bias, disparity and fairness analysis on annotated causal DAGs.

The model is a DAG whose edges may be flagged as unjustified. A bias is
an unjustified direct effect; a disparity is any directed path carrying
at least one unjustified edge. Fairness criteria for a prediction node
reduce to d-separation statements on the augmented graph, and a
linear-Gaussian simulator ties the structural verdicts back to data.
"""

from .bias import (
    DisparityVerdict,
    WitnessPath,
    has_disparity,
    is_bias,
    unfair_nodes,
)
from .errors import FairDagError, ParseError
from .fairness import (
    CriterionVerdict,
    FairnessReport,
    PredictorSpec,
    attach_predictor,
    check_criterion,
    fairness_report,
)
from .graph import Dag, EdgeDecl, NodeDecl, build_dag, kinship
from .modelio import ModelSpec, export_dot, parse_model, serialize_model
from .paths import (
    DsepVerdict,
    PathStatus,
    PathTrace,
    d_separated,
    enumerate_paths,
    node_role,
    path_status,
    trace_path,
)
from .sim import (
    CiTestResult,
    FaithfulnessReport,
    SampleTable,
    ScmSpec,
    TripleResult,
    build_scm,
    ci_test,
    faithfulness_check,
    fisher_z,
    parse_coefficients,
    parse_selection,
    partial_correlation,
    sample,
    select,
)

__version__ = "0.1.0"

__all__ = [
    "Dag",
    "NodeDecl",
    "EdgeDecl",
    "build_dag",
    "kinship",
    "PathTrace",
    "PathStatus",
    "DsepVerdict",
    "enumerate_paths",
    "trace_path",
    "node_role",
    "path_status",
    "d_separated",
    "WitnessPath",
    "DisparityVerdict",
    "is_bias",
    "has_disparity",
    "unfair_nodes",
    "PredictorSpec",
    "CriterionVerdict",
    "FairnessReport",
    "attach_predictor",
    "check_criterion",
    "fairness_report",
    "ScmSpec",
    "SampleTable",
    "CiTestResult",
    "TripleResult",
    "FaithfulnessReport",
    "build_scm",
    "sample",
    "partial_correlation",
    "fisher_z",
    "ci_test",
    "select",
    "parse_selection",
    "faithfulness_check",
    "parse_coefficients",
    "ModelSpec",
    "parse_model",
    "serialize_model",
    "export_dot",
    "FairDagError",
    "ParseError",
    "__version__",
]
