"""Predictor attachment and the structural fairness criteria."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdag import (
    PredictorSpec,
    attach_predictor,
    check_criterion,
    d_separated,
    fairness_report,
    models,
)
from fairdag.errors import (
    EmptyPredictorSetError,
    NameCollisionError,
    NotAPredictorError,
    SameNodeError,
    UnknownNodeError,
    UnknownPredictorError,
)
from helpers import dags, mkdag

# per panel: independence, separation, sufficiency (structural),
# sufficiency (deterministic), disparity in outcome, disparity in prediction
PANEL_TABLE = {
    "a": (True, False, False, None, True, False),
    "b": (False, True, False, None, False, True),
    "c": (False, False, False, None, False, False),
    "d": (False, True, False, None, True, True),
    "e": (False, False, False, None, False, False),
    "f": (False, False, False, True, True, True),
    "g": (False, True, False, False, False, False),
}


def _panel_report(letter):
    spec = models.load_model(f"fairness_{letter}")
    dag = spec.augmented_dag()
    return fairness_report(
        dag,
        spec.interest,
        spec.outcome,
        spec.predictor.name,
        deterministic=spec.predictor.deterministic,
    )


@pytest.mark.parametrize("letter", sorted(PANEL_TABLE))
def test_panel_verdicts(letter):
    report = _panel_report(letter)
    assert (
        report.independence,
        report.separation,
        report.sufficiency_structural,
        report.sufficiency_deterministic,
        report.disparity_in_outcome,
        report.disparity_in_prediction,
    ) == PANEL_TABLE[letter]


def test_panel_a_witnesses():
    report = _panel_report("a")
    assert [w.render() for w in report.outcome_witnesses] == ["X => Z1 -> Y"]
    assert report.prediction_witnesses == ()


def test_single_criterion_checks():
    c = models.load_model("fairness_c")
    verdict = check_criterion(c.augmented_dag(), "independence", "X", "Y", "Yhat")
    assert not verdict.holds
    assert [t.nodes for t in verdict.open_paths] == [("X", "Z", "Yhat")]

    d = models.load_model("fairness_d")
    assert check_criterion(d.augmented_dag(), "separation", "X", "Y", "Yhat").holds
    e = models.load_model("fairness_e")
    assert not check_criterion(e.augmented_dag(), "separation", "X", "Y", "Yhat").holds


def test_sufficiency_modes():
    f = models.load_model("fairness_f")
    verdict = check_criterion(
        f.augmented_dag(), "sufficiency", "X", "Y", "Yhat", deterministic=True
    )
    assert not verdict.holds  # structural mode sees the open mediator
    assert verdict.deterministic_holds is True
    assert verdict.deterministic_open_paths == ()

    g = models.load_model("fairness_g")
    verdict = check_criterion(
        g.augmented_dag(), "sufficiency", "X", "Y", "Yhat", deterministic=True
    )
    assert not verdict.holds
    assert verdict.deterministic_holds is False
    assert [t.nodes for t in verdict.deterministic_open_paths] == [("Y", "X")]


def test_deterministic_mode_needs_single_parent():
    dag = attach_predictor(
        mkdag("X->Z1 Z1->Y Z2->Y"), PredictorSpec("Yhat", frozenset({"Z1", "Z2"}))
    )
    verdict = check_criterion(dag, "sufficiency", "X", "Y", "Yhat", deterministic=True)
    assert verdict.deterministic_holds is None
    assert verdict.deterministic_open_paths == ()


def test_attach_predictor_panel_a():
    base = models.load_model("fairness_a").dag
    dag = attach_predictor(base, PredictorSpec("Yhat", frozenset({"Z2"})))
    assert dag.parents("Yhat") == {"Z2"}
    assert dag.children("Yhat") == frozenset()
    assert not dag.edge("Z2", "Yhat").unjustified
    # the base graph is untouched
    assert "Yhat" not in base
    assert len(dag) == len(base) + 1


def test_attach_predictor_errors():
    dag = mkdag("X->Y")
    with pytest.raises(EmptyPredictorSetError):
        attach_predictor(dag, PredictorSpec("Yhat", frozenset()))
    with pytest.raises(NameCollisionError):
        attach_predictor(dag, PredictorSpec("X", frozenset({"Y"})))
    with pytest.raises(UnknownPredictorError):
        attach_predictor(dag, PredictorSpec("Yhat", frozenset({"Nope"})))


def test_check_criterion_argument_errors():
    dag = attach_predictor(mkdag("X->Z Z->Y"), PredictorSpec("Yhat", frozenset({"Z"})))
    with pytest.raises(ValueError):
        check_criterion(dag, "calibration", "X", "Y", "Yhat")
    with pytest.raises(UnknownNodeError):
        check_criterion(dag, "independence", "Nope", "Y", "Yhat")
    with pytest.raises(SameNodeError):
        check_criterion(dag, "independence", "X", "X", "Yhat")
    with pytest.raises(SameNodeError):
        check_criterion(dag, "independence", "Yhat", "Y", "Yhat")
    # yhat must look like an attached predictor
    with pytest.raises(NotAPredictorError):
        check_criterion(dag, "independence", "X", "Yhat", "Z")  # Z has children
    with pytest.raises(NotAPredictorError):
        check_criterion(mkdag("X->Y Q"), "independence", "X", "Y", "Q")  # Q is bare


def test_independence_failure_does_not_imply_disparity():
    # panel (c): independence fails while no disparity exists anywhere
    report = _panel_report("c")
    assert not report.independence
    assert not report.disparity_in_prediction


def test_jail_model():
    spec = models.load_model("jail")
    dag = spec.augmented_dag()
    report = fairness_report(dag, "X", "C", "Chat")
    assert not report.disparity_in_outcome  # no causal path race -> crime
    assert report.disparity_in_prediction  # the jail edge leaks into Chat
    assert [w.render() for w in report.prediction_witnesses] == ["X => J -> Chat"]
    assert not report.independence
    assert not report.separation
    # conditioning on Chat opens the collider at J: sufficiency fails
    assert not report.sufficiency_structural
    assert report.sufficiency_deterministic is None


# -- properties -------------------------------------------------------------


@given(dags(min_nodes=3), st.data())
@settings(max_examples=120)
def test_attaching_a_leaf_changes_no_existing_verdict(dag, data):
    names = sorted(dag.node_names())
    parents = data.draw(
        st.sets(st.sampled_from(names), min_size=1), label="predictor_set"
    )
    augmented = attach_predictor(dag, PredictorSpec("Yhat", frozenset(parents)))

    x = data.draw(st.sampled_from(names), label="x")
    y = data.draw(st.sampled_from([n for n in names if n != x]), label="y")
    rest = [n for n in names if n not in (x, y)]
    given = data.draw(
        st.sets(st.sampled_from(rest)) if rest else st.just(set()), label="given"
    )
    before = d_separated(dag, x, y, given)
    after = d_separated(augmented, x, y, given)
    assert before.separated == after.separated
    assert {t.nodes for t in before.open_paths} == {t.nodes for t in after.open_paths}


@given(dags(min_nodes=3), st.data())
@settings(max_examples=120)
def test_independence_implies_clean_prediction(dag, data):
    # flag every edge unjustified: the harshest annotation; if x is
    # d-separated from the prediction there is still no disparity in it
    names = sorted(dag.node_names())
    parents = data.draw(st.sets(st.sampled_from(names), min_size=1), label="parents")
    x = data.draw(st.sampled_from(names), label="x")
    y = data.draw(st.sampled_from([n for n in names if n != x]), label="y")

    from fairdag import EdgeDecl, build_dag

    harsh = build_dag(
        dag.nodes, [EdgeDecl(e.source, e.target, True) for e in dag.edges]
    )
    augmented = attach_predictor(harsh, PredictorSpec("Yhat", frozenset(parents)))
    report = fairness_report(augmented, x, y, "Yhat")
    if report.independence:
        assert not report.disparity_in_prediction
