"""Small shared test utilities and hypothesis strategies."""

from __future__ import annotations

from hypothesis import strategies as st

from fairdag import Dag, EdgeDecl, NodeDecl, build_dag


def mkdag(
    edges: str = "",
    *,
    nodes=(),
    unjustified=(),
    unobserved=(),
    conditioned=(),
    force=(),
) -> Dag:
    """Compact dag builder: ``mkdag("X->Z Z->Y")``.

    Tokens are edges ``A->B`` or bare node names; declaration order is
    first appearance, with `nodes` placed up front. Flag arguments take
    node names, `unjustified` takes ``"A->B"`` strings.
    """
    order: list[str] = []
    seen: set[str] = set()

    def note(name: str) -> None:
        if name not in seen:
            seen.add(name)
            order.append(name)

    pairs: list[tuple[str, str]] = []
    for name in nodes:
        note(name)
    for token in edges.split():
        if "->" in token:
            a, _, b = token.partition("->")
            note(a)
            note(b)
            pairs.append((a, b))
        else:
            note(token)

    unjust = {tuple(t.partition("->")[::2]) for t in unjustified}
    decls = [
        NodeDecl(
            n,
            unobserved=n in unobserved,
            conditioned=n in conditioned,
            force=n in force,
        )
        for n in order
    ]
    return build_dag(decls, [EdgeDecl(a, b, (a, b) in unjust) for a, b in pairs])


@st.composite
def dag_specs(draw, max_nodes=7, min_nodes=2):
    """(names, pairs) for a random DAG; edges respect a hidden random
    topological order, declaration order is shuffled independently."""
    n = draw(st.integers(min_nodes, max_nodes))
    names = [f"N{i}" for i in range(n)]
    hidden = draw(st.permutations(names))
    pairs = [
        (hidden[i], hidden[j])
        for i in range(n)
        for j in range(i + 1, n)
        if draw(st.booleans())
    ]
    return names, pairs


@st.composite
def dags(draw, max_nodes=7, min_nodes=2) -> Dag:
    names, pairs = draw(dag_specs(max_nodes, min_nodes))
    return build_dag([NodeDecl(n) for n in names], [EdgeDecl(a, b) for a, b in pairs])


@st.composite
def annotated_dags(draw, max_nodes=7, min_nodes=2) -> Dag:
    """Random DAG with a random subset of edges flagged unjustified."""
    names, pairs = draw(dag_specs(max_nodes, min_nodes))
    flags = draw(st.tuples(*(st.booleans() for _ in pairs)))
    return build_dag(
        [NodeDecl(n) for n in names],
        [EdgeDecl(a, b, flag) for (a, b), flag in zip(pairs, flags)],
    )
