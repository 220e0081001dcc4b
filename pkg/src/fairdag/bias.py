"""Bias and disparity predicates.

A bias is a direct effect that the model flags as unjustified. A
disparity of x in y is any directed path from x to y that carries at
least one unjustified edge, so every bias is a disparity but not the
other way around.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SameNodeError, TooManyWitnessesError, UnknownNodeError
from .graph import Dag

MAX_WITNESSES = 10_000


@dataclass(frozen=True)
class WitnessPath:
    """A directed path with its unjustified edges singled out."""

    nodes: tuple[str, ...]
    unjustified_edges: tuple[tuple[str, str], ...]

    def render(self) -> str:
        unjust = set(self.unjustified_edges)
        parts = [self.nodes[0]]
        for a, b in zip(self.nodes, self.nodes[1:]):
            parts.append("=>" if (a, b) in unjust else "->")
            parts.append(b)
        return " ".join(parts)


@dataclass(frozen=True)
class DisparityVerdict:
    present: bool
    witnesses: tuple[WitnessPath, ...]


def is_bias(dag: Dag, x: str, y: str) -> bool:
    """True when the direct edge x -> y exists and is unjustified."""
    if x not in dag:
        raise UnknownNodeError(x)
    if y not in dag:
        raise UnknownNodeError(y)
    if x == y:
        raise SameNodeError(x)
    return dag.has_edge(x, y) and dag.edge(x, y).unjustified


def _directed_paths(dag: Dag, x: str, y: str, cap: int) -> list[tuple[str, ...]]:
    # Children-only DFS in sorted order, so results come out lexicographic.
    found: list[tuple[str, ...]] = []
    path = [x]

    def walk(cur: str) -> None:
        for nxt in sorted(dag.children(cur)):
            # a directed path in a DAG cannot revisit a node
            path.append(nxt)
            if nxt == y:
                if len(found) >= cap:
                    raise TooManyWitnessesError(x, y, cap)
                found.append(tuple(path))
            else:
                walk(nxt)
            path.pop()

    walk(x)
    return found


def has_disparity(
    dag: Dag, x: str, y: str, max_witnesses: int = MAX_WITNESSES
) -> DisparityVerdict:
    """Decide whether x has a disparity in y, with witness paths.

    Enumeration is exhaustive. Rather than silently truncating on dense
    graphs, more than `max_witnesses` directed paths raises
    TooManyWitnessesError. has_disparity(x, x) is defined as absent.
    """
    if x not in dag:
        raise UnknownNodeError(x)
    if y not in dag:
        raise UnknownNodeError(y)
    if x == y:
        return DisparityVerdict(False, ())
    witnesses = []
    for nodes in _directed_paths(dag, x, y, max_witnesses):
        marked = tuple(
            (a, b) for a, b in zip(nodes, nodes[1:]) if dag.edge(a, b).unjustified
        )
        if marked:
            witnesses.append(WitnessPath(nodes, marked))
    return DisparityVerdict(bool(witnesses), tuple(witnesses))


def unfair_nodes(dag: Dag, x: str) -> frozenset[str]:
    """Every node in which x has a disparity.

    Scan form of the definition: n is unfair exactly when some
    unjustified edge (a, b) has a reachable from x and n downstream of b
    (or equal to b). In a DAG the two directed segments cannot overlap,
    so this coincides with a per-node has_disparity sweep; tests hold the
    two forms against each other.
    """
    if x not in dag:
        raise UnknownNodeError(x)
    reach = dag.descendants(x) | {x}
    out: set[str] = set()
    for e in dag.edges:
        if e.unjustified and e.source in reach:
            out.add(e.target)
            out |= dag.descendants(e.target)
    return frozenset(out)
