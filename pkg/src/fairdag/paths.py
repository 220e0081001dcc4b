"""Path enumeration, inner-node roles and d-separation.

The decision procedure deliberately enumerates every undirected simple
path and applies the open/closed rules to each one. That is exponential
in the worst case, but callers get witness paths out of it, and the
graphs this package targets are small annotated models, not learned
networks.

Rules, per inner node on a path:

* mediator (->Z-> or <-Z<-) and confounder (<-Z->): open unless
  conditioned on;
* collider (->Z<-): closed unless conditioned on, where conditioning on
  any descendant of the collider also counts.

A path is open when every inner node is open; two nodes are d-separated
by a conditioning set when no open path connects them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    InvalidPathError,
    OverlapError,
    RoleIndexError,
    SameNodeError,
    UnknownNodeError,
)
from .graph import Dag

FORWARD = "forward"
BACKWARD = "backward"

MEDIATOR = "mediator"
CONFOUNDER = "confounder"
COLLIDER = "collider"

OPEN = "open"
CLOSED = "closed"


@dataclass(frozen=True)
class PathTrace:
    """One undirected simple path with its role and status annotation.

    `arrows[i]` describes the edge between `nodes[i]` and `nodes[i+1]`:
    "forward" when the edge is nodes[i] -> nodes[i+1], "backward" when it
    points the other way. `roles[i]` is the role of inner node
    `nodes[i+1]`. `blocking_nodes` are the inner nodes that are closed
    under the conditioning set the trace was evaluated against; the path
    is open exactly when that set is empty.
    """

    nodes: tuple[str, ...]
    arrows: tuple[str, ...]
    roles: tuple[str, ...]
    status: str
    blocking_nodes: frozenset[str]

    def render(self, dag: Dag | None = None) -> str:
        """ASCII arrow diagram, e.g. ``X -> Z <- U -> Y``.

        With `dag` given, unjustified edges render as ``=>`` / ``<=``.
        """
        parts = [self.nodes[0]]
        for i, arrow in enumerate(self.arrows):
            a, b = self.nodes[i], self.nodes[i + 1]
            src, tgt = (a, b) if arrow == FORWARD else (b, a)
            unjust = dag is not None and dag.edge(src, tgt).unjustified
            if arrow == FORWARD:
                glyph = "=>" if unjust else "->"
            else:
                glyph = "<=" if unjust else "<-"
            parts.append(glyph)
            parts.append(b)
        return " ".join(parts)


@dataclass(frozen=True)
class PathStatus:
    """Open/closed verdict for one path under one conditioning set."""

    status: str
    blocking_nodes: frozenset[str]
    # for each open collider: the conditioned nodes (itself or
    # descendants) that open it
    opened_colliders: tuple[tuple[str, frozenset[str]], ...] = ()


@dataclass(frozen=True)
class DsepVerdict:
    separated: bool
    open_paths: tuple[PathTrace, ...]
    conditioning_set: frozenset[str]


def _role(left: str, right: str) -> str:
    if left == FORWARD and right == BACKWARD:
        return COLLIDER
    if left == BACKWARD and right == FORWARD:
        return CONFOUNDER
    return MEDIATOR


def _evaluate(
    dag: Dag,
    nodes: Sequence[str],
    arrows: Sequence[str],
    roles: Sequence[str],
    conditioned: frozenset[str],
) -> PathStatus:
    blocking: set[str] = set()
    opened: list[tuple[str, frozenset[str]]] = []
    for i, role in enumerate(roles):
        inner = nodes[i + 1]
        if role == COLLIDER:
            openers = conditioned & (dag.descendants(inner) | {inner})
            if openers:
                opened.append((inner, frozenset(openers)))
            else:
                blocking.add(inner)
        elif inner in conditioned:
            blocking.add(inner)
    status = CLOSED if blocking else OPEN
    return PathStatus(status, frozenset(blocking), tuple(opened))


def _trace(
    dag: Dag, nodes: Sequence[str], conditioned: frozenset[str]
) -> PathTrace:
    arrows = tuple(
        FORWARD if dag.has_edge(nodes[i], nodes[i + 1]) else BACKWARD
        for i in range(len(nodes) - 1)
    )
    roles = tuple(_role(arrows[i], arrows[i + 1]) for i in range(len(arrows) - 1))
    verdict = _evaluate(dag, nodes, arrows, roles, conditioned)
    return PathTrace(tuple(nodes), arrows, roles, verdict.status, verdict.blocking_nodes)


def _effective_set(dag: Dag, given: Iterable[str]) -> frozenset[str]:
    explicit = frozenset(given)
    for name in explicit:
        if name not in dag:
            raise UnknownNodeError(name)
    return explicit | dag.conditioned_names()


def enumerate_paths(
    dag: Dag, x: str, y: str, given: Iterable[str] = ()
) -> tuple[PathTrace, ...]:
    """All undirected simple paths from x to y, lexicographic by node
    sequence.

    Status on each trace is evaluated against the dag's declared
    conditioned nodes unioned with `given`.
    """
    if x not in dag:
        raise UnknownNodeError(x)
    if y not in dag:
        raise UnknownNodeError(y)
    if x == y:
        raise SameNodeError(x)
    conditioned = _effective_set(dag, given)

    sequences: list[tuple[str, ...]] = []
    path = [x]
    on_path = {x}

    def walk(cur: str) -> None:
        for nxt in sorted(dag.neighbors(cur)):
            if nxt in on_path:
                continue
            path.append(nxt)
            if nxt == y:
                sequences.append(tuple(path))
            else:
                on_path.add(nxt)
                walk(nxt)
                on_path.discard(nxt)
            path.pop()

    walk(x)
    sequences.sort()
    return tuple(_trace(dag, seq, conditioned) for seq in sequences)


def trace_path(dag: Dag, nodes: Sequence[str], given: Iterable[str] = ()) -> PathTrace:
    """Build a PathTrace for an explicit node sequence.

    Validates that the sequence is a simple path of the dag. Status is
    evaluated like in :func:`enumerate_paths`.
    """
    nodes = tuple(nodes)
    if len(nodes) < 2:
        raise InvalidPathError("a path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise InvalidPathError(f"path revisits a node: {nodes}")
    for name in nodes:
        if name not in dag:
            raise UnknownNodeError(name)
    for i in range(len(nodes) - 1):
        a, b = nodes[i], nodes[i + 1]
        if not dag.has_edge(a, b) and not dag.has_edge(b, a):
            raise InvalidPathError(f"no edge between {a!r} and {b!r}")
    return _trace(dag, nodes, _effective_set(dag, given))


def node_role(path: PathTrace, index: int) -> str:
    """Role of the inner node at `path.nodes[index]`.

    Endpoints (index 0 and len-1) have no role and raise RoleIndexError.
    """
    if not 0 < index < len(path.nodes) - 1:
        raise RoleIndexError(
            f"index {index} is not an inner position of a {len(path.nodes)}-node path"
        )
    return path.roles[index - 1]


def path_status(
    dag: Dag, path: PathTrace, conditioned: Iterable[str] = ()
) -> PathStatus:
    """Re-evaluate a path under an explicit conditioning set.

    Unlike :func:`d_separated`, the dag's declared conditioned flags are
    NOT unioned in here: `conditioned` is taken as the complete set, so
    the function stays a pure function of its arguments.
    """
    nodes = path.nodes
    if len(nodes) < 2 or len(set(nodes)) != len(nodes):
        raise InvalidPathError(f"not a simple path: {nodes}")
    for name in nodes:
        if name not in dag:
            raise UnknownNodeError(name)
    if len(path.arrows) != len(nodes) - 1:
        raise InvalidPathError("arrow count does not match node count")
    for i, arrow in enumerate(path.arrows):
        a, b = nodes[i], nodes[i + 1]
        src, tgt = (a, b) if arrow == FORWARD else (b, a)
        if not dag.has_edge(src, tgt):
            raise InvalidPathError(f"dag has no edge {src} -> {tgt}")
    roles = tuple(_role(path.arrows[i], path.arrows[i + 1]) for i in range(len(path.arrows) - 1))
    cond = frozenset(conditioned)
    for name in cond:
        if name not in dag:
            raise UnknownNodeError(name)
    return _evaluate(dag, nodes, path.arrows, roles, cond)


def d_separated(dag: Dag, x: str, y: str, given: Iterable[str] = ()) -> DsepVerdict:
    """Decide whether `given` d-separates x and y, with witnesses.

    The dag's declared conditioned nodes are unioned with `given`. The
    verdict lists every open path, so a "connected" answer always comes
    with at least one witness.
    """
    if x not in dag:
        raise UnknownNodeError(x)
    if y not in dag:
        raise UnknownNodeError(y)
    if x == y:
        raise SameNodeError(x)
    effective = _effective_set(dag, given)
    for endpoint in (x, y):
        if endpoint in effective:
            raise OverlapError(endpoint)
    traces = enumerate_paths(dag, x, y, given)
    open_paths = tuple(t for t in traces if t.status == OPEN)
    return DsepVerdict(not open_paths, open_paths, effective)
