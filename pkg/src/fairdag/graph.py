"""Immutable annotated DAG plus kinship queries.

Nodes carry two analysis annotations: `unobserved` (the variable exists in
the world but cannot be measured) and `conditioned` (every downstream
verdict should treat it as controlled for). Edges carry `unjustified`,
marking a direct effect that is considered a bias.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    ConflictingFlagsError,
    CycleError,
    DanglingEdgeError,
    DuplicateEdgeError,
    DuplicateNodeError,
    SelfLoopError,
    UnknownNodeError,
)

RELATIONS = ("parents", "children", "ancestors", "descendants")


@dataclass(frozen=True)
class NodeDecl:
    """A named variable with its structural annotations."""

    name: str
    unobserved: bool = False
    conditioned: bool = False
    force: bool = False  # permits the unobserved+conditioned combination


@dataclass(frozen=True)
class EdgeDecl:
    """A direct causal effect; `unjustified` marks it as a bias."""

    source: str
    target: str
    unjustified: bool = False


class Dag:
    """Directed acyclic graph over named nodes.

    Instances are immutable: all queries are read-only, and augmented
    variants are built as new graphs. Node iteration order is declaration
    order; equality compares nodes as an ordered sequence and edges as a
    set.
    """

    __slots__ = (
        "_nodes",
        "_edges",
        "_by_name",
        "_edge_by_pair",
        "_parents",
        "_children",
        "_order",
        "_anc_cache",
        "_desc_cache",
    )

    def __init__(self, nodes: Iterable[NodeDecl], edges: Iterable[EdgeDecl]):
        node_tuple = tuple(nodes)
        edge_tuple = tuple(edges)

        by_name: dict[str, NodeDecl] = {}
        for decl in node_tuple:
            if decl.name in by_name:
                raise DuplicateNodeError(decl.name)
            if decl.unobserved and decl.conditioned and not decl.force:
                raise ConflictingFlagsError(decl.name)
            by_name[decl.name] = decl

        edge_by_pair: dict[tuple[str, str], EdgeDecl] = {}
        parents: dict[str, set[str]] = {d.name: set() for d in node_tuple}
        children: dict[str, set[str]] = {d.name: set() for d in node_tuple}
        for e in edge_tuple:
            if e.source == e.target:
                raise SelfLoopError(e.source)
            for endpoint in (e.source, e.target):
                if endpoint not in by_name:
                    raise DanglingEdgeError(endpoint)
            pair = (e.source, e.target)
            if pair in edge_by_pair:
                raise DuplicateEdgeError(*pair)
            edge_by_pair[pair] = e
            parents[e.target].add(e.source)
            children[e.source].add(e.target)

        self._nodes = node_tuple
        self._edges = edge_tuple
        self._by_name = by_name
        self._edge_by_pair = edge_by_pair
        self._parents = {k: frozenset(v) for k, v in parents.items()}
        self._children = {k: frozenset(v) for k, v in children.items()}
        self._order = self._toposort()
        self._anc_cache: dict[str, frozenset[str]] = {}
        self._desc_cache: dict[str, frozenset[str]] = {}

    def _toposort(self) -> tuple[str, ...]:
        # Kahn-style, but scanning in declaration order so the result is
        # reproducible across runs.
        placed: set[str] = set()
        order: list[str] = []
        remaining = [d.name for d in self._nodes]
        while remaining:
            rest = []
            for name in remaining:
                if self._parents[name] <= placed:
                    order.append(name)
                    placed.add(name)
                else:
                    rest.append(name)
            if len(rest) == len(remaining):
                raise CycleError(self._find_cycle(rest))
            remaining = rest
        return tuple(order)

    def _find_cycle(self, remaining: list[str]) -> tuple[str, ...]:
        # Every node left over has a parent that is also left over, so
        # walking parents must revisit a node.
        stuck = set(remaining)
        walk = [remaining[0]]
        seen = {remaining[0]: 0}
        while True:
            cur = walk[-1]
            nxt = min(self._parents[cur] & stuck)
            if nxt in seen:
                cycle = walk[seen[nxt]:]
                return tuple(reversed(cycle))  # parent walk reversed reads source -> target
            seen[nxt] = len(walk)
            walk.append(nxt)

    # -- basic access -------------------------------------------------

    @property
    def nodes(self) -> tuple[NodeDecl, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[EdgeDecl, ...]:
        return self._edges

    def node_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self._nodes)

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.node_names())

    def node(self, name: str) -> NodeDecl:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownNodeError(name) from None

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self._edge_by_pair

    def edge(self, source: str, target: str) -> EdgeDecl:
        try:
            return self._edge_by_pair[(source, target)]
        except KeyError:
            raise UnknownNodeError(f"{source} -> {target}") from None

    # -- kinship ------------------------------------------------------

    def parents(self, name: str) -> frozenset[str]:
        self.node(name)
        return self._parents[name]

    def children(self, name: str) -> frozenset[str]:
        self.node(name)
        return self._children[name]

    def neighbors(self, name: str) -> frozenset[str]:
        return self.parents(name) | self.children(name)

    def ancestors(self, name: str) -> frozenset[str]:
        """Proper ancestors: the node itself is excluded."""
        self.node(name)
        return self._closure(name, self._parents, self._anc_cache)

    def descendants(self, name: str) -> frozenset[str]:
        """Proper descendants: the node itself is excluded."""
        self.node(name)
        return self._closure(name, self._children, self._desc_cache)

    @staticmethod
    def _closure(
        name: str,
        step: dict[str, frozenset[str]],
        cache: dict[str, frozenset[str]],
    ) -> frozenset[str]:
        hit = cache.get(name)
        if hit is not None:
            return hit
        out: set[str] = set()
        frontier = list(step[name])
        while frontier:
            cur = frontier.pop()
            if cur in out:
                continue
            out.add(cur)
            frontier.extend(step[cur])
        result = frozenset(out)
        cache[name] = result
        return result

    # -- annotation views ---------------------------------------------

    def conditioned_names(self) -> frozenset[str]:
        return frozenset(d.name for d in self._nodes if d.conditioned)

    def unobserved_names(self) -> frozenset[str]:
        return frozenset(d.name for d in self._nodes if d.unobserved)

    def topological_order(self) -> tuple[str, ...]:
        return self._order

    # -- identity -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self._nodes == other._nodes and frozenset(self._edges) == frozenset(
            other._edges
        )

    def __hash__(self) -> int:
        return hash((self._nodes, frozenset(self._edges)))

    def __repr__(self) -> str:
        return f"Dag({len(self._nodes)} nodes, {len(self._edges)} edges)"


def build_dag(nodes: Iterable[NodeDecl], edges: Iterable[EdgeDecl]) -> Dag:
    """Validate declarations and assemble an immutable DAG.

    Raises
    ------
    DuplicateNodeError, DuplicateEdgeError, SelfLoopError, DanglingEdgeError,
    ConflictingFlagsError, CycleError
    """
    return Dag(nodes, edges)


def kinship(dag: Dag, node: str, relation: str) -> frozenset[str]:
    """Return the requested kin set of `node`.

    `relation` is one of "parents", "children", "ancestors", "descendants".
    Ancestors and descendants are proper (they exclude the node itself).
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}, expected one of {RELATIONS}")
    if node not in dag:
        raise UnknownNodeError(node)
    return getattr(dag, relation)(node)
