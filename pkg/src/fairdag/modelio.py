"""The model file format (.cg): parsing, canonical form, DOT export.

Line-oriented, UTF-8, one directive per line, `#` to end of line is a
comment. Identifiers start with a letter and continue with letters,
digits or underscores; everything is case-sensitive. Nodes must be
declared before any line that references them, which is what lets
semantic errors point at a 1-based line number.

    model NAME
    node NAME [unobserved] [conditioned] [force]
    edge A -> B [unjustified]
    predictor NAME from A,B,... [deterministic]
    interest NAME
    outcome NAME
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    DanglingEdgeError,
    DuplicateNodeError,
    NameCollisionError,
    ParseError,
    UnknownNodeError,
)
from .fairness import PredictorSpec, attach_predictor
from .graph import Dag, EdgeDecl, NodeDecl, build_dag

IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

NODE_FLAGS = ("unobserved", "conditioned", "force")

# lowercase DOT keywords must be quoted when used as node ids
_DOT_KEYWORDS = frozenset({"node", "edge", "graph", "digraph", "subgraph", "strict"})


@dataclass(frozen=True)
class ModelSpec:
    """A parsed model: the graph plus its declared analysis roles."""

    name: str
    dag: Dag
    interest: str | None = None
    outcome: str | None = None
    predictor: PredictorSpec | None = None

    def augmented_dag(self) -> Dag:
        """The graph with the declared predictor attached, if any."""
        if self.predictor is None:
            return self.dag
        return attach_predictor(self.dag, self.predictor)


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _identifier(token: str, lineno: int, column: int) -> str:
    if not IDENTIFIER.match(token):
        raise ParseError(f"invalid identifier {token!r}", lineno, column)
    return token


def parse_model(text: str) -> ModelSpec:
    name: str | None = None
    nodes: list[NodeDecl] = []
    declared: set[str] = set()
    edges: list[EdgeDecl] = []
    interest: str | None = None
    outcome: str | None = None
    predictor: PredictorSpec | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, col0 = toks[0]

        if name is None:
            if head != "model":
                raise ParseError("expected 'model NAME' header", lineno, col0)
            if len(toks) != 2:
                raise ParseError("expected exactly 'model NAME'", lineno, col0)
            name = _identifier(toks[1][0], lineno, toks[1][1])
            continue

        if head == "model":
            raise ParseError("duplicate 'model' header", lineno, col0)

        if head == "node":
            if len(toks) < 2:
                raise ParseError("expected 'node NAME [flags]'", lineno, col0)
            node_name = _identifier(toks[1][0], lineno, toks[1][1])
            if node_name in declared:
                raise DuplicateNodeError(node_name)
            flags = {"unobserved": False, "conditioned": False, "force": False}
            for tok, col in toks[2:]:
                if tok not in NODE_FLAGS:
                    raise ParseError(
                        f"unknown node flag {tok!r}, expected one of {', '.join(NODE_FLAGS)}",
                        lineno,
                        col,
                    )
                if flags[tok]:
                    raise ParseError(f"repeated node flag {tok!r}", lineno, col)
                flags[tok] = True
            nodes.append(NodeDecl(node_name, **flags))
            declared.add(node_name)

        elif head == "edge":
            if len(toks) not in (4, 5) or toks[2][0] != "->":
                raise ParseError("expected 'edge A -> B [unjustified]'", lineno, col0)
            source = _identifier(toks[1][0], lineno, toks[1][1])
            target = _identifier(toks[3][0], lineno, toks[3][1])
            unjustified = False
            if len(toks) == 5:
                tok, col = toks[4]
                if tok != "unjustified":
                    raise ParseError(f"unknown edge flag {tok!r}", lineno, col)
                unjustified = True
            for endpoint in (source, target):
                if endpoint not in declared:
                    raise DanglingEdgeError(endpoint, lineno)
            edges.append(EdgeDecl(source, target, unjustified))

        elif head == "predictor":
            if predictor is not None:
                raise ParseError("duplicate 'predictor' declaration", lineno, col0)
            if len(toks) < 4 or toks[2][0] != "from":
                raise ParseError(
                    "expected 'predictor NAME from A,B,... [deterministic]'", lineno, col0
                )
            pred_name = _identifier(toks[1][0], lineno, toks[1][1])
            if pred_name in declared:
                raise NameCollisionError(pred_name, lineno)
            rest = toks[3:]
            deterministic = False
            if rest[-1][0] == "deterministic":
                deterministic = True
                rest = rest[:-1]
            if not rest:
                raise ParseError("predictor needs at least one input node", lineno, col0)
            joined = "".join(tok for tok, _ in rest)
            parents = joined.split(",")
            if any(not p for p in parents):
                raise ParseError("malformed predictor input list", lineno, rest[0][1])
            for parent in parents:
                _identifier(parent, lineno, rest[0][1])
                if parent not in declared:
                    raise UnknownNodeError(parent, lineno)
            predictor = PredictorSpec(pred_name, frozenset(parents), deterministic)

        elif head in ("interest", "outcome"):
            if len(toks) != 2:
                raise ParseError(f"expected '{head} NAME'", lineno, col0)
            role_name = _identifier(toks[1][0], lineno, toks[1][1])
            if role_name not in declared:
                raise UnknownNodeError(role_name, lineno)
            if head == "interest":
                if interest is not None:
                    raise ParseError("duplicate 'interest' declaration", lineno, col0)
                interest = role_name
            else:
                if outcome is not None:
                    raise ParseError("duplicate 'outcome' declaration", lineno, col0)
                outcome = role_name

        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col0)

    if name is None:
        raise ParseError("missing 'model' header", 1, 1)
    if predictor is not None and predictor.name in declared:
        # a node declared after the predictor line can collide too
        raise NameCollisionError(predictor.name)

    dag = build_dag(nodes, edges)
    return ModelSpec(name, dag, interest, outcome, predictor)


def serialize_model(spec: ModelSpec) -> str:
    """Canonical text form: header, nodes in declaration order, edges
    sorted lexicographically, roles last. parse(serialize(m)) == m."""
    lines = [f"model {spec.name}"]
    for decl in spec.dag.nodes:
        flags = [flag for flag in NODE_FLAGS if getattr(decl, flag)]
        lines.append(" ".join(["node", decl.name, *flags]))
    for e in sorted(spec.dag.edges, key=lambda e: (e.source, e.target)):
        suffix = " unjustified" if e.unjustified else ""
        lines.append(f"edge {e.source} -> {e.target}{suffix}")
    if spec.interest is not None:
        lines.append(f"interest {spec.interest}")
    if spec.outcome is not None:
        lines.append(f"outcome {spec.outcome}")
    if spec.predictor is not None:
        parents = ",".join(sorted(spec.predictor.predictor_set))
        suffix = " deterministic" if spec.predictor.deterministic else ""
        lines.append(f"predictor {spec.predictor.name} from {parents}{suffix}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    return f'"{name}"' if name.lower() in _DOT_KEYWORDS else name


def export_dot(spec: ModelSpec, *, rankdir: str | None = None) -> str:
    """Graphviz text for the model, deterministic for a given spec.

    Styling: unjustified edges red, conditioned nodes double-bordered,
    unobserved nodes dashed, the predictor node boxed. A model with no
    annotations exports as plain DOT with no attributes at all.
    """
    lines = [f"digraph {_dot_id(spec.name)} {{"]
    if rankdir is not None:
        lines.append(f"  rankdir={rankdir};")
    for decl in spec.dag.nodes:
        attrs = []
        if decl.unobserved:
            attrs.append("style=dashed")
        if decl.conditioned:
            attrs.append("peripheries=2")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_dot_id(decl.name)}{suffix};")
    if spec.predictor is not None:
        lines.append(f"  {_dot_id(spec.predictor.name)} [shape=box];")
    for e in sorted(spec.dag.edges, key=lambda e: (e.source, e.target)):
        suffix = " [color=red]" if e.unjustified else ""
        lines.append(f"  {_dot_id(e.source)} -> {_dot_id(e.target)}{suffix};")
    if spec.predictor is not None:
        for parent in sorted(spec.predictor.predictor_set):
            lines.append(f"  {_dot_id(parent)} -> {_dot_id(spec.predictor.name)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
