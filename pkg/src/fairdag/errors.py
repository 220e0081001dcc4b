"""Exception types shared across the package."""

from __future__ import annotations


class FairDagError(Exception):
    """Base class for every error raised by this package."""


class GraphError(FairDagError):
    """Structural problem in a graph declaration."""


class CycleError(GraphError):
    """The declared edges contain a directed cycle."""

    def __init__(self, cycle: tuple[str, ...]):
        self.cycle = tuple(cycle)
        loop = " -> ".join(self.cycle + (self.cycle[0],))
        super().__init__(f"graph contains a directed cycle: {loop}")


class DuplicateNodeError(GraphError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"node {name!r} declared more than once")


class DuplicateEdgeError(GraphError):
    def __init__(self, source: str, target: str):
        self.source, self.target = source, target
        super().__init__(f"edge {source} -> {target} declared more than once")


class DanglingEdgeError(GraphError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"edge references undeclared node {name!r}{where}")


class SelfLoopError(GraphError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"self-loop on node {name!r}")


class UnknownNodeError(GraphError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown node {name!r}{where}")


class ConflictingFlagsError(GraphError):
    """Node declared both unobserved and conditioned without `force`."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(
            f"node {name!r} is both unobserved and conditioned; "
            "declare it with `force` if this is intentional"
        )


class SameNodeError(FairDagError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"the two endpoints must differ, got {name!r} twice")


class OverlapError(FairDagError):
    """An endpoint appears in the conditioning set."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"endpoint {name!r} appears in the conditioning set")


class InvalidPathError(FairDagError):
    pass


class RoleIndexError(FairDagError, IndexError):
    """Path endpoints have no role; only inner nodes do."""


class TooManyWitnessesError(FairDagError):
    def __init__(self, x: str, y: str, cap: int):
        self.x, self.y, self.cap = x, y, cap
        super().__init__(
            f"more than {cap} directed paths from {x!r} to {y!r}; "
            "raise max_witnesses to enumerate them all"
        )


class NotAPredictorError(FairDagError):
    def __init__(self, name: str, reason: str):
        self.name = name
        super().__init__(f"node {name!r} is not an attached predictor: {reason}")


class NameCollisionError(FairDagError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"predictor name {name!r} collides with an existing node{where}")


class EmptyPredictorSetError(FairDagError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"predictor {name!r} has an empty predictor set")


class UnknownPredictorError(FairDagError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"predictor set references unknown node {name!r}")


class MissingCoefficientError(FairDagError):
    def __init__(self, source: str, target: str):
        self.source, self.target = source, target
        super().__init__(f"no coefficient supplied for edge {source} -> {target}")


class NonPositiveNoiseError(FairDagError):
    def __init__(self, name: str, value: float):
        self.name, self.value = name, value
        super().__init__(f"noise sd for node {name!r} must be positive, got {value}")


class UnknownColumnError(FairDagError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"sample table has no column {name!r}")


class InsufficientSamplesError(FairDagError):
    def __init__(self, n: int, given_size: int):
        self.n, self.given_size = n, given_size
        super().__init__(
            f"need more than {given_size + 3} samples to condition on "
            f"{given_size} variables, got {n}"
        )


class SingularConditioningSetError(FairDagError):
    def __init__(self, detail: str = "covariance matrix is singular"):
        super().__init__(detail)


class AlphaOutOfRangeError(FairDagError):
    def __init__(self, alpha: float):
        self.alpha = alpha
        super().__init__(f"alpha must lie strictly between 0 and 1, got {alpha}")


class EmptySelectionError(FairDagError):
    def __init__(self, detail: str):
        super().__init__(f"selection keeps no rows: {detail}")


class ParseError(FairDagError):
    """Syntax error in a model or coefficient file. Positions are 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
