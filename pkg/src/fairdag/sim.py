"""Linear-Gaussian realization of a DAG.

Each node is a weighted sum of its parents plus independent Gaussian
noise, evaluated in topological order. That keeps every conditional
independence decidable in closed form (partial correlations), which is
what lets the structural verdicts be validated statistically: for
generic coefficients, d-connection shows up as a nonzero partial
correlation and d-separation as a zero one.

Two different notions of "conditioning" live here and must not be
confused. `ci_test` conditions by partialling out regressors, the
analyst's adjustment. `select` conditions by throwing away rows, the
world's selection mechanism. The whole point of the collider examples
is that the second one also opens paths.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from itertools import combinations
from statistics import NormalDist
from typing import Iterable

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    EmptySelectionError,
    InsufficientSamplesError,
    MissingCoefficientError,
    NonPositiveNoiseError,
    ParseError,
    SingularConditioningSetError,
    UnknownColumnError,
    UnknownNodeError,
)
from .graph import Dag
from .paths import d_separated

COEFF_MAGNITUDE = (0.4, 0.9)  # random coefficients are kept away from zero
NOISE_SD_KEYWORD = "NOISE_SD"


@dataclass(frozen=True)
class ScmSpec:
    """A DAG with one linear coefficient per edge and per-node noise."""

    dag: Dag
    coefficients: dict[tuple[str, str], float]
    noise_sd: dict[str, float]
    seed: int = 0


@dataclass(frozen=True, eq=False)
class SampleTable:
    """Sampled columns, one array per node.

    Unobserved nodes are sampled like any other (the world does not care
    what we can measure) but stay flagged so analyses can exclude them.
    `selected_from` records the pre-selection row count after `select`.
    """

    columns: dict[str, np.ndarray]
    n: int
    seed: int
    unobserved: frozenset[str] = frozenset()
    selected_from: int | None = None

    def column(self, name: str) -> np.ndarray:
        try:
            return self.columns[name]
        except KeyError:
            raise UnknownColumnError(name) from None


@dataclass(frozen=True)
class CiTestResult:
    r: float
    z: float
    alpha: float
    independent: bool
    n_effective: int


@dataclass(frozen=True)
class TripleResult:
    x: str
    y: str
    given: frozenset[str]
    separated: bool
    independent: bool

    @property
    def agree(self) -> bool:
        return self.separated == self.independent


@dataclass(frozen=True)
class FaithfulnessReport:
    """Structural verdicts held against statistical ones, per triple.

    type_i counts d-separated triples the test calls dependent (false
    alarms, expected at roughly the alpha rate); type_ii counts
    d-connected triples the test calls independent (missed dependences,
    near-zero at generic coefficients and decent sample sizes).
    """

    results: tuple[TripleResult, ...] = field(repr=False)
    agreements: int
    type_i: int
    type_ii: int
    n: int
    alpha: float
    max_cond_size: int

    @property
    def n_triples(self) -> int:
        return len(self.results)


def build_scm(
    dag: Dag,
    coefficients: dict[tuple[str, str], float] | None = None,
    *,
    seed: int | None = None,
    noise_sd: dict[str, float] | None = None,
) -> ScmSpec:
    """Assemble a simulation spec from explicit or random coefficients.

    With `coefficients` given, every edge must be covered and no extra
    pair is tolerated. Without it, `seed` is required and coefficients
    are drawn with magnitude in [0.4, 0.9] and random sign, one draw per
    edge in lexicographic order, so the same seed reproduces the same
    spec. Noise defaults to sd 1.0 per node; overrides must be positive.
    """
    edge_pairs = {(e.source, e.target) for e in dag.edges}
    if coefficients is None:
        if seed is None:
            raise ValueError("random coefficients need a seed")
        rng = np.random.default_rng(seed)
        coefficients = {}
        for pair in sorted(edge_pairs):
            magnitude = rng.uniform(*COEFF_MAGNITUDE)
            sign = -1.0 if rng.random() < 0.5 else 1.0
            coefficients[pair] = sign * magnitude
    else:
        for pair in sorted(edge_pairs):
            if pair not in coefficients:
                raise MissingCoefficientError(*pair)
        for pair in coefficients:
            if pair not in edge_pairs:
                raise ValueError(f"coefficient for nonexistent edge {pair[0]} -> {pair[1]}")
        coefficients = dict(coefficients)

    noise = {name: 1.0 for name in dag.node_names()}
    for name, value in (noise_sd or {}).items():
        if name not in dag:
            raise UnknownNodeError(name)
        if value <= 0:
            raise NonPositiveNoiseError(name, value)
        noise[name] = float(value)

    return ScmSpec(dag, coefficients, noise, seed if seed is not None else 0)


def sample(scm: ScmSpec, n: int, seed: int | None = None) -> SampleTable:
    """Draw n joint samples; same (spec, n, seed) is bit-identical.

    Noise is consumed one column per node in topological order and
    parent contributions are added in sorted order, so the float stream
    is fully determined by the seed.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got n={n}")
    effective_seed = scm.seed if seed is None else seed
    rng = np.random.default_rng(effective_seed)
    columns: dict[str, np.ndarray] = {}
    for name in scm.dag.topological_order():
        value = rng.standard_normal(n) * scm.noise_sd[name]
        for parent in sorted(scm.dag.parents(name)):
            value = value + scm.coefficients[(parent, name)] * columns[parent]
        columns[name] = value
    ordered = {name: columns[name] for name in scm.dag.node_names()}
    return SampleTable(ordered, n, effective_seed, scm.dag.unobserved_names())


def partial_correlation(
    data: SampleTable, x: str, y: str, given: Iterable[str] = ()
) -> float:
    """Sample partial correlation of x and y given a set of columns.

    Computed from the precision matrix of the joint covariance:
    r = -P[x,y] / sqrt(P[x,x] * P[y,y]). The residualization route gives
    the same number and is held against this one in the tests.
    """
    given = tuple(sorted(set(given)))
    for name in (x, y, *given):
        data.column(name)
    if x == y:
        return 1.0
    if data.n <= len(given) + 3:
        raise InsufficientSamplesError(data.n, len(given))
    matrix = np.column_stack([data.columns[name] for name in (x, y, *given)])
    cov = np.cov(matrix, rowvar=False)
    try:
        precision = np.linalg.inv(cov)
    except np.linalg.LinAlgError:
        raise SingularConditioningSetError(
            f"covariance of ({x}, {y} | {', '.join(given)}) is singular"
        ) from None
    denom = precision[0, 0] * precision[1, 1]
    if denom <= 0:
        raise SingularConditioningSetError(
            f"covariance of ({x}, {y} | {', '.join(given)}) is numerically singular"
        )
    r = -precision[0, 1] / math.sqrt(denom)
    return float(min(1.0, max(-1.0, r)))


def fisher_z(r: float, n: int, given_size: int) -> float:
    """Fisher z statistic: atanh(r) * sqrt(n - |given| - 3)."""
    dof = n - given_size - 3
    if dof <= 0:
        raise InsufficientSamplesError(n, given_size)
    if abs(r) >= 1.0:
        return math.inf if r > 0 else -math.inf
    return math.atanh(r) * math.sqrt(dof)


def ci_test(
    data: SampleTable,
    x: str,
    y: str,
    given: Iterable[str] = (),
    alpha: float = 0.05,
) -> CiTestResult:
    """Fisher-z conditional independence test.

    Independence is accepted when |z| stays below the standard normal
    two-sided quantile at level alpha. No small-sample correction beyond
    the n - |given| - 3 degrees of freedom.
    """
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRangeError(alpha)
    given = tuple(sorted(set(given)))
    r = partial_correlation(data, x, y, given)
    z = fisher_z(r, data.n, len(given))
    critical = NormalDist().inv_cdf(1.0 - alpha / 2.0)
    return CiTestResult(
        r=r, z=z, alpha=alpha, independent=abs(z) < critical, n_effective=data.n
    )


_SELECT_THRESHOLD = re.compile(
    r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*([<>])\s*([+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*$"
)
_SELECT_QUANTILE = re.compile(
    r"^\s*([A-Za-z][A-Za-z0-9_]*)\s+(top|bottom)\s+(\d+(?:\.\d*)?)\s*$"
)


def parse_selection(text: str) -> tuple[str, str, float]:
    """Parse a selection predicate: 'S>0', 'S<1.5', 'S top 0.5',
    'S bottom 0.25'."""
    m = _SELECT_THRESHOLD.match(text)
    if m:
        return m.group(1), m.group(2), float(m.group(3))
    m = _SELECT_QUANTILE.match(text)
    if m:
        return m.group(1), m.group(2), float(m.group(3))
    raise ValueError(
        f"cannot parse selection {text!r}; expected NODE>c, NODE<c, "
        "NODE top q or NODE bottom q"
    )


def select(data: SampleTable, node: str, op: str, value: float) -> SampleTable:
    """Row-filter the table on one column.

    op is one of '>', '<' (threshold) or 'top', 'bottom' (keep the given
    quantile fraction). This models selection into the sample, not
    statistical adjustment.
    """
    column = data.column(node)
    if op == ">":
        mask = column > value
        detail = f"{node} > {value}"
    elif op == "<":
        mask = column < value
        detail = f"{node} < {value}"
    elif op in ("top", "bottom"):
        if not 0.0 < value <= 1.0:
            raise ValueError(f"quantile fraction must be in (0, 1], got {value}")
        if op == "top":
            mask = column >= np.quantile(column, 1.0 - value)
        else:
            mask = column <= np.quantile(column, value)
        detail = f"{node} {op} {value}"
    else:
        raise ValueError(f"unknown selection op {op!r}")
    kept = int(mask.sum())
    if kept == 0:
        raise EmptySelectionError(detail)
    filtered = {name: col[mask] for name, col in data.columns.items()}
    return SampleTable(filtered, kept, data.seed, data.unobserved, data.n)


def faithfulness_check(
    scm: ScmSpec,
    *,
    n: int,
    alpha: float = 0.01,
    max_cond_size: int = 2,
    seed: int | None = None,
) -> FaithfulnessReport:
    """Hold structural verdicts against Fisher-z verdicts on one sample.

    Tests every pair of observed nodes against every conditioning subset
    of the other observed nodes up to `max_cond_size`. Declared
    conditioned flags are cleared for the structural side: the sampler
    draws the unconditional population, so only the explicit subsets are
    compared.
    """
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRangeError(alpha)
    bare = Dag(
        tuple(replace(d, conditioned=False) for d in scm.dag.nodes), scm.dag.edges
    )
    table = sample(scm, n, seed)
    observed = sorted(set(bare.node_names()) - bare.unobserved_names())
    results: list[TripleResult] = []
    for x, y in combinations(observed, 2):
        others = [o for o in observed if o != x and o != y]
        for size in range(min(max_cond_size, len(others)) + 1):
            for subset in combinations(others, size):
                given = frozenset(subset)
                separated = d_separated(bare, x, y, given).separated
                independent = ci_test(table, x, y, given, alpha).independent
                results.append(TripleResult(x, y, given, separated, independent))
    agreements = sum(1 for t in results if t.agree)
    type_i = sum(1 for t in results if t.separated and not t.independent)
    type_ii = sum(1 for t in results if not t.separated and t.independent)
    return FaithfulnessReport(
        results=tuple(results),
        agreements=agreements,
        type_i=type_i,
        type_ii=type_ii,
        n=n,
        alpha=alpha,
        max_cond_size=max_cond_size,
    )


def parse_coefficients(
    text: str,
) -> tuple[dict[tuple[str, str], float], dict[str, float]]:
    """Parse a coefficient file.

    One `SOURCE TARGET VALUE` triple per line sets an edge coefficient;
    `NODE NOISE_SD VALUE` overrides a noise sd. `#` starts a comment.
    Validation against a concrete dag happens in :func:`build_scm`.
    """
    coefficients: dict[tuple[str, str], float] = {}
    noise: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                "expected 'SOURCE TARGET VALUE' or 'NODE NOISE_SD VALUE'", lineno
            )
        first, second, literal = parts
        try:
            value = float(literal)
        except ValueError:
            raise ParseError(f"bad number {literal!r}", lineno) from None
        if second == NOISE_SD_KEYWORD:
            if first in noise:
                raise ParseError(f"duplicate noise override for {first!r}", lineno)
            noise[first] = value
        else:
            pair = (first, second)
            if pair in coefficients:
                raise ParseError(f"duplicate coefficient for {first} -> {second}", lineno)
            coefficients[pair] = value
    return coefficients, noise
