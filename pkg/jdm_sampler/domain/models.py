"""Domain models for the JDM sampler."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from .exceptions import InvalidInputError

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Jdm:
    """Represents a joint-degree matrix.

    ``entries[a - 1][b - 1]`` is the number of edges between nodes of degree
    ``a`` and nodes of degree ``b``; degrees are 1-indexed in every accessor.
    """
    dim: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.dim:
            raise InvalidInputError(f"expected {self.dim} rows, got {len(self.entries)}")
        for a, row in enumerate(self.entries):
            if len(row) != self.dim:
                raise InvalidInputError(f"row {a + 1} has {len(row)} entries, expected {self.dim}")
            for b, value in enumerate(row):
                if value < 0:
                    raise InvalidInputError(f"negative entry at ({a + 1}, {b + 1})")
                if value != self.entries[b][a]:
                    raise InvalidInputError(f"matrix is not symmetric at ({a + 1}, {b + 1})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "Jdm":
        """Build a JDM from nested integer rows."""
        entries = tuple(tuple(int(v) for v in row) for row in rows)
        return cls(dim=len(entries), entries=entries)

    @classmethod
    def from_pairs(cls, dim: int, counts: Dict[Tuple[int, int], int]) -> "Jdm":
        """Build a JDM from ``{(alpha, beta): count}`` with 1-indexed degrees."""
        rows = [[0] * dim for _ in range(dim)]
        for (a, b), value in counts.items():
            rows[a - 1][b - 1] = value
            rows[b - 1][a - 1] = value
        return cls.from_rows(rows)

    def get(self, alpha: int, beta: int) -> int:
        if alpha < 1 or beta < 1 or alpha > self.dim or beta > self.dim:
            return 0
        return self.entries[alpha - 1][beta - 1]

    def row_sum(self, alpha: int) -> int:
        return sum(self.entries[alpha - 1])

    def nonzero_pairs(self) -> List[Tuple[int, int]]:
        """Unordered class pairs ``alpha <= beta`` with at least one edge, ascending."""
        return [
            (a, b)
            for a in range(1, self.dim + 1)
            for b in range(a, self.dim + 1)
            if self.entries[a - 1][b - 1] > 0
        ]

    def trimmed(self) -> "Jdm":
        """Drop trailing all-zero rows and columns."""
        dim = self.dim
        while dim > 0 and not any(self.entries[dim - 1]):
            dim -= 1
        return Jdm(dim=dim, entries=tuple(row[:dim] for row in self.entries[:dim]))


@dataclass(frozen=True)
class DegreeClassPartition:
    """Node indexing grouped by degree class.

    Classes occupy contiguous index ranges in ``class_order``: descending
    class size, ties broken by descending degree.
    """
    class_size: Dict[int, int]
    class_order: Tuple[int, ...]
    class_offset: Dict[int, int]
    total_nodes: int
    total_edges: int

    def members(self, alpha: int) -> range:
        start = self.class_offset.get(alpha, 0)
        return range(start, start + self.class_size.get(alpha, 0))

    def node_degrees(self) -> Tuple[int, ...]:
        """Class degree of every node, in index order."""
        degrees: List[int] = []
        for alpha in self.class_order:
            degrees.extend([alpha] * self.class_size[alpha])
        return tuple(degrees)


@dataclass(frozen=True)
class DegreeSequence:
    """Represents an undirected degree sequence, stored non-increasing."""
    degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 0 for d in self.degrees):
            raise InvalidInputError("degrees must be non-negative")
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))

    def __len__(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class BiDegreeSequence:
    """Represents a directed bi-degree sequence of ``(in_degree, out_degree)`` pairs."""
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if any(d_in < 0 or d_out < 0 for d_in, d_out in self.pairs):
            raise InvalidInputError("degrees must be non-negative")

    def __len__(self) -> int:
        return len(self.pairs)

    def ordered(self) -> "BiDegreeSequence":
        """Lexicographic order: in-degree descending, ties by out-degree descending."""
        return BiDegreeSequence(tuple(sorted(self.pairs, key=lambda p: (-p[0], -p[1]))))


@dataclass(frozen=True)
class LabeledGraph:
    """Represents a simple undirected graph on nodes ``0..n-1``."""
    n: int
    edges: FrozenSet[Edge]

    def __post_init__(self) -> None:
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise InvalidInputError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInputError(f"edge ({u}, {v}) outside {self.n} nodes")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "LabeledGraph":
        """Build a graph, rejecting duplicate edges."""
        seen = set()
        for u, v in edges:
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InvalidInputError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
        return cls(n=n, edges=frozenset(seen))

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> List[set]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def edge_list(self) -> List[Edge]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class WeightedSample:
    """Represents one constructed graph with its importance weight."""
    sample_id: int
    spectra_id: int
    graph: LabeledGraph
    log_weight: float
    spectra_log_weight: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.log_weight):
            raise InvalidInputError(f"sample {self.sample_id} has non-finite log-weight")


@dataclass(frozen=True)
class Triplet:
    """Represents a partial bipartite degree-sequence problem."""
    p: Tuple[int, ...]
    q: Tuple[int, ...]
    eps: int
    size_b: int
    size_k: int


@dataclass(frozen=True)
class BalancedCompletion:
    """Represents the balanced completion of a triplet."""
    u_degrees: Tuple[int, ...]
    v_degrees: Tuple[int, ...]
    mu: Fraction
    nu: Fraction


@dataclass(frozen=True)
class SpectraMatrix:
    """Represents a degree-spectra matrix; ``entries[a - 1][i]`` is S_{a,i}."""
    dim: int
    n: int
    entries: Tuple[Tuple[int, ...], ...]

    def get(self, alpha: int, node: int) -> int:
        return self.entries[alpha - 1][node]

    def column(self, node: int) -> Tuple[int, ...]:
        return tuple(row[node] for row in self.entries)


@dataclass(frozen=True)
class Bounds:
    """Represents the bounds of one spectra cell."""
    min_value: int
    max_value: int
    low: int
    high: int


@dataclass(frozen=True)
class SpectraDecision:
    """Represents one extracted spectra cell and its range."""
    node: int
    beta: int
    low: int
    high: int
    value: int


@dataclass(frozen=True)
class SpectraSample:
    """Represents a sampled spectra matrix, its log-weight and its decisions."""
    matrix: SpectraMatrix
    log_weight: float
    decisions: Tuple[SpectraDecision, ...] = ()

    def __iter__(self) -> Iterator:
        return iter((self.matrix, self.log_weight))


@dataclass(frozen=True)
class SamplerState:
    """Snapshot of a degree-sequence sampler.

    ``residual`` holds integers for the undirected sampler and
    ``(in_degree, out_degree)`` pairs for the directed one.
    """
    residual: Tuple
    forbidden: FrozenSet[int]
    hub: int
    allowed_sizes: Tuple[int, ...] = ()
    hub_degrees: Tuple[int, ...] = ()


@dataclass(frozen=True)
class SequenceSample:
    """Represents one sampler run on a (bi-)degree sequence."""
    edges: FrozenSet[Edge]
    log_weight: float
    allowed_sizes: Tuple[int, ...]
    hub_degrees: Tuple[int, ...]
    directed: bool = False

    def exact_weight(self) -> Fraction:
        """Exact sample weight: prod |A|, divided by prod d! when undirected."""
        weight = Fraction(math.prod(self.allowed_sizes))
        if not self.directed:
            weight /= math.prod(math.factorial(d) for d in self.hub_degrees)
        return weight


@dataclass(frozen=True)
class SubgraphProblem:
    """Represents the degree-sequence problem of one class pair.

    For a unipartite problem only ``nodes``/``degrees`` are used; for a
    bipartite one ``nodes`` is the alpha side and ``partner_nodes`` the beta
    side. Local index ``k`` maps to ``(nodes + partner_nodes)[k]``.
    """
    kind: str
    classes: Tuple[int, int]
    nodes: Tuple[int, ...]
    degrees: Tuple[int, ...]
    edge_budget: int
    partner_nodes: Tuple[int, ...] = ()
    partner_degrees: Tuple[int, ...] = ()

    @property
    def translation(self) -> Tuple[int, ...]:
        return self.nodes + self.partner_nodes


@dataclass(frozen=True)
class JdmRealization:
    """Represents a JDM graph with its per-subgraph sampler runs."""
    graph: LabeledGraph
    parts: Tuple[Tuple[SubgraphProblem, SequenceSample], ...]

    @property
    def log_weight(self) -> float:
        return sum(run.log_weight for _, run in self.parts)

    def exact_weight(self) -> Fraction:
        return math.prod((run.exact_weight() for _, run in self.parts), start=Fraction(1))


@dataclass(frozen=True)
class ObservableSeries:
    """Represents per-sample observable values and log-weights.

    ``groups`` optionally tags each sample with its spectra id and
    ``group_log_weights`` with that spectra matrix's log-weight.
    """
    values: Tuple[float, ...]
    log_weights: Tuple[float, ...]
    groups: Optional[Tuple[int, ...]] = None
    group_log_weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if len(self.values) != len(self.log_weights):
            raise InvalidInputError("values and log-weights differ in length")
        if any(not math.isfinite(lw) for lw in self.log_weights):
            raise InvalidInputError("log-weights must be finite")
        for extra in (self.groups, self.group_log_weights):
            if extra is not None and len(extra) != len(self.values):
                raise InvalidInputError("group annotations differ in length")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LogWeightHistogram:
    """Represents a log-weight histogram with a Gaussian fit per bin."""
    bin_edges: Tuple[float, ...]
    counts: Tuple[int, ...]
    mean: float
    variance: float
    gaussian_fit: Tuple[float, ...]


@dataclass(frozen=True)
class EstimateRow:
    """Represents one line of an estimator report."""
    observable: str
    key: int
    weighted: float
    product_weighted: float
    unweighted: float
    effective_sample_size: float
    n_samples: int


@dataclass(frozen=True)
class DegreeCorrelations:
    """Represents the degree correlations fixed by a JDM."""
    average_neighbor_degree: Dict[int, float]
    assortativity: float


@dataclass(frozen=True)
class IsoClass:
    """Represents one isomorphism class of realizations."""
    representative: LabeledGraph
    members: Tuple[int, ...]


@dataclass(frozen=True)
class RealizationCatalog:
    """Represents every labeled realization of a JDM, grouped by isomorphism."""
    labeled_graphs: Tuple[LabeledGraph, ...]
    iso_classes: Tuple[IsoClass, ...]


@dataclass(frozen=True)
class ExactExpectation:
    """Represents exact infinite-sample estimator targets."""
    weighted: Fraction
    unweighted: Fraction
    product_weighted: Fraction


@dataclass(frozen=True)
class RunConfig:
    """Represents a validated command invocation."""
    command: str
    input_path: str
    seed: Optional[int] = None
    n_spectra: int = 1
    samples_per_spectra: int = 1
    out_path: Optional[str] = None
    observable: str = "clustering"
    max_cycle_len: int = 5
    jobs: int = 1
    spectra_path: Optional[str] = None
    histogram_path: Optional[str] = None
    bins: int = 50
    oracle_limit: int = 10


@dataclass(frozen=True)
class CommandResult:
    """Represents the outcome of a CLI command."""
    exit_code: int
    report: str
    details: Dict[str, object] = field(default_factory=dict)
