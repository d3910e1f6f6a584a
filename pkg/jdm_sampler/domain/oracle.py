"""Brute-force ground truth for small instances.

Exhaustive enumeration of realizations and spectra matrices, exact
estimator targets obtained by walking every branch of the production
samplers, and reference graphicality tests that share no code with the
fast ones.
"""

import itertools
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

import networkx as nx

from .assembler import BIPARTITE, decompose, realize_spectra
from .core import degree_classes, spectra_of_graph
from .estimate import MAX_CYCLE_LEN, clustering_by_degree, cycle_counts
from .exceptions import InvalidInputError, MaxLenExceeded, NotGraphical, TooLarge
from .graphicality import jdm_graphicality_failure
from .models import (
    BiDegreeSequence,
    DegreeClassPartition,
    DegreeSequence,
    Edge,
    ExactExpectation,
    IsoClass,
    Jdm,
    LabeledGraph,
    RealizationCatalog,
    SamplerState,
    SpectraMatrix,
    SpectraSample,
)
from .services import Chooser
from .spectra import SpectraBuildState, sample_spectra, spectra_path_weight, spectra_violation

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10
DIRECTED_LIMIT = 5

T = TypeVar("T")


class ScriptedChooser:
    """Replays a fixed prefix of choices, then always picks index 0.

    Every call's arity is recorded so a caller can enumerate the siblings
    of the path it just took.
    """

    def __init__(self, prefix: Sequence[int] = ()) -> None:
        self._prefix = list(prefix)
        self.choices: List[int] = []
        self.arities: List[int] = []

    def choose(self, n: int) -> int:
        t = len(self.choices)
        value = self._prefix[t] if t < len(self._prefix) else 0
        if not 0 <= value < n:
            raise InvalidInputError(f"scripted choice {value} outside range({n})")
        self.choices.append(value)
        self.arities.append(n)
        return value


def walk_decisions(run: Callable[[Chooser], T]) -> Iterator[Tuple[T, Fraction]]:
    """Run ``run`` once along every path of its decision tree.

    Args:
        run: Sampler invocation drawing all randomness from the given chooser

    Yields:
        Each leaf's result with its exact probability, the product of 1/arity
    """
    stack: List[List[int]] = [[]]
    while stack:
        prefix = stack.pop()
        chooser = ScriptedChooser(prefix)
        result = run(chooser)
        probability = Fraction(1)
        for arity in chooser.arities:
            probability /= arity
        yield result, probability
        for t in range(len(chooser.choices) - 1, len(prefix) - 1, -1):
            for alternative in range(1, chooser.arities[t]):
                stack.append(chooser.choices[:t] + [alternative])


def _guard(part: DegreeClassPartition, limit_n: int) -> None:
    if part.total_nodes > limit_n:
        raise TooLarge(f"{part.total_nodes} nodes exceed the enumeration limit of {limit_n}")


def _require_graphical(j: Jdm) -> DegreeClassPartition:
    failure = jdm_graphicality_failure(j)
    if failure is not None:
        raise NotGraphical(failure)
    return degree_classes(j)


def _realizations(j: Jdm, part: DegreeClassPartition) -> Iterator[LabeledGraph]:
    slots: List[Tuple[int, int, int]] = []
    need: Dict[int, int] = {}
    for p, (alpha, beta) in enumerate(j.nonzero_pairs()):
        need[p] = j.get(alpha, beta)
        if alpha == beta:
            pairs = itertools.combinations(part.members(alpha), 2)
        else:
            pairs = itertools.product(part.members(alpha), part.members(beta))
        slots.extend((p, u, v) for u, v in pairs)

    residual = list(part.node_degrees())
    available = [0] * part.total_nodes
    left_in_pair: Dict[int, int] = defaultdict(int)
    for p, u, v in slots:
        available[u] += 1
        available[v] += 1
        left_in_pair[p] += 1
    chosen: List[Edge] = []

    def search(t: int) -> Iterator[LabeledGraph]:
        if t == len(slots):
            yield LabeledGraph(n=part.total_nodes, edges=frozenset(chosen))
            return
        p, u, v = slots[t]
        available[u] -= 1
        available[v] -= 1
        left_in_pair[p] -= 1
        if need[p] > 0 and residual[u] > 0 and residual[v] > 0:
            need[p] -= 1
            residual[u] -= 1
            residual[v] -= 1
            chosen.append((u, v))
            if residual[u] <= available[u] and residual[v] <= available[v] and need[p] <= left_in_pair[p]:
                yield from search(t + 1)
            chosen.pop()
            need[p] += 1
            residual[u] += 1
            residual[v] += 1
        if residual[u] <= available[u] and residual[v] <= available[v] and need[p] <= left_in_pair[p]:
            yield from search(t + 1)
        available[u] += 1
        available[v] += 1
        left_in_pair[p] += 1

    yield from search(0)


def enumerate_realizations(
    j: Jdm, limit_n: int = DEFAULT_LIMIT, spectra: Optional[SpectraMatrix] = None
) -> RealizationCatalog:
    """Every labeled realization of a JDM, grouped by isomorphism.

    Graphs live on the partition's node indexing. Isomorphism classes are
    bucketed by Weisfeiler-Lehman hash and separated with an exact test.

    Args:
        j: Joint-degree matrix
        limit_n: Largest node count accepted
        spectra: Keep only graphs with this spectra matrix

    Raises:
        NotGraphical: If ``j`` is not graphical
        TooLarge: If the JDM has more than ``limit_n`` nodes
    """
    part = _require_graphical(j)
    _guard(part, limit_n)
    graphs = [
        g for g in _realizations(j, part)
        if spectra is None or spectra_of_graph(g, part, spectra.dim) == spectra
    ]

    buckets: Dict[str, List[Tuple[nx.Graph, List[int]]]] = defaultdict(list)
    for index, g in enumerate(graphs):
        graph = g.to_networkx()
        bucket = buckets[nx.weisfeiler_lehman_graph_hash(graph)]
        for representative, members in bucket:
            if nx.is_isomorphic(representative, graph):
                members.append(index)
                break
        else:
            bucket.append((graph, [index]))

    classes = sorted(
        (members for bucket in buckets.values() for _, members in bucket),
        key=lambda members: members[0],
    )
    logger.debug("Realizations enumerated", extra={"labeled": len(graphs), "classes": len(classes)})
    return RealizationCatalog(
        labeled_graphs=tuple(graphs),
        iso_classes=tuple(IsoClass(representative=graphs[m[0]], members=tuple(m)) for m in classes),
    )


def reference_bipartite_graphicality(a: Sequence[int], b: Sequence[int]) -> bool:
    """Gale-Ryser test for a bipartite degree sequence pair."""
    if sum(a) != sum(b) or any(x < 0 for x in itertools.chain(a, b)):
        return False
    ordered = sorted(a, reverse=True)
    return all(
        sum(ordered[:k]) <= sum(min(y, k) for y in b)
        for k in range(1, len(ordered) + 1)
    )


def _subgraphs_realizable(j: Jdm, s: SpectraMatrix, part: DegreeClassPartition) -> bool:
    for problem in decompose(j, s, part):
        if problem.kind == BIPARTITE:
            if not reference_bipartite_graphicality(problem.degrees, problem.partner_degrees):
                return False
        elif not nx.is_valid_degree_sequence_havel_hakimi(list(problem.degrees)):
            return False
    return True


def enumerate_spectra(j: Jdm, limit_n: int = DEFAULT_LIMIT) -> List[SpectraMatrix]:
    """All graphical spectra matrices of a JDM.

    Cells are visited in sampling order; each value is kept when its
    subgraph stays realizable, and every complete matrix is re-validated
    with independent sum and realizability checks.

    Raises:
        NotGraphical: If ``j`` is not graphical
        TooLarge: If the JDM has more than ``limit_n`` nodes
    """
    part = _require_graphical(j)
    _guard(part, limit_n)
    state = SpectraBuildState(j, part)
    cells: List[Tuple[int, int]] = [
        (node, beta)
        for node in range(part.total_nodes)
        for beta in range(1, j.dim + 1)
    ]
    found: List[SpectraMatrix] = []

    def search(t: int) -> None:
        if t == len(cells):
            matrix = state.snapshot()
            if spectra_violation(matrix, j, part) is None and _subgraphs_realizable(j, matrix, part):
                found.append(matrix)
            return
        node, beta = cells[t]
        if j.get(state.class_of(node), beta) == 0:
            candidates: Sequence[int] = (0,)
        else:
            candidates = [v for v in range(state.theoretical_max(node, beta) + 1) if state.is_feasible(node, beta, v)]
        for value in candidates:
            state.set_cell(node, beta, value)
            if beta < j.dim or state.residual_stubs(node) == 0:
                search(t + 1)
            state.unset_cell(node, beta)

    search(0)
    logger.debug("Spectra enumerated", extra={"count": len(found)})
    return found


def spectra_decision_paths(j: Jdm, limit_n: int = DEFAULT_LIMIT) -> List[Tuple[SpectraSample, Fraction]]:
    """Every leaf of the spectra sampler's decision tree with its probability.

    Raises:
        TooLarge: If the JDM has more than ``limit_n`` nodes
    """
    part = _require_graphical(j)
    _guard(part, limit_n)
    return list(walk_decisions(lambda chooser: sample_spectra(j, chooser, part)))


def _exact_observable(g: LabeledGraph, observable: str, max_cycle_len: int) -> Dict[int, Fraction]:
    if observable == "clustering":
        return {k: Fraction(v) for k, v in clustering_by_degree(g, exact=True).items()}
    if observable == "cycles":
        return {k: Fraction(v) for k, v in cycle_counts(g, max_cycle_len).items()}
    raise InvalidInputError(f"unknown observable {observable!r}")


def exact_sampler_expectation(
    j: Jdm, observable: str = "clustering", max_cycle_len: int = 5, limit_n: int = DEFAULT_LIMIT
) -> Dict[int, ExactExpectation]:
    """Infinite-sample limits of the estimators on a small JDM.

    Walks every path of the spectra sampler and, below each spectra matrix,
    every path of the subgraph samplers, using exact path probabilities and
    exact rational weights.

    Args:
        j: Graphical joint-degree matrix
        observable: ``clustering`` or ``cycles``
        max_cycle_len: Longest cycle counted for ``cycles``
        limit_n: Largest node count accepted

    Returns:
        Per key, the stratified-weighted, unweighted and product-weighted
        targets

    Raises:
        TooLarge: If the JDM has more than ``limit_n`` nodes
    """
    part = _require_graphical(j)
    _guard(part, limit_n)

    unweighted: Dict[int, Fraction] = defaultdict(Fraction)
    product_num: Dict[int, Fraction] = defaultdict(Fraction)
    product_den = Fraction(0)
    stratified_num: Dict[int, Fraction] = defaultdict(Fraction)
    stratified_den = Fraction(0)

    for spectra, p in walk_decisions(lambda chooser: sample_spectra(j, chooser, part)):
        spectra_weight = spectra_path_weight(spectra.decisions)
        inner_num: Dict[int, Fraction] = defaultdict(Fraction)
        inner_den = Fraction(0)
        for realization, q in walk_decisions(lambda chooser: realize_spectra(j, spectra.matrix, part, chooser)):
            graph_weight = realization.exact_weight()
            values = _exact_observable(realization.graph, observable, max_cycle_len)
            for key, value in values.items():
                unweighted[key] += p * q * value
                product_num[key] += p * q * spectra_weight * graph_weight * value
                inner_num[key] += q * graph_weight * value
            product_den += p * q * spectra_weight * graph_weight
            inner_den += q * graph_weight
        for key, value in inner_num.items():
            stratified_num[key] += p * spectra_weight * value / inner_den
        stratified_den += p * spectra_weight

    return {
        key: ExactExpectation(
            weighted=stratified_num[key] / stratified_den,
            unweighted=unweighted[key],
            product_weighted=product_num[key] / product_den,
        )
        for key in sorted(unweighted)
    }


def _digraph_exists(ins: List[int], outs: List[int], forbidden: Dict[int, frozenset]) -> bool:
    n = len(ins)

    def place(source: int) -> bool:
        if source == n:
            return not any(ins)
        targets = [
            t for t in range(n)
            if t != source and ins[t] > 0 and t not in forbidden.get(source, frozenset())
        ]
        for combo in itertools.combinations(targets, outs[source]):
            for t in combo:
                ins[t] -= 1
            ok = place(source + 1)
            for t in combo:
                ins[t] += 1
            if ok:
                return True
        return False

    return place(0)


def reference_graphicality(
    d: Union[DegreeSequence, BiDegreeSequence, Sequence[int]], limit_n: int = DIRECTED_LIMIT
) -> bool:
    """Independent graphicality verdict.

    Undirected sequences go through Havel-Hakimi; bi-degree sequences
    through an exhaustive search over 0/1 matrices with a zero diagonal.

    Raises:
        TooLarge: If a bi-degree sequence has more than ``limit_n`` nodes
    """
    if isinstance(d, BiDegreeSequence):
        if len(d) > limit_n:
            raise TooLarge(f"{len(d)} nodes exceed the directed search limit of {limit_n}")
        ins = [p[0] for p in d.pairs]
        outs = [p[1] for p in d.pairs]
        if sum(ins) != sum(outs):
            return False
        return _digraph_exists(ins, outs, {})
    degrees = list(d.degrees) if isinstance(d, DegreeSequence) else list(d)
    return bool(nx.is_valid_degree_sequence_havel_hakimi(degrees))


def _completes_undirected(residual: List[int], hub: int, forbidden: frozenset) -> bool:
    stubs = residual[hub]
    targets = [v for v, d in enumerate(residual) if v != hub and v not in forbidden and d > 0]
    for combo in itertools.combinations(targets, stubs):
        rest = [d - (1 if v in combo else 0) for v, d in enumerate(residual) if v != hub]
        if nx.is_valid_degree_sequence_havel_hakimi(rest):
            return True
    return False


def reference_allowed_nodes(state: SamplerState) -> List[int]:
    """Nodes the hub can connect to next, found by trying each one."""
    allowed = []
    for m, d in enumerate(state.residual):
        if m in state.forbidden or d == 0:
            continue
        residual = list(state.residual)
        residual[state.hub] -= 1
        residual[m] -= 1
        if _completes_undirected(residual, state.hub, state.forbidden | {m}):
            allowed.append(m)
    return allowed


def reference_fail_degree(state: SamplerState) -> int:
    """Largest residual degree among the nodes the hub cannot connect to."""
    allowed = set(reference_allowed_nodes(state))
    failing = [
        d for m, d in enumerate(state.residual)
        if m not in state.forbidden and d > 0 and m not in allowed
    ]
    return max(failing, default=-1)


def reference_allowed_targets(state: SamplerState, limit_n: int = DIRECTED_LIMIT) -> List[int]:
    """Nodes the hub can send its next arc to, found by trying each one.

    Raises:
        TooLarge: If the state has more than ``limit_n`` nodes
    """
    n = len(state.residual)
    if n > limit_n:
        raise TooLarge(f"{n} nodes exceed the directed search limit of {limit_n}")
    allowed = []
    for m, (d_in, _) in enumerate(state.residual):
        if m in state.forbidden or d_in == 0:
            continue
        ins = [pair[0] for pair in state.residual]
        outs = [pair[1] for pair in state.residual]
        ins[m] -= 1
        outs[state.hub] -= 1
        # remaining hub arcs may not revisit the forbidden set
        if _digraph_exists(ins, outs, {state.hub: state.forbidden | {m}}):
            allowed.append(m)
    return allowed


def reference_fail_in_degree(state: SamplerState, limit_n: int = DIRECTED_LIMIT) -> int:
    """Largest in-degree among the nodes the hub cannot send its next arc to."""
    allowed = set(reference_allowed_targets(state, limit_n))
    failing = [
        d_in for m, (d_in, _) in enumerate(state.residual)
        if m not in state.forbidden and d_in > 0 and m not in allowed
    ]
    return max(failing, default=-1)


def reference_cycle_counts(g: LabeledGraph, max_len: int) -> Dict[int, int]:
    """Cycle counts by depth-first search from each cycle's smallest node.

    Raises:
        MaxLenExceeded: If ``max_len`` is above 8
    """
    if max_len > MAX_CYCLE_LEN:
        raise MaxLenExceeded(f"max cycle length {max_len} exceeds {MAX_CYCLE_LEN}")
    adjacency = g.adjacency()
    counts = {length: 0 for length in range(3, max_len + 1)}

    def extend(start: int, path: List[int]) -> None:
        for w in adjacency[path[-1]]:
            if w == start and len(path) >= 3:
                counts[len(path)] += 1
            elif w > start and w not in path and len(path) < max_len:
                path.append(w)
                extend(start, path)
                path.pop()

    for start in range(g.n):
        extend(start, [start])
    # each cycle is traversed in both directions
    return {length: count // 2 for length, count in counts.items()}
