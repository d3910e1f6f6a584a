"""Node-by-node sampling of graphical degree-spectra matrices."""

import logging
import math
from collections import defaultdict
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import degree_classes
from .exceptions import EmptyRange, InconsistentSpectra, NoFeasibleValue, NotGraphical
from .graphicality import jdm_graphicality_failure, triplet_is_graphical, unipartite_triplet_is_graphical
from .models import Bounds, DegreeClassPartition, Jdm, SpectraDecision, SpectraMatrix, SpectraSample, Triplet
from .services import Chooser

logger = logging.getLogger(__name__)

UNSET = -1


class SpectraBuildState:
    """Partially fixed spectra matrix with incremental residual bookkeeping.

    ``fixed(alpha, beta)`` lists S_{beta,i} for the nodes i of class alpha
    whose cell toward beta is already set; every feasibility test of the
    (alpha, beta) subgraph reads from it.
    """

    def __init__(self, j: Jdm, part: DegreeClassPartition) -> None:
        self.jdm = j
        self.partition = part
        self._cursor: Optional[Tuple[int, int]] = (0, 1) if part.total_nodes and j.dim else None
        self._node_class = part.node_degrees()
        self._cells = [[UNSET] * part.total_nodes for _ in range(j.dim)]
        self._stubs = list(self._node_class)
        self._fixed: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        self._allocated: Dict[Tuple[int, int], int] = defaultdict(int)

    @property
    def cursor(self) -> Optional[Tuple[int, int]]:
        """First unset ``(node, beta)`` cell in fill order; None once full."""
        return self._cursor

    def _advance(self) -> None:
        while self._cursor is not None and self.cell(self._cursor[1], self._cursor[0]) != UNSET:
            node, beta = self._cursor
            if beta < self.jdm.dim:
                self._cursor = (node, beta + 1)
            elif node + 1 < self.partition.total_nodes:
                self._cursor = (node + 1, 1)
            else:
                self._cursor = None

    def class_of(self, node: int) -> int:
        return self._node_class[node]

    def cell(self, beta: int, node: int) -> int:
        return self._cells[beta - 1][node]

    def fixed(self, alpha: int, beta: int) -> List[int]:
        return self._fixed[(alpha, beta)]

    def residual_stubs(self, node: int) -> int:
        return self._stubs[node]

    def pair_stubs(self, alpha: int, beta: int) -> int:
        """Stubs of class alpha toward class beta: J_ab, or 2 J_aa within a class."""
        return self.jdm.get(alpha, beta) * (2 if alpha == beta else 1)

    def residual_budget(self, alpha: int, beta: int) -> int:
        return self.pair_stubs(alpha, beta) - self._allocated[(alpha, beta)]

    def theoretical_max(self, node: int, beta: int) -> int:
        alpha = self.class_of(node)
        size = self.partition.class_size.get(beta, 0)
        cap = size - 1 if alpha == beta else size
        return max(0, min(self._stubs[node], self.residual_budget(alpha, beta), cap))

    def is_feasible(self, node: int, beta: int, value: int) -> bool:
        """Test whether S_{beta,node} = value keeps its subgraph realizable.

        The node's own cell is appended to a scratch copy of the fixed list;
        the build state is not touched.
        """
        alpha = self.class_of(node)
        sizes = self.partition.class_size
        own = self._fixed[(alpha, beta)]
        if alpha == beta:
            return unipartite_triplet_is_graphical(
                own + [value], self.pair_stubs(alpha, alpha), sizes[alpha] - len(own) - 1
            )
        partner = self._fixed[(beta, alpha)]
        triplet = Triplet(
            p=tuple(own) + (value,),
            q=tuple(partner),
            eps=self.jdm.get(alpha, beta),
            size_b=sizes[alpha] - len(own) - 1,
            size_k=sizes[beta] - len(partner),
        )
        return triplet_is_graphical(triplet)

    def set_cell(self, node: int, beta: int, value: int) -> None:
        alpha = self.class_of(node)
        self._cells[beta - 1][node] = value
        self._stubs[node] -= value
        self._fixed[(alpha, beta)].append(value)
        self._allocated[(alpha, beta)] += value
        if self._cursor == (node, beta):
            self._advance()

    def unset_cell(self, node: int, beta: int) -> None:
        """Undo the most recent ``set_cell`` of this (class, beta) list."""
        alpha = self.class_of(node)
        value = self._cells[beta - 1][node]
        self._cells[beta - 1][node] = UNSET
        self._stubs[node] += value
        self._fixed[(alpha, beta)].pop()
        self._allocated[(alpha, beta)] -= value
        if self._cursor is None or (node, beta) < self._cursor:
            self._cursor = (node, beta)

    def verify(self) -> None:
        """Recompute the residual bookkeeping from the cells.

        Raises:
            InconsistentSpectra: If an incremental counter drifted
        """
        allocated: Dict[Tuple[int, int], int] = defaultdict(int)
        for node, alpha in enumerate(self._node_class):
            spent = 0
            for beta in range(1, self.jdm.dim + 1):
                value = self._cells[beta - 1][node]
                if value != UNSET:
                    spent += value
                    allocated[(alpha, beta)] += value
            if self._stubs[node] != alpha - spent:
                raise InconsistentSpectra(f"residual stubs of node {node} drifted")
        for key, value in self._allocated.items():
            if allocated[key] != value:
                raise InconsistentSpectra(f"residual budget of classes {key} drifted")

    def snapshot(self) -> SpectraMatrix:
        return SpectraMatrix(
            dim=self.jdm.dim,
            n=self.partition.total_nodes,
            entries=tuple(tuple(max(v, 0) for v in row) for row in self._cells),
        )


def class_bounds(state: SpectraBuildState, node: int, beta: int) -> Tuple[int, int]:
    """Smallest and largest feasible value of S_{beta,node}.

    The minimum comes from an ascending scan from 0, the maximum from
    bisection between it and the theoretical maximum.

    Args:
        state: Build state in which the cell is unset
        node: Node index
        beta: Partner degree class

    Returns:
        ``(m, M)``; ``(0, 0)`` when the node's class has no edges toward beta

    Raises:
        NoFeasibleValue: If no value keeps the subgraph realizable
    """
    alpha = state.class_of(node)
    if state.jdm.get(alpha, beta) == 0:
        return 0, 0
    top = state.theoretical_max(node, beta)
    low = next((v for v in range(top + 1) if state.is_feasible(node, beta, v)), None)
    if low is None:
        raise NoFeasibleValue(f"no feasible value for node {node} toward class {beta}")

    feasible, infeasible = low, top + 1
    while infeasible - feasible > 1:
        mid = (feasible + infeasible) // 2
        if state.is_feasible(node, beta, mid):
            feasible = mid
        else:
            infeasible = mid
    return low, feasible


def feasible_range(
    state: SpectraBuildState,
    node: int,
    beta: int,
    all_bounds: Mapping[int, Tuple[int, int]],
) -> Bounds:
    """Combine the class bounds with the node's residual stubs.

    Args:
        state: Build state
        node: Node index
        beta: Class of the cell being decided
        all_bounds: ``(m, M)`` of every class the node connects to

    Returns:
        Bounds with r = max(m, l - T) and R = min(M, l - t), where t and T
        sum the bounds of the node's other unset classes

    Raises:
        EmptyRange: If r > R
    """
    stubs = state.residual_stubs(node)
    others = [b for b in all_bounds if b != beta and state.cell(b, node) == UNSET]
    t = sum(all_bounds[b][0] for b in others)
    big_t = sum(all_bounds[b][1] for b in others)
    m, big_m = all_bounds[beta]
    low = max(m, stubs - big_t)
    high = min(big_m, stubs - t)
    if low > high:
        raise EmptyRange(f"empty range [{low}, {high}] for node {node} toward class {beta}")
    return Bounds(min_value=m, max_value=big_m, low=low, high=high)


def spectra_violation(s: SpectraMatrix, j: Jdm, part: DegreeClassPartition) -> Optional[str]:
    """Describe the first column-sum or class-pair-sum violation, if any."""
    node_class = part.node_degrees()
    if s.n != part.total_nodes:
        return f"spectra has {s.n} columns, partition has {part.total_nodes} nodes"
    for node, alpha in enumerate(node_class):
        if sum(s.column(node)) != alpha:
            return f"column {node} sums to {sum(s.column(node))}, expected {alpha}"
    for alpha in part.class_order:
        for beta in range(1, s.dim + 1):
            total = sum(s.get(beta, i) for i in part.members(alpha))
            expected = j.get(alpha, beta) * (2 if alpha == beta else 1)
            if total != expected:
                return f"class {alpha} sends {total} stubs to class {beta}, expected {expected}"
    return None


def check_spectra(s: SpectraMatrix, j: Jdm, part: DegreeClassPartition) -> None:
    """Raise InconsistentSpectra unless ``s`` satisfies both sum invariants."""
    problem = spectra_violation(s, j, part)
    if problem is not None:
        raise InconsistentSpectra(problem)


def replay_log_weight(decisions: Sequence[SpectraDecision]) -> float:
    """Sum of ln(R - r + 1) over recorded decisions."""
    return float(sum(math.log(d.high - d.low + 1) for d in decisions))


def spectra_path_weight(decisions: Sequence[SpectraDecision]) -> int:
    """Exact spectra weight: the product of the range widths."""
    return math.prod(d.high - d.low + 1 for d in decisions)


def sample_spectra(
    j: Jdm, rng: Chooser, part: Optional[DegreeClassPartition] = None
) -> SpectraSample:
    """Sample a graphical degree-spectra matrix of a JDM.

    Nodes are visited in partition order and, within a node, classes in
    ascending degree. Each cell is drawn uniformly from its feasible range;
    once a node has no stubs left its remaining cells are forced to zero.

    Args:
        j: Graphical joint-degree matrix
        rng: Random source
        part: Partition of ``j``, computed when omitted

    Returns:
        The matrix, ln of the spectra weight, and every decision taken

    Raises:
        NotGraphical: If ``j`` is not graphical
    """
    failure = jdm_graphicality_failure(j)
    if failure is not None:
        raise NotGraphical(failure)
    part = part or degree_classes(j)
    state = SpectraBuildState(j, part)
    classes = sorted(part.class_size)
    decisions: List[SpectraDecision] = []
    log_weight = 0.0

    bounds: Dict[int, Tuple[int, int]] = {}
    while state.cursor is not None:
        node, beta = state.cursor
        if beta == 1:
            alpha = state.class_of(node)
            # bounds of a class do not depend on this node's other cells
            bounds = {b: class_bounds(state, node, b) for b in classes if j.get(alpha, b) > 0}
        if beta not in bounds:
            state.set_cell(node, beta, 0)
            continue
        if state.residual_stubs(node) == 0:
            low = high = value = 0
        else:
            rng_bounds = feasible_range(state, node, beta, bounds)
            low, high = rng_bounds.low, rng_bounds.high
            value = low + (rng.choose(high - low + 1) if high > low else 0)
            log_weight += math.log(high - low + 1)
        state.set_cell(node, beta, value)
        decisions.append(SpectraDecision(node=node, beta=beta, low=low, high=high, value=value))

    if __debug__:
        state.verify()
    matrix = state.snapshot()
    check_spectra(matrix, j, part)
    logger.debug("Spectra sampled", extra={"nodes": part.total_nodes, "log_weight": log_weight})
    return SpectraSample(matrix=matrix, log_weight=log_weight, decisions=tuple(decisions))
