"""Degree-class bookkeeping, realization checks and JDM extraction."""

import logging
from collections import Counter
from typing import Dict, Optional

import numpy as np

from .exceptions import NonIntegerClassSize
from .models import DegreeClassPartition, DegreeCorrelations, Jdm, LabeledGraph, SpectraMatrix

logger = logging.getLogger(__name__)


def degree_classes(j: Jdm) -> DegreeClassPartition:
    """Compute class sizes and the node indexing of a JDM.

    Args:
        j: Joint-degree matrix

    Returns:
        Partition with |V_a| = (J_aa + sum_b J_ab) / a for every non-empty row

    Raises:
        NonIntegerClassSize: If a class size has a remainder
    """
    class_size: Dict[int, int] = {}
    for alpha in range(1, j.dim + 1):
        stubs = j.get(alpha, alpha) + j.row_sum(alpha)
        if stubs == 0:
            continue
        if stubs % alpha:
            raise NonIntegerClassSize(alpha)
        class_size[alpha] = stubs // alpha

    class_order = tuple(sorted(class_size, key=lambda a: (-class_size[a], -a)))
    class_offset: Dict[int, int] = {}
    offset = 0
    for alpha in class_order:
        class_offset[alpha] = offset
        offset += class_size[alpha]

    total_edges = sum(j.get(a, b) for a, b in j.nonzero_pairs())
    return DegreeClassPartition(
        class_size=class_size,
        class_order=class_order,
        class_offset=class_offset,
        total_nodes=offset,
        total_edges=total_edges,
    )


def diagnose_realization(
    g: LabeledGraph, j: Jdm, part: Optional[DegreeClassPartition] = None
) -> Optional[str]:
    """Report the first constraint of ``j`` that ``g`` violates.

    With a partition, node ``i`` must have the degree of its assigned class.
    Without one, class membership is the node's own degree and isolated
    nodes are ignored.

    Returns:
        A description of the violation, or None when ``g`` realizes ``j``
    """
    try:
        expected_part = degree_classes(j)
    except NonIntegerClassSize as e:
        return str(e)

    degrees = g.degrees()
    if part is not None:
        if g.n != part.total_nodes:
            return f"graph has {g.n} nodes, partition has {part.total_nodes}"
        for node, expected in enumerate(part.node_degrees()):
            if degrees[node] != expected:
                return f"node {node} has degree {degrees[node]}, class {expected}"
    else:
        observed = Counter(d for d in degrees if d > 0)
        if dict(observed) != expected_part.class_size:
            return f"degree histogram {dict(sorted(observed.items()))} != class sizes {expected_part.class_size}"

    counts: Counter = Counter()
    for u, v in g.edges:
        a, b = sorted((degrees[u], degrees[v]))
        counts[(a, b)] += 1
    for a, b in set(counts) | set(j.nonzero_pairs()):
        if counts[(a, b)] != j.get(a, b):
            return f"{counts[(a, b)]} edges between classes {a} and {b}, expected {j.get(a, b)}"
    return None


def validate_realization(
    g: LabeledGraph, j: Jdm, part: Optional[DegreeClassPartition] = None
) -> bool:
    """Check that ``g`` is a simple graph realizing ``j``."""
    problem = diagnose_realization(g, j, part)
    if problem is not None:
        logger.debug("Realization rejected", extra={"reason": problem})
    return problem is None


def extract_jdm(g: LabeledGraph) -> Jdm:
    """Count the edges of ``g`` by endpoint degrees."""
    degrees = g.degrees()
    counts: Counter = Counter()
    for u, v in g.edges:
        a, b = sorted((degrees[u], degrees[v]))
        counts[(a, b)] += 1
    return Jdm.from_pairs(max(degrees, default=0), dict(counts))


def spectra_of_graph(g: LabeledGraph, part: DegreeClassPartition, dim: Optional[int] = None) -> SpectraMatrix:
    """Degree-spectra matrix of ``g`` under the partition's node indexing."""
    dim = dim if dim is not None else max(part.class_order, default=0)
    node_class = part.node_degrees()
    rows = [[0] * g.n for _ in range(dim)]
    for u, v in g.edges:
        rows[node_class[v] - 1][u] += 1
        rows[node_class[u] - 1][v] += 1
    return SpectraMatrix(dim=dim, n=g.n, entries=tuple(tuple(row) for row in rows))


def degree_correlations(j: Jdm) -> DegreeCorrelations:
    """Average neighbor degree per class and the Pearson degree assortativity.

    Both are fixed by the JDM and shared by all of its realizations.
    """
    stubs = np.array(j.entries, dtype=float) + np.diag(np.diag(np.array(j.entries, dtype=float)))
    degrees = np.arange(1, j.dim + 1, dtype=float)
    per_class = stubs.sum(axis=1)

    knn: Dict[int, float] = {}
    for alpha in range(1, j.dim + 1):
        if per_class[alpha - 1] > 0:
            knn[alpha] = float(stubs[alpha - 1] @ degrees / per_class[alpha - 1])

    total = stubs.sum()
    if total == 0:
        return DegreeCorrelations(average_neighbor_degree=knn, assortativity=float("nan"))
    e = stubs / total
    q = e.sum(axis=1)
    mean = float(degrees @ q)
    variance = float((degrees ** 2) @ q) - mean ** 2
    covariance = float(degrees @ e @ degrees) - mean ** 2
    r = covariance / variance if variance > 0 else float("nan")
    return DegreeCorrelations(average_neighbor_degree=knn, assortativity=r)
