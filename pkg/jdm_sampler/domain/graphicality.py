"""Realizability tests for JDMs, degree sequences and triplets."""

import logging
from fractions import Fraction
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .core import degree_classes
from .exceptions import InfeasibleBalance, NonIntegerClassSize
from .models import BalancedCompletion, BiDegreeSequence, DegreeSequence, Jdm, Triplet

logger = logging.getLogger(__name__)


def jdm_graphicality_failure(j: Jdm) -> Optional[str]:
    """Name the first failed JDM graphicality condition.

    Args:
        j: Symmetric, non-negative joint-degree matrix

    Returns:
        Description of the failed condition and its classes, or None
    """
    try:
        part = degree_classes(j)
    except NonIntegerClassSize as e:
        return str(e)

    sizes = part.class_size
    for alpha in sorted(sizes):
        if j.get(alpha, alpha) > comb(sizes[alpha], 2):
            return (
                f"J[{alpha},{alpha}] = {j.get(alpha, alpha)} exceeds "
                f"C({sizes[alpha]}, 2) edges within class {alpha}"
            )
        for beta in sorted(sizes):
            if beta > alpha and j.get(alpha, beta) > sizes[alpha] * sizes[beta]:
                return (
                    f"J[{alpha},{beta}] = {j.get(alpha, beta)} exceeds "
                    f"{sizes[alpha]} * {sizes[beta]} edges between classes {alpha} and {beta}"
                )
    return None


def jdm_is_graphical(j: Jdm) -> bool:
    """Check whether a JDM has a simple-graph realization."""
    return jdm_graphicality_failure(j) is None


def erdos_gallai_inequalities(degrees: Sequence[int]) -> Iterator[Tuple[int, int]]:
    """Yield ``(L_k, R_k)`` for ``k = 1..n`` of a non-increasing sequence.

    L_k is the prefix degree sum and R_k = k(k-1) + sum_{i>k} min(d_i, k),
    advanced with the crossing indices x_k = min{i : d_i < k}:
    R_k = R_{k-1} + x_k - 2 before k*, R_{k-1} + 2(k-1) - d_k from k* on.
    """
    n = len(degrees)
    # at_least[v] = #{i : d_i >= v}, so x_k = at_least[k] + 1
    at_least = [0] * (n + 2)
    for d in degrees:
        at_least[min(d, n + 1)] += 1
    for v in range(n, -1, -1):
        at_least[v] += at_least[v + 1]

    k_star = next((k for k in range(1, n + 1) if at_least[k] + 1 < k + 1), n + 1)

    left = right = 0
    for k in range(1, n + 1):
        d_k = degrees[k - 1]
        left += d_k
        if k < k_star:
            right += at_least[k] - 1
        else:
            right += 2 * (k - 1) - d_k
        yield left, right


def eg_is_graphical(d: Union[DegreeSequence, Sequence[int]]) -> bool:
    """Check whether a degree sequence is realizable as a simple graph.

    Args:
        d: Degree sequence; plain sequences are sorted first

    Returns:
        True iff the degree sum is even, no degree exceeds N - 1 and
        L_k <= R_k for all k < N
    """
    degrees = d.degrees if isinstance(d, DegreeSequence) else sorted(d, reverse=True)
    if any(x < 0 for x in degrees) or sum(degrees) % 2:
        return False
    n = len(degrees)
    if degrees and degrees[0] > n - 1:
        return False
    for k, (left, right) in enumerate(erdos_gallai_inequalities(degrees), start=1):
        if k >= n:
            break
        if left > right:
            return False
    return True


def fulkerson_inequalities(pairs: Sequence[Tuple[int, int]]) -> Iterator[Tuple[int, int]]:
    """Yield ``(L_k, R_k)`` for ``k = 1..N-1`` of lexicographically ordered pairs.

    L_k sums in-degrees; R_k = sum_{i<=k} min(out_i, k-1) + sum_{i>k} min(out_i, k)
    is advanced through the counts G_1(p) of g_i(1) and the cumulative counts
    Gbar_k(k), corrected by S(k).
    """
    n = len(pairs)
    if n < 2:
        return
    outs = [out for _, out in pairs]

    # G_1(p): g_1(1) = out_1 + 1, g_i(1) = out_i otherwise
    g1 = [0] * (n + 2)
    for i, out in enumerate(outs):
        value = out + 1 if i == 0 else out
        if value <= n:
            g1[value] += 1

    # S(k) = #{2 <= t <= k-1 : out_t + 1 = k} - #{2 <= t <= k : out_t = k}
    s = [0] * (n + 2)
    for t in range(2, n + 1):
        out = outs[t - 1]
        if out >= t:
            if out <= n:
                s[out] -= 1
            if out + 1 <= n:
                s[out + 1] += 1

    left = pairs[0][0]
    right = n - 1 - g1[0]
    yield left, right

    g_bar = g1[0] + g1[1]
    for k in range(2, n):
        left += pairs[k - 1][0]
        right += n - g_bar - (1 if outs[k - 1] >= k else 0)
        yield left, right
        g_bar += g1[k] + s[k]


def directed_is_graphical(d: BiDegreeSequence) -> bool:
    """Check whether a bi-degree sequence is realizable as a simple digraph.

    Args:
        d: Pairs of ``(in_degree, out_degree)``; reordered lexicographically

    Returns:
        True iff in- and out-degree sums agree and L_k <= R_k for k < N
    """
    pairs = d.ordered().pairs
    n = len(pairs)
    if sum(p[0] for p in pairs) != sum(p[1] for p in pairs):
        return False
    if any(d_in > n - 1 or d_out > n - 1 for d_in, d_out in pairs):
        return False
    return all(left <= right for left, right in fulkerson_inequalities(pairs))


def _spread(total: int, slots: int) -> Tuple[List[int], Fraction]:
    if slots == 0:
        if total != 0:
            raise InfeasibleBalance(f"{total} stubs left for an empty free set")
        return [], Fraction(0)
    base, extra = divmod(total, slots)
    return [base + 1] * extra + [base] * (slots - extra), Fraction(total, slots)


def balanced_completion(t: Triplet) -> BalancedCompletion:
    """Complete a triplet with balanced free degrees.

    Args:
        t: Triplet with fixed degrees and free-set sizes

    Returns:
        Both sides' full degree lists; the first (eps - P) mod |B| free slots
        take the ceiling of the average residual degree

    Raises:
        InfeasibleBalance: If a residual is negative or cannot be placed
    """
    residual_b = t.eps - sum(t.p)
    residual_k = t.eps - sum(t.q)
    if residual_b < 0 or residual_k < 0:
        raise InfeasibleBalance(f"fixed degrees exceed {t.eps} edges")
    free_b, mu = _spread(residual_b, t.size_b)
    free_k, nu = _spread(residual_k, t.size_k)
    return BalancedCompletion(
        u_degrees=tuple(t.p) + tuple(free_b),
        v_degrees=tuple(t.q) + tuple(free_k),
        mu=mu,
        nu=nu,
    )


def triplet_is_graphical(t: Triplet) -> bool:
    """Check whether a triplet has a bipartite realization.

    The balanced completion is encoded as a bi-degree sequence with the U
    side carrying out-degrees only and the V side in-degrees only.
    """
    try:
        completion = balanced_completion(t)
    except InfeasibleBalance:
        return False
    pairs = tuple((0, u) for u in completion.u_degrees) + tuple((v, 0) for v in completion.v_degrees)
    return directed_is_graphical(BiDegreeSequence(pairs))


def unipartite_triplet_is_graphical(fixed: Sequence[int], stub_total: int, size_free: int) -> bool:
    """Check a within-class problem with some degrees fixed.

    Args:
        fixed: Fixed degrees of some nodes of the class
        stub_total: Total stubs of the class toward itself (twice its edges)
        size_free: Number of nodes whose degree is still free

    Returns:
        True iff the balanced completion is a graphical degree sequence
    """
    if stub_total < sum(fixed):
        return False
    try:
        free, _ = _spread(stub_total - sum(fixed), size_free)
    except InfeasibleBalance:
        return False
    return eg_is_graphical(list(fixed) + free)
