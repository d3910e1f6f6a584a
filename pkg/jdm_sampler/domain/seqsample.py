"""Edge-by-edge samplers for degree and bi-degree sequences.

Both samplers keep the residual sequence graphical after every edge, so a
run never backtracks. Each edge goes from the current hub to a node drawn
uniformly from the allowed set; the sizes of those sets give the sample
weight.
"""

import logging
import math
from typing import FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from scipy.special import gammaln

from .exceptions import NotGraphical
from .graphicality import directed_is_graphical, eg_is_graphical, erdos_gallai_inequalities
from .models import BiDegreeSequence, DegreeSequence, Edge, LabeledGraph, SamplerState, SequenceSample
from .services import Chooser

logger = logging.getLogger(__name__)


def _at_least_counts(values: Sequence[int]) -> List[int]:
    """``counts[v]`` is the number of entries ``>= v``."""
    top = max(values, default=0)
    counts = [0] * (top + 2)
    for v in values:
        counts[v] += 1
    for v in range(top, -1, -1):
        counts[v] += counts[v + 1]
    return counts


def max_fail_degree(state: SamplerState) -> int:
    """Largest residual degree the hub cannot connect to.

    The test sequence pre-connects the hub to its ``d - 1`` largest
    non-forbidden nodes and drops the last hub stub. For a candidate of
    residual degree c whose last position in the sorted test sequence is p,
    connecting the last stub lowers L_k for k >= p, and lowers R_k when
    k < p and c <= k. With slack R_k - L_k on the test sequence, c fails when

      (a) slack_k = -1 for some k < p with c > k, i.e. L_k = R_k once the
          hub stub is counted, so any node beyond k breaks it;
      (b) slack_k = 0 for some c <= k < p, i.e. L_k = R_k - 1, so only
          nodes beyond k with degree at most k break it;
      (c) otherwise only a slack below -1 at some k >= p.

    Args:
        state: Undirected sampler state with the hub selected

    Returns:
        The fail degree, or -1 when every non-forbidden node is allowed
    """
    residual = state.residual
    stubs = residual[state.hub]
    eligible = sorted(
        (node for node in range(len(residual)) if node not in state.forbidden and residual[node] > 0),
        key=lambda node: (-residual[node], node),
    )
    pre_connected = eligible[: stubs - 1]
    candidates = eligible[stubs - 1:]
    if not candidates:
        return -1

    test = list(residual)
    test[state.hub] = 0
    for node in pre_connected:
        test[node] -= 1
    test.sort(reverse=True)
    n = len(test)

    tight = [0] * (n + 1)
    broken = [0] * (n + 1)
    suffix_min = [math.inf] * (n + 2)
    slacks = [0] * (n + 1)
    for k, (left, right) in enumerate(erdos_gallai_inequalities(test), start=1):
        slack = right - left
        slacks[k] = slack
        tight[k] = tight[k - 1] + (slack <= 0)
        broken[k] = broken[k - 1] + (slack <= -1)
    for k in range(n, 0, -1):
        suffix_min[k] = min(slacks[k], suffix_min[k + 1])

    position = _at_least_counts(test)
    for c in sorted({residual[node] for node in candidates}, reverse=True):
        p = position[c]
        if suffix_min[p] <= -2:
            return c
        if c <= p - 1 and tight[p - 1] - tight[c - 1] > 0:
            return c
        below = min(p, c) - 1
        if below >= 1 and broken[below] > 0:
            return c
    return -1


def allowed_nodes(state: SamplerState) -> List[int]:
    """Non-forbidden nodes with residual degree above the fail degree."""
    kappa = max(max_fail_degree(state), 0)
    return [
        node for node, d in enumerate(state.residual)
        if node not in state.forbidden and d > kappa
    ]


def _star_completes(ins: List[int], outs: List[int], hub: int, excluded: FrozenSet[int]) -> bool:
    """Whether the hub's remaining arcs fit outside ``excluded`` in some realization.

    The remaining arcs go to the non-excluded nodes that come first in
    lexicographic (in, out) order; the residual is then tested on its own.
    """
    stubs = outs[hub]
    eligible = sorted(
        (node for node in range(len(ins)) if node not in excluded and ins[node] > 0),
        key=lambda node: (-ins[node], -outs[node]),
    )
    if len(eligible) < stubs:
        return False
    test_in = list(ins)
    for node in eligible[:stubs]:
        test_in[node] -= 1
    test_out = list(outs)
    test_out[hub] = 0
    return directed_is_graphical(BiDegreeSequence(tuple(zip(test_in, test_out))))


def _target_verdicts(state: SamplerState) -> List[Tuple[int, bool]]:
    """``(node, allowed)`` for every non-forbidden node with in-degree left."""
    ins = [pair[0] for pair in state.residual]
    outs = [pair[1] for pair in state.residual]
    hub = state.hub
    verdicts: List[Tuple[int, bool]] = []
    by_pair = {}
    for node, pair in enumerate(state.residual):
        if node in state.forbidden or pair[0] == 0:
            continue
        # nodes sharing a residual pair are interchangeable for the hub
        if pair not in by_pair:
            ins[node] -= 1
            outs[hub] -= 1
            by_pair[pair] = _star_completes(ins, outs, hub, state.forbidden | {node})
            ins[node] += 1
            outs[hub] += 1
        verdicts.append((node, by_pair[pair]))
    return verdicts


def max_fail_in_degree(state: SamplerState) -> int:
    """Largest in-degree the hub cannot send its next arc to.

    A candidate fails when no realization of the residual sends the arc to
    it while the hub's other arcs avoid the forbidden set. Ties in in-degree
    are broken by out-degree, so two nodes of equal in-degree can differ.

    Args:
        state: Directed sampler state; residual holds (in, out) pairs

    Returns:
        The fail in-degree, or -1 when every non-forbidden node is allowed
    """
    return max(
        (state.residual[node][0] for node, allowed in _target_verdicts(state) if not allowed),
        default=-1,
    )


def allowed_targets(state: SamplerState) -> List[int]:
    """Non-forbidden nodes the hub can send its next arc to."""
    return [node for node, allowed in _target_verdicts(state) if allowed]


class _HubSampler:
    """Shared hub loop of the undirected and directed samplers."""

    directed = False

    def __init__(self, chooser: Chooser) -> None:
        self._chooser = chooser
        self._hub = -1
        self._forbidden: Set[int] = set()
        self._edges: Set[Edge] = set()
        self._allowed_sizes: List[int] = []
        self._hub_degrees: List[int] = []

    @property
    def state(self) -> SamplerState:
        return SamplerState(
            residual=self._residual_view(),
            forbidden=frozenset(self._forbidden),
            hub=self._hub,
            allowed_sizes=tuple(self._allowed_sizes),
            hub_degrees=tuple(self._hub_degrees),
        )

    def prepare(self) -> bool:
        """Select a new hub if needed; False once every stub is placed."""
        if self._hub >= 0 and self._hub_stubs() > 0:
            return True
        hub = self._select_hub()
        if hub is None:
            return False
        self._hub = hub
        self._hub_degrees.append(self._hub_stubs())
        self._forbidden = self._initial_forbidden(hub)
        return True

    def advance(self) -> Optional[int]:
        """Place one edge from the hub; returns the target, or None when done."""
        if not self.prepare():
            return None
        allowed = self._allowed(self.state)
        if not allowed:
            raise NotGraphical(f"no allowed target for hub {self._hub}")
        target = allowed[self._chooser.choose(len(allowed))]
        self._allowed_sizes.append(len(allowed))
        self._connect(target)
        return target

    def run(self) -> SequenceSample:
        while self.advance() is not None:
            pass
        log_weight = float(sum(math.log(size) for size in self._allowed_sizes))
        if not self.directed:
            log_weight -= float(sum(gammaln(d + 1) for d in self._hub_degrees))
        return SequenceSample(
            edges=frozenset(self._edges),
            log_weight=log_weight,
            allowed_sizes=tuple(self._allowed_sizes),
            hub_degrees=tuple(self._hub_degrees),
            directed=self.directed,
        )


class UndirectedSampler(_HubSampler):
    """Samples a simple graph realizing a degree sequence.

    Node ``i`` of the output has degree ``degrees[i]``; the input need not be
    sorted.
    """

    def __init__(self, degrees: Sequence[int], chooser: Chooser) -> None:
        if not eg_is_graphical(degrees):
            raise NotGraphical(f"degree sequence {list(degrees)} is not graphical")
        super().__init__(chooser)
        self._residual = list(degrees)

    def _residual_view(self) -> Tuple[int, ...]:
        return tuple(self._residual)

    def _hub_stubs(self) -> int:
        return self._residual[self._hub]

    def _select_hub(self) -> Optional[int]:
        if not self._residual:
            return None
        hub = max(range(len(self._residual)), key=lambda node: (self._residual[node], -node))
        return hub if self._residual[hub] > 0 else None

    def _initial_forbidden(self, hub: int) -> Set[int]:
        return {hub}

    def _allowed(self, state: SamplerState) -> List[int]:
        return allowed_nodes(state)

    def _connect(self, target: int) -> None:
        hub = self._hub
        self._edges.add((hub, target) if hub < target else (target, hub))
        self._residual[hub] -= 1
        self._residual[target] -= 1
        if self._residual[target] > 0:
            self._forbidden.add(target)


class DirectedSampler(_HubSampler):
    """Samples a simple digraph realizing a bi-degree sequence.

    ``pairs[i]`` is ``(in_degree, out_degree)`` of node ``i``; arcs are
    ``(source, target)`` tuples.
    """

    directed = True

    def __init__(self, pairs: Sequence[Tuple[int, int]], chooser: Chooser) -> None:
        if not directed_is_graphical(BiDegreeSequence(tuple(pairs))):
            raise NotGraphical(f"bi-degree sequence {list(pairs)} is not graphical")
        super().__init__(chooser)
        self._in = [pair[0] for pair in pairs]
        self._out = [pair[1] for pair in pairs]

    def _residual_view(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(zip(self._in, self._out))

    def _hub_stubs(self) -> int:
        return self._out[self._hub]

    def _select_hub(self) -> Optional[int]:
        return next((node for node, d_out in enumerate(self._out) if d_out > 0), None)

    def _initial_forbidden(self, hub: int) -> Set[int]:
        return {hub} | {node for node, d_in in enumerate(self._in) if d_in == 0}

    def _allowed(self, state: SamplerState) -> List[int]:
        return allowed_targets(state)

    def _connect(self, target: int) -> None:
        self._edges.add((self._hub, target))
        self._out[self._hub] -= 1
        self._in[target] -= 1
        self._forbidden.add(target)


def sample_undirected(
    d: Union[DegreeSequence, Sequence[int]], rng: Chooser
) -> Tuple[LabeledGraph, float]:
    """Sample a realization of an undirected degree sequence.

    Args:
        d: Graphical degree sequence
        rng: Random source

    Returns:
        The graph and ln(1/p) = sum ln|A| - sum ln(d!)

    Raises:
        NotGraphical: If the sequence is not graphical
    """
    degrees = d.degrees if isinstance(d, DegreeSequence) else tuple(d)
    run = UndirectedSampler(degrees, rng).run()
    return LabeledGraph(n=len(degrees), edges=run.edges), run.log_weight


def sample_directed(d: BiDegreeSequence, rng: Chooser) -> Tuple[FrozenSet[Edge], float]:
    """Sample a realization of a bi-degree sequence.

    Args:
        d: Graphical bi-degree sequence
        rng: Random source

    Returns:
        The arc set and sum ln|A|

    Raises:
        NotGraphical: If the sequence is not graphical
    """
    run = DirectedSampler(d.pairs, rng).run()
    return run.edges, run.log_weight
