"""Full JDM sampler: spectra matrix first, then one subgraph per class pair."""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .core import degree_classes, diagnose_realization
from .exceptions import InconsistentSpectra, NotGraphical
from .graphicality import jdm_graphicality_failure
from .models import (
    DegreeClassPartition,
    Edge,
    Jdm,
    JdmRealization,
    LabeledGraph,
    SequenceSample,
    SpectraMatrix,
    SpectraSample,
    SubgraphProblem,
    WeightedSample,
)
from .seqsample import DirectedSampler, UndirectedSampler
from .services import Chooser, ChooserFactory
from .spectra import check_spectra, sample_spectra

logger = logging.getLogger(__name__)

UNIPARTITE = "unipartite"
BIPARTITE = "bipartite"

SPECTRA_STREAM = 0
GRAPH_STREAM = 1


def decompose(j: Jdm, s: SpectraMatrix, part: DegreeClassPartition) -> List[SubgraphProblem]:
    """Split a spectra matrix into per-class-pair degree-sequence problems.

    Args:
        j: Joint-degree matrix
        s: Spectra matrix of ``j`` under ``part``
        part: Node indexing

    Returns:
        One problem per class pair with J_ab > 0, ascending (alpha, beta).
        Bipartite problems list the alpha side first.

    Raises:
        InconsistentSpectra: If a column or class-pair sum is off
    """
    check_spectra(s, j, part)
    problems: List[SubgraphProblem] = []
    for alpha, beta in j.nonzero_pairs():
        nodes = tuple(part.members(alpha))
        if alpha == beta:
            problems.append(SubgraphProblem(
                kind=UNIPARTITE,
                classes=(alpha, alpha),
                nodes=nodes,
                degrees=tuple(s.get(alpha, i) for i in nodes),
                edge_budget=j.get(alpha, alpha),
            ))
            continue
        partners = tuple(part.members(beta))
        problems.append(SubgraphProblem(
            kind=BIPARTITE,
            classes=(alpha, beta),
            nodes=nodes,
            degrees=tuple(s.get(beta, i) for i in nodes),
            edge_budget=j.get(alpha, beta),
            partner_nodes=partners,
            partner_degrees=tuple(s.get(alpha, i) for i in partners),
        ))
    return problems


def _sample_problem(problem: SubgraphProblem, chooser: Chooser) -> SequenceSample:
    if problem.kind == UNIPARTITE:
        return UndirectedSampler(problem.degrees, chooser).run()
    # alpha side only receives arcs, beta side only sends them
    pairs = tuple((d, 0) for d in problem.degrees) + tuple((0, d) for d in problem.partner_degrees)
    return DirectedSampler(pairs, chooser).run()


def realize_spectra(
    j: Jdm, s: SpectraMatrix, part: DegreeClassPartition, chooser: Chooser
) -> JdmRealization:
    """Sample every subgraph of a spectra matrix and take their union.

    Raises:
        InconsistentSpectra: If the spectra matrix is not graphical for ``j``
    """
    edges: Set[Edge] = set()
    parts: List[Tuple[SubgraphProblem, SequenceSample]] = []
    for problem in decompose(j, s, part):
        try:
            run = _sample_problem(problem, chooser)
        except NotGraphical as e:
            raise InconsistentSpectra(f"subgraph {problem.classes} is not graphical: {e}") from e
        translation = problem.translation
        for u, v in run.edges:
            a, b = translation[u], translation[v]
            edges.add((a, b) if a < b else (b, a))
        parts.append((problem, run))

    graph = LabeledGraph(n=part.total_nodes, edges=frozenset(edges))
    problem_text = diagnose_realization(graph, j, part)
    if problem_text is not None:
        raise InconsistentSpectra(f"assembled graph does not realize the JDM: {problem_text}")
    return JdmRealization(graph=graph, parts=tuple(parts))


def sample_jdm_graph(
    j: Jdm,
    s: Union[SpectraMatrix, SpectraSample],
    rng: Chooser,
    part: Optional[DegreeClassPartition] = None,
    sample_id: int = 0,
    spectra_id: int = 0,
) -> WeightedSample:
    """Sample a graph realizing ``j`` with the given degree spectra.

    Args:
        j: Graphical joint-degree matrix
        s: Spectra matrix; a SpectraSample also contributes its log-weight
        rng: Random source
        part: Partition of ``j``, computed when omitted
        sample_id: Identifier recorded on the sample
        spectra_id: Identifier of the spectra matrix

    Returns:
        The sample; its log-weight is the spectra log-weight plus every
        subgraph log-weight

    Raises:
        InconsistentSpectra: If ``s`` is not a graphical spectra matrix of ``j``
    """
    part = part or degree_classes(j)
    if isinstance(s, SpectraSample):
        matrix, spectra_log_weight = s.matrix, s.log_weight
    else:
        matrix, spectra_log_weight = s, 0.0
    realization = realize_spectra(j, matrix, part, rng)
    return WeightedSample(
        sample_id=sample_id,
        spectra_id=spectra_id,
        graph=realization.graph,
        log_weight=spectra_log_weight + realization.log_weight,
        spectra_log_weight=spectra_log_weight,
    )


def _spectra_batch(
    j: Jdm,
    part: DegreeClassPartition,
    spectra_id: int,
    samples_per_spectra: int,
    streams: ChooserFactory,
    fixed: Optional[SpectraSample],
) -> List[WeightedSample]:
    spectra = fixed or sample_spectra(j, streams.stream(spectra_id, SPECTRA_STREAM), part)
    return [
        sample_jdm_graph(
            j,
            spectra,
            streams.stream(spectra_id, GRAPH_STREAM, k),
            part=part,
            sample_id=spectra_id * samples_per_spectra + k,
            spectra_id=spectra_id,
        )
        for k in range(samples_per_spectra)
    ]


def sample_ensemble(
    j: Jdm,
    n_spectra: int,
    samples_per_spectra: int,
    streams: ChooserFactory,
    jobs: int = 1,
    spectra: Optional[Sequence[SpectraSample]] = None,
) -> Iterator[WeightedSample]:
    """Generate ``n_spectra`` spectra matrices and graphs for each of them.

    Spectra matrix ``i`` draws from stream ``(i, 0)`` and its ``k``-th graph
    from ``(i, 1, k)``, so output does not depend on ``jobs``.

    Args:
        j: Graphical joint-degree matrix
        n_spectra: Number of spectra matrices; ignored when ``spectra`` is given
        samples_per_spectra: Graphs per spectra matrix
        streams: Random stream factory
        jobs: Worker processes
        spectra: Fixed spectra matrices to sample graphs for

    Yields:
        Weighted samples in sample-id order

    Raises:
        NotGraphical: If ``j`` is not graphical
    """
    failure = jdm_graphicality_failure(j)
    if failure is not None:
        raise NotGraphical(failure)
    part = degree_classes(j)
    fixed: List[Optional[SpectraSample]] = list(spectra) if spectra is not None else [None] * n_spectra
    logger.info(
        "Sampling ensemble",
        extra={"n_spectra": len(fixed), "samples_per_spectra": samples_per_spectra, "jobs": jobs},
    )

    if jobs <= 1 or len(fixed) <= 1:
        for spectra_id, chosen in enumerate(fixed):
            yield from _spectra_batch(j, part, spectra_id, samples_per_spectra, streams, chosen)
        return

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futures = {
            ex.submit(_spectra_batch, j, part, spectra_id, samples_per_spectra, streams, chosen): spectra_id
            for spectra_id, chosen in enumerate(fixed)
        }
        pending: Dict[int, List[WeightedSample]] = {}
        next_id = 0
        for fut in as_completed(futures):
            pending[futures.pop(fut)] = fut.result()
            # commit batches in spectra-id order
            while next_id in pending:
                yield from pending.pop(next_id)
                next_id += 1
