from collections import Counter, defaultdict
from fractions import Fraction

import pytest

from jdm_sampler.domain.assembler import (
    BIPARTITE,
    UNIPARTITE,
    decompose,
    realize_spectra,
    sample_ensemble,
    sample_jdm_graph,
)
from jdm_sampler.domain.core import degree_classes, validate_realization
from jdm_sampler.domain.estimate import clustering_by_degree
from jdm_sampler.domain.exceptions import InconsistentSpectra, NotGraphical
from jdm_sampler.domain.models import Jdm, SpectraMatrix, SpectraSample
from jdm_sampler.domain.oracle import walk_decisions
from jdm_sampler.domain.spectra import sample_spectra
from jdm_sampler.infrastructure.random_source import SeedStreams


def test_decompose_three_subgraphs(six_node_jdm, shared_spectra):
    problems = decompose(six_node_jdm, shared_spectra, degree_classes(six_node_jdm))

    assert [(p.kind, p.classes) for p in problems] == [
        (UNIPARTITE, (2, 2)),
        (BIPARTITE, (2, 3)),
        (UNIPARTITE, (3, 3)),
    ]
    g22, g23, g33 = problems
    assert (g22.nodes, g22.degrees, g22.edge_budget) == ((0, 1, 2, 3), (1, 1, 1, 1), 2)
    assert (g23.nodes, g23.degrees) == ((0, 1, 2, 3), (1, 1, 1, 1))
    assert (g23.partner_nodes, g23.partner_degrees) == ((4, 5), (2, 2))
    assert g23.edge_budget == 4
    assert g23.translation == (0, 1, 2, 3, 4, 5)
    assert (g33.nodes, g33.degrees, g33.edge_budget) == ((4, 5), (1, 1), 1)


def test_decompose_one_problem_per_nonzero_pair(ten_node_jdm):
    part = degree_classes(ten_node_jdm)
    drawn = sample_spectra(ten_node_jdm, SeedStreams(5).stream(0, 0), part)
    problems = decompose(ten_node_jdm, drawn.matrix, part)

    assert [p.classes for p in problems] == [(1, 4), (2, 3), (2, 4), (3, 3), (3, 4)]
    for problem in problems:
        assert sum(problem.degrees) == problem.edge_budget * (2 if problem.kind == UNIPARTITE else 1)
        if problem.kind == BIPARTITE:
            assert sum(problem.partner_degrees) == problem.edge_budget


def test_decompose_regular_jdm(triangle_jdm):
    part = degree_classes(triangle_jdm)
    s = SpectraMatrix(dim=2, n=3, entries=((0, 0, 0), (2, 2, 2)))
    problems = decompose(triangle_jdm, s, part)
    assert len(problems) == 1
    assert problems[0].kind == UNIPARTITE


def test_decompose_rejects_bad_spectra(six_node_jdm):
    bad = SpectraMatrix(dim=3, n=6, entries=((0,) * 6, (2, 2, 2, 2, 2, 2), (0, 0, 0, 0, 1, 1)))
    with pytest.raises(InconsistentSpectra):
        decompose(six_node_jdm, bad, degree_classes(six_node_jdm))


def test_non_graphical_spectra_fails_at_assembly():
    # the sums match, but two nodes cannot share two edges
    j = Jdm.from_rows([[0, 0], [0, 2]])
    part = degree_classes(j)
    s = SpectraMatrix(dim=2, n=2, entries=((0, 0), (2, 2)))
    with pytest.raises(InconsistentSpectra):
        realize_spectra(j, s, part, SeedStreams(0).stream(0))


def test_single_edge_graph(single_edge_jdm):
    part = degree_classes(single_edge_jdm)
    s = SpectraMatrix(dim=1, n=2, entries=((1, 1),))
    sample = sample_jdm_graph(single_edge_jdm, s, SeedStreams(0).stream(0), part)
    assert sample.graph.edge_list() == [(0, 1)]
    assert sample.log_weight == pytest.approx(0.0)


def test_samples_realize_the_jdm(six_node_jdm, ten_node_jdm):
    for j in (six_node_jdm, ten_node_jdm):
        part = degree_classes(j)
        for seed in range(10):
            streams = SeedStreams(seed)
            drawn = sample_spectra(j, streams.stream(0, 0), part)
            sample = sample_jdm_graph(j, drawn, streams.stream(0, 1, 0), part)
            assert validate_realization(sample.graph, j, part)
            assert sample.spectra_log_weight == drawn.log_weight


def test_bow_ties_are_one_third_of_shared_spectra(six_node_jdm, shared_spectra):
    part = degree_classes(six_node_jdm)
    probability = defaultdict(Fraction)
    for realization, p in walk_decisions(lambda chooser: realize_spectra(six_node_jdm, shared_spectra, part, chooser)):
        probability[realization.graph] += p

    assert len(probability) == 18
    assert set(probability.values()) == {Fraction(1, 18)}
    bow_tie_mass = sum(p for g, p in probability.items() if clustering_by_degree(g)[2] == 1.0)
    assert bow_tie_mass == Fraction(1, 3)


def test_shared_spectra_weights_are_uniform(six_node_jdm, shared_spectra):
    part = degree_classes(six_node_jdm)
    weights = {
        realization.exact_weight()
        for realization, _ in walk_decisions(lambda chooser: realize_spectra(six_node_jdm, shared_spectra, part, chooser))
    }
    assert len(weights) == 1


def test_ensemble_ids_and_validity(ten_node_jdm):
    samples = list(sample_ensemble(ten_node_jdm, 10, 10, SeedStreams(11)))
    part = degree_classes(ten_node_jdm)

    assert [s.sample_id for s in samples] == list(range(100))
    assert Counter(s.spectra_id for s in samples) == {i: 10 for i in range(10)}
    for sample in samples:
        assert validate_realization(sample.graph, ten_node_jdm, part)
    for spectra_id in range(10):
        weights = {s.spectra_log_weight for s in samples if s.spectra_id == spectra_id}
        assert len(weights) == 1


def test_ensemble_is_deterministic(six_node_jdm):
    first = list(sample_ensemble(six_node_jdm, 5, 3, SeedStreams(99)))
    again = list(sample_ensemble(six_node_jdm, 5, 3, SeedStreams(99)))
    assert first == again
    assert first != list(sample_ensemble(six_node_jdm, 5, 3, SeedStreams(100)))


def test_parallel_ensemble_commits_in_spectra_order(six_node_jdm):
    serial = list(sample_ensemble(six_node_jdm, 9, 2, SeedStreams(31)))
    parallel = list(sample_ensemble(six_node_jdm, 9, 2, SeedStreams(31), jobs=3))
    assert parallel == serial
    assert [s.spectra_id for s in parallel] == [i // 2 for i in range(18)]


def test_ensemble_single_sample(six_node_jdm):
    samples = list(sample_ensemble(six_node_jdm, 1, 1, SeedStreams(0)))
    assert len(samples) == 1
    assert validate_realization(samples[0].graph, six_node_jdm)


def test_ensemble_with_fixed_spectra(six_node_jdm, shared_spectra):
    fixed = [SpectraSample(matrix=shared_spectra, log_weight=0.5)]
    samples = list(sample_ensemble(six_node_jdm, 99, 4, SeedStreams(1), spectra=fixed))
    assert len(samples) == 4
    assert {s.spectra_log_weight for s in samples} == {0.5}


def test_ensemble_rejects_non_graphical():
    with pytest.raises(NotGraphical):
        list(sample_ensemble(Jdm.from_rows([[0, 0], [0, 1]]), 1, 1, SeedStreams(0)))
