from collections import defaultdict
from fractions import Fraction

import pytest

from jdm_sampler.domain.core import degree_classes
from jdm_sampler.domain.exceptions import InconsistentSpectra, NotGraphical
from jdm_sampler.domain.models import Jdm, SpectraMatrix
from jdm_sampler.domain.oracle import enumerate_spectra, spectra_decision_paths
from jdm_sampler.domain.spectra import (
    SpectraBuildState,
    check_spectra,
    class_bounds,
    feasible_range,
    replay_log_weight,
    sample_spectra,
    spectra_path_weight,
    spectra_violation,
)
from jdm_sampler.infrastructure.random_source import SeedStreams


@pytest.fixture()
def six_node_state(six_node_jdm):
    return SpectraBuildState(six_node_jdm, degree_classes(six_node_jdm))


def test_first_node_bounds(six_node_state):
    assert class_bounds(six_node_state, 0, 2) == (0, 2)
    assert class_bounds(six_node_state, 0, 3) == (0, 2)
    assert class_bounds(six_node_state, 0, 1) == (0, 0)


def test_first_node_ranges(six_node_state):
    bounds = {2: (0, 2), 3: (0, 2)}
    first = feasible_range(six_node_state, 0, 2, bounds)
    assert (first.low, first.high) == (0, 2)

    six_node_state.set_cell(0, 1, 0)
    six_node_state.set_cell(0, 2, 1)
    forced = feasible_range(six_node_state, 0, 3, bounds)
    assert (forced.low, forced.high) == (1, 1)


def test_last_class_takes_remaining_stubs(six_node_state):
    bounds = {2: (0, 2), 3: (0, 2)}
    six_node_state.set_cell(0, 2, 0)
    last = feasible_range(six_node_state, 0, 3, bounds)
    assert last.low == last.high == 2


def test_unset_cell_restores_bookkeeping(six_node_state):
    six_node_state.set_cell(0, 2, 2)
    assert six_node_state.residual_stubs(0) == 0
    assert six_node_state.residual_budget(2, 2) == 2
    six_node_state.unset_cell(0, 2)
    assert six_node_state.residual_stubs(0) == 2
    assert six_node_state.residual_budget(2, 2) == 4
    assert six_node_state.fixed(2, 2) == []
    six_node_state.verify()


def test_cursor_follows_fill_order(six_node_state):
    assert six_node_state.cursor == (0, 1)
    six_node_state.set_cell(0, 2, 1)
    assert six_node_state.cursor == (0, 1)
    six_node_state.set_cell(0, 1, 0)
    assert six_node_state.cursor == (0, 3)
    six_node_state.set_cell(0, 3, 1)
    assert six_node_state.cursor == (1, 1)
    six_node_state.unset_cell(0, 3)
    assert six_node_state.cursor == (0, 3)

    for node in range(6):
        for beta in (1, 2, 3):
            if six_node_state.cell(beta, node) == -1:
                six_node_state.set_cell(node, beta, 0)
    assert six_node_state.cursor is None


def test_regular_jdm_has_zero_spectra_weight(triangle_jdm):
    drawn = sample_spectra(triangle_jdm, SeedStreams(1).stream(0, 0))
    assert drawn.matrix.entries == ((0, 0, 0), (2, 2, 2))
    assert drawn.log_weight == 0.0


def test_spectra_sums(ten_node_jdm):
    part = degree_classes(ten_node_jdm)
    for seed in range(20):
        drawn = sample_spectra(ten_node_jdm, SeedStreams(seed).stream(0, 0), part)
        assert spectra_violation(drawn.matrix, ten_node_jdm, part) is None
        for node, alpha in enumerate(part.node_degrees()):
            assert sum(drawn.matrix.column(node)) == alpha
        for alpha in part.class_order:
            for beta in range(1, ten_node_jdm.dim + 1):
                sent = sum(drawn.matrix.get(beta, i) for i in part.members(alpha))
                assert sent == ten_node_jdm.get(alpha, beta) * (2 if alpha == beta else 1)


def test_decisions_replay_the_weight(ten_node_jdm):
    for seed in range(10):
        drawn = sample_spectra(ten_node_jdm, SeedStreams(seed).stream(0, 0))
        assert replay_log_weight(drawn.decisions) == pytest.approx(drawn.log_weight)
        for decision in drawn.decisions:
            assert decision.low <= decision.value <= decision.high
            assert drawn.matrix.get(decision.beta, decision.node) == decision.value


def test_spectra_are_deterministic_per_stream(ten_node_jdm):
    first = sample_spectra(ten_node_jdm, SeedStreams(42).stream(3, 0))
    again = sample_spectra(ten_node_jdm, SeedStreams(42).stream(3, 0))
    assert first == again


def test_non_graphical_jdm_is_rejected():
    with pytest.raises(NotGraphical):
        sample_spectra(Jdm.from_rows([[0, 0], [0, 1]]), SeedStreams(0).stream(0, 0))


def test_check_spectra(six_node_jdm, shared_spectra):
    part = degree_classes(six_node_jdm)
    check_spectra(shared_spectra, six_node_jdm, part)

    skewed = SpectraMatrix(dim=3, n=6, entries=((0,) * 6, (2, 2, 1, 1, 2, 2), (0, 0, 1, 1, 1, 1)))
    assert "class 2 sends" in spectra_violation(skewed, six_node_jdm, part)
    with pytest.raises(InconsistentSpectra):
        check_spectra(skewed, six_node_jdm, part)

    short = SpectraMatrix(dim=3, n=6, entries=((0,) * 6, (1, 1, 1, 1, 2, 2), (1, 1, 1, 0, 1, 1)))
    assert "column 3" in spectra_violation(short, six_node_jdm, part)


def test_six_node_spectra_probabilities(six_node_jdm, shared_spectra):
    paths = spectra_decision_paths(six_node_jdm)
    probability = defaultdict(Fraction)
    for drawn, p in paths:
        probability[drawn.matrix] += p
        assert p * spectra_path_weight(drawn.decisions) == 1

    assert sum(probability.values()) == 1
    assert len(probability) == 13
    assert probability[shared_spectra] == Fraction(1, 27)


def test_sampler_reaches_every_graphical_spectra(six_node_jdm, ten_node_jdm):
    reached = {drawn.matrix for drawn, _ in spectra_decision_paths(six_node_jdm)}
    assert reached == set(enumerate_spectra(six_node_jdm))

    reached = {drawn.matrix for drawn, _ in spectra_decision_paths(ten_node_jdm)}
    assert reached == set(enumerate_spectra(ten_node_jdm))


def test_feasible_values_are_contiguous(six_node_jdm):
    part = degree_classes(six_node_jdm)
    for drawn, _ in spectra_decision_paths(six_node_jdm):
        state = SpectraBuildState(six_node_jdm, part)
        for node in range(part.total_nodes):
            for beta in range(1, six_node_jdm.dim + 1):
                if six_node_jdm.get(state.class_of(node), beta) > 0:
                    top = state.theoretical_max(node, beta)
                    values = [v for v in range(top + 1) if state.is_feasible(node, beta, v)]
                    assert values == list(range(values[0], values[-1] + 1))
                state.set_cell(node, beta, drawn.matrix.get(beta, node))
        state.verify()
        assert state.snapshot() == drawn.matrix
