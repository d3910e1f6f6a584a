import pytest

from jdm_sampler.domain.models import Jdm, LabeledGraph, SpectraMatrix


@pytest.fixture()
def six_node_jdm():
    """ Four degree-2 and two degree-3 nodes; realized by pentagon, bow-tie and hexagon graphs """

    return Jdm.from_rows([[0, 0, 0], [0, 2, 4], [0, 4, 1]])


@pytest.fixture()
def ten_node_jdm():
    """ Ten nodes in four degree classes of sizes (1, 4, 3, 2) """

    return Jdm.from_rows([[0, 0, 0, 1], [0, 0, 4, 4], [0, 4, 1, 3], [1, 4, 3, 0]])


@pytest.fixture()
def single_edge_jdm():
    return Jdm.from_rows([[1]])


@pytest.fixture()
def triangle_jdm():
    return Jdm.from_rows([[0, 0], [0, 3]])


@pytest.fixture()
def shared_spectra():
    """ Spectra matrix shared by the bow-tie and hexagon realizations of six_node_jdm """

    return SpectraMatrix(
        dim=3,
        n=6,
        entries=((0, 0, 0, 0, 0, 0), (1, 1, 1, 1, 2, 2), (1, 1, 1, 1, 1, 1)),
    )


@pytest.fixture()
def bow_tie():
    """ Triangles (4, 0, 1) and (5, 2, 3) joined by the edge 4-5 """

    return LabeledGraph.from_edges(6, [(0, 1), (0, 4), (1, 4), (2, 3), (2, 5), (3, 5), (4, 5)])


@pytest.fixture()
def hexagon():
    """ Cycle 4-0-1-5-2-3-4 with the chord 4-5 """

    return LabeledGraph.from_edges(6, [(0, 4), (0, 1), (1, 5), (2, 5), (2, 3), (3, 4), (4, 5)])


@pytest.fixture()
def triangle():
    return LabeledGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
