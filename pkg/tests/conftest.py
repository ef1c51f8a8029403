import pytest

from tuttemc.graph import Graph, complete_graph, path_graph


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def loop_graph():
    return Graph(1, [(0, 0)])
