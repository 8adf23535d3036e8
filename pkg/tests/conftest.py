import pytest

from edgesample.graph import Graph, double_star, star
from edgesample.panel import panel


@pytest.fixture
def p3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    return star(4)


@pytest.fixture
def dstar6():
    return double_star(6)


@pytest.fixture(scope="session")
def panel_graphs():
    return panel()
