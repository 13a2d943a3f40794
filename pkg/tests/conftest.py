import numpy as np
import pytest

from zuecap.channel import Channel, canonical_channel
from zuecap.digraph import DirectedGraph

TRIANGLE = DirectedGraph(3, frozenset([(0, 1), (1, 2), (2, 0)]))


@pytest.fixture
def triangle():
    return TRIANGLE


@pytest.fixture
def edge_graph():
    return DirectedGraph(2, frozenset([(0, 1)]))


@pytest.fixture
def z_channel():
    # erasure-free output 1 is reachable only from input 1
    return Channel(np.array([[1.0, 0.0], [0.5, 0.5]]), identified=True)


@pytest.fixture
def fig_channel():
    # factorizable: every row is 1/2 on a two-element support
    return Channel(
        np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    )


@pytest.fixture
def triangle_channel():
    return canonical_channel(TRIANGLE, 0.1)
