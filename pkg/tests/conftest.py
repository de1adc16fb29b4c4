import random

import pytest

from trussmin import Graph


def complete_pairs(n, offset=0):
    return [(offset + i, offset + j) for i in range(n) for j in range(i + 1, n)]


def path_pairs(n, offset=0):
    return [(offset + i, offset + i + 1) for i in range(n - 1)]


def er_pairs(rng, n, p):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def graph_of(pairs) -> Graph:
    return Graph.from_pairs(pairs)


def label_pair(g: Graph, eid: int):
    return g.original_pair(eid)


def label_pairs(g: Graph, eids):
    return {g.original_pair(e) for e in eids}


@pytest.fixture
def k5():
    return graph_of(complete_pairs(5))


@pytest.fixture
def k4():
    return graph_of(complete_pairs(4))


@pytest.fixture
def k6():
    return graph_of(complete_pairs(6))


@pytest.fixture
def rng():
    return random.Random(20250809)
