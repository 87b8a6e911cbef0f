import random

import pytest

from cages.fixtures import (
    complete_bipartite,
    complete_graph,
    heawood_graph,
    petersen_graph,
    repeatable_block_example,
)
from cages.graphcore import Graph


@pytest.fixture
def petersen() -> Graph:
    return petersen_graph()


@pytest.fixture
def heawood() -> Graph:
    return heawood_graph()


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def k33() -> Graph:
    return complete_bipartite(3, 3)


@pytest.fixture
def block_example():
    return repeatable_block_example()


@pytest.fixture
def shuffle():
    """Relabel a graph with a seeded random permutation"""
    rng = random.Random(20240607)

    def _shuffle(g: Graph) -> Graph:
        perm = list(range(g.n))
        rng.shuffle(perm)
        return g.relabel(perm)

    return _shuffle


@pytest.fixture
def catalog_dir(tmp_path):
    path = tmp_path / "catalog"
    path.mkdir()
    return path
