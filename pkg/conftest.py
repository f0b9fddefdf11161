"""Shared fixtures: seeded randomness, small named graphs, exhaustive graph enumeration."""

import itertools
import random
from typing import Iterator, List

import networkx as nx
import pytest

from graph_core import (Graph, complete_bipartite_graph, complete_graph, cycle_graph,
                        disjoint_union, empty_graph, from_networkx, path_graph, petersen_graph,
                        star_graph)


def atlas_graphs(max_n: int = 7) -> List[Graph]:
    """Every graph with at most max_n vertices, one per isomorphism class"""
    return [from_networkx(g) for g in nx.graph_atlas_g() if g.number_of_nodes() <= max_n]


def labeled_graphs(n: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, (pairs[i] for i in range(len(pairs)) if mask >> i & 1))


def integer_partitions(total: int, largest: int = None) -> Iterator[List[int]]:
    largest = total if largest is None else largest
    if total == 0:
        yield []
        return
    for first in range(min(total, largest), 0, -1):
        for rest in integer_partitions(total - first, first):
            yield [first] + rest


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def named_graphs():
    return {
        "P3": path_graph(3),
        "P4": path_graph(4),
        "C4": cycle_graph(4),
        "K3": complete_graph(3),
        "K4": complete_graph(4),
        "K13": star_graph(3),
        "K33": complete_bipartite_graph(3, 3),
        "petersen": petersen_graph(),
        "K3+K2": disjoint_union(complete_graph(3), complete_graph(2)),
        "empty3": empty_graph(3),
    }


@pytest.fixture
def config_file(tmp_path):
    return str(tmp_path / "solver_config.json")
