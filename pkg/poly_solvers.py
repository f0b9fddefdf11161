#!/usr/bin/env python3
"""
Polynomial-time special cases
2-EVD on forests and on d-regular graphs (d <= 2), 2-EED on triangle-free graphs and on
cluster graphs, and the tree DPs / matching routines they rely on.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from errors import ContractError
from graph_core import (Edge, Graph, canonical_edge, cluster_profile, connected_components,
                        find_triangle, is_d_regular, is_forest, to_networkx)
from fpt_solvers import cluster_leaf_eed_cost, cluster_leaf_eed_deletions
from oracle import Solution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint edges"""
    pairs: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        seen = set()
        for u, v in self.pairs:
            if u in seen or v in seen:
                raise ContractError(f"matching edges share a vertex at ({u}, {v})")
            seen.update((u, v))

    @classmethod
    def of(cls, edges: Iterable[Sequence[int]]) -> "Matching":
        return cls(frozenset(canonical_edge(u, v) for u, v in edges))

    @property
    def size(self) -> int:
        return len(self.pairs)

    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for edge in self.pairs for v in edge)

    def is_perfect(self, n: int) -> bool:
        return 2 * self.size == n

    def belongs_to(self, graph: Graph) -> bool:
        return all(graph.has_edge(u, v) for u, v in self.pairs)

    def is_induced_in(self, graph: Graph) -> bool:
        """No graph edge joins two different matched edges"""
        owner = {}
        for index, (u, v) in enumerate(sorted(self.pairs)):
            owner[u] = owner[v] = index
        return all(owner[u] == owner[v] for u, v in graph.edges()
                   if u in owner and v in owner)


# ---------------------------------------------------------------------------
# Tree dynamic programs
# ---------------------------------------------------------------------------

def _require_forest(graph: Graph) -> None:
    if not is_forest(graph):
        raise ContractError(f"graph with n={graph.n}, m={graph.m} is not a forest")


def _rooted_order(graph: Graph) -> Tuple[List[int], Dict[int, int]]:
    """BFS order over every component (rooted at its lowest vertex) and parent links"""
    order: List[int] = []
    parent: Dict[int, int] = {}
    for component in connected_components(graph):
        root = component[0]
        parent[root] = -1
        queue = [root]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for u in graph.neighbors(v):
                if u != parent[v]:
                    parent[u] = v
                    queue.append(u)
        order.extend(queue)
    return order, parent


def _children(order: List[int], parent: Dict[int, int]) -> Dict[int, List[int]]:
    children: Dict[int, List[int]] = {v: [] for v in order}
    for v in order:
        if parent[v] >= 0:
            children[parent[v]].append(v)
    return children


def tree_min_vertex_cover(graph: Graph) -> FrozenSet[int]:
    """Minimum vertex cover of a forest, bottom-up over each rooted tree"""
    _require_forest(graph)
    order, parent = _rooted_order(graph)
    children = _children(order, parent)
    take: Dict[int, int] = {}
    skip: Dict[int, int] = {}
    for v in reversed(order):
        take[v] = 1 + sum(min(take[c], skip[c]) for c in children[v])
        skip[v] = sum(take[c] for c in children[v])

    cover = set()
    chosen: Dict[int, bool] = {}
    for v in order:
        if parent[v] >= 0 and not chosen[parent[v]]:
            chosen[v] = True
        else:
            chosen[v] = take[v] < skip[v]
        if chosen[v]:
            cover.add(v)
    return frozenset(cover)


# induced-matching states
_FREE, _TO_CHILD, _TO_PARENT = 0, 1, 2


def tree_max_induced_matching(graph: Graph) -> Matching:
    """Maximum induced matching of a forest.

    Per vertex: FREE (unmatched), TO_CHILD (matched downwards, every other child free)
    and TO_PARENT (matched upwards, all children free, parent edge not yet counted).
    """
    _require_forest(graph)
    order, parent = _rooted_order(graph)
    children = _children(order, parent)
    free: Dict[int, int] = {}
    to_parent: Dict[int, int] = {}
    to_child: Dict[int, int] = {}
    partner: Dict[int, int] = {}
    for v in reversed(order):
        free[v] = sum(max(free[c], to_child[c]) for c in children[v])
        to_parent[v] = sum(free[c] for c in children[v])
        base = to_parent[v]
        best, best_child = -1, -1
        for c in children[v]:
            value = base - free[c] + to_parent[c] + 1
            if value > best:
                best, best_child = value, c
        to_child[v] = best
        partner[v] = best_child

    pairs = []
    state: Dict[int, int] = {}
    for v in order:
        p = parent[v]
        if p < 0:
            state[v] = _TO_CHILD if to_child[v] > free[v] else _FREE
        elif state[p] == _TO_CHILD and partner[p] == v:
            state[v] = _TO_PARENT
        elif state[p] == _FREE:
            state[v] = _TO_CHILD if to_child[v] > free[v] else _FREE
        else:
            state[v] = _FREE
        if state[v] == _TO_CHILD:
            pairs.append((v, partner[v]))
    return Matching.of(pairs)


# ---------------------------------------------------------------------------
# 2-EVD
# ---------------------------------------------------------------------------

def optimal_2evd_forest(graph: Graph) -> Solution:
    """Cheaper of: delete a minimum vertex cover (all K1) or keep a maximum induced matching (all K2)"""
    cover = tree_min_vertex_cover(graph)
    matching = tree_max_induced_matching(graph)
    matched = matching.vertices()
    unmatched = [v for v in range(graph.n) if v not in matched]
    if len(cover) <= len(unmatched):
        return Solution.of_vertices(cover)
    return Solution.of_vertices(unmatched)


def solve_2evd_forest(graph: Graph, k: int) -> Optional[Solution]:
    solution = optimal_2evd_forest(graph)
    return solution if solution.size <= k else None


def cycle_order(graph: Graph, component: Sequence[int]) -> List[int]:
    """Vertices of a cycle component in walking order from its lowest vertex"""
    start = component[0]
    walk = [start]
    previous, current = start, min(graph.neighbors(start))
    while current != start:
        walk.append(current)
        step = [u for u in graph.neighbors(current) if u != previous][0]
        previous, current = current, step
    return walk


def _k2_deletions(cycle: List[int]) -> List[int]:
    """(keep, keep, delete) blocks, then delete whatever remainder is left"""
    length = len(cycle)
    blocks = length // 3
    deleted = [cycle[3 * i + 2] for i in range(blocks)]
    deleted.extend(cycle[3 * blocks:])
    return deleted


def _cover_deletions(cycle: List[int]) -> List[int]:
    return cycle[::2]


def optimal_2evd_2regular(graph: Graph) -> Solution:
    """Best of three targets on a union of cycles: all K3, all K2, all K1"""
    degree = is_d_regular(graph)
    if degree != 2:
        raise ContractError(f"graph is not 2-regular (common degree: {degree})")
    cycles = [cycle_order(graph, component) for component in connected_components(graph)]

    to_k3 = [v for cycle in cycles if len(cycle) != 3 for v in cycle]
    to_k2 = [v for cycle in cycles for v in _k2_deletions(cycle)]
    to_k1 = [v for cycle in cycles for v in _cover_deletions(cycle)]
    options = [to_k3, to_k2, to_k1]
    logger.debug(f"2-regular options: K3={len(to_k3)}, K2={len(to_k2)}, K1={len(to_k1)}")
    best = min(options, key=len)
    return Solution.of_vertices(best)


def solve_2evd_2regular(graph: Graph, k: int) -> Optional[Solution]:
    solution = optimal_2evd_2regular(graph)
    return solution if solution.size <= k else None


def optimal_2evd_regular(graph: Graph) -> Solution:
    degree = is_d_regular(graph)
    if degree is None or degree > 2:
        raise ContractError(f"expected a d-regular graph with d <= 2, got degree {degree}")
    if degree <= 1:
        return Solution()
    return optimal_2evd_2regular(graph)


def solve_2evd_regular(graph: Graph, k: int) -> Optional[Solution]:
    solution = optimal_2evd_regular(graph)
    return solution if solution.size <= k else None


# ---------------------------------------------------------------------------
# 2-EED
# ---------------------------------------------------------------------------

def max_matching(graph: Graph) -> Matching:
    """Maximum cardinality matching (blossom algorithm via networkx)"""
    if graph.m == 0:
        return Matching()
    pairs = nx.max_weight_matching(to_networkx(graph), maxcardinality=True)
    return Matching.of(pairs)


def optimal_2eed_trianglefree(graph: Graph) -> Solution:
    """m - n/2 deletions onto a perfect matching if one exists, else delete every edge"""
    triangle = find_triangle(graph)
    if triangle is not None:
        raise ContractError(f"graph contains the triangle {triangle}")
    matching = max_matching(graph)
    if matching.is_perfect(graph.n):
        return Solution.of_edits(deletions=[e for e in graph.edges() if e not in matching.pairs])
    return Solution.of_edits(deletions=graph.edges())


def solve_2eed_trianglefree(graph: Graph, k: int) -> Optional[Solution]:
    solution = optimal_2eed_trianglefree(graph)
    return solution if solution.size <= k else None


def optimal_2eed_cluster(graph: Graph) -> Solution:
    profile = cluster_profile(graph)
    if profile is None:
        raise ContractError("graph is not a disjoint union of cliques")
    if not profile.sizes:
        return Solution()
    _, x = cluster_leaf_eed_cost(profile)
    return Solution.of_edits(deletions=cluster_leaf_eed_deletions(graph, x))


def solve_2eed_cluster(graph: Graph, k: int) -> Optional[Solution]:
    solution = optimal_2eed_cluster(graph)
    return solution if solution.size <= k else None
