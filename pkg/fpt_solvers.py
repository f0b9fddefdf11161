#!/usr/bin/env python3
"""
FPT Solvers - branching algorithms parameterized by the budget k
2-EVD branches three ways on an induced P3, 2-EED two ways on its edges; cluster-graph
leaves are closed by counting formulas. r-EVD (r >= 3) branches on long shortest paths
and then on components carrying an eigenvalue group that has to disappear.
"""

import logging
import math
from dataclasses import dataclass, asdict
from functools import reduce
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.densebasic import dup_degree
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from errors import CapacityError, ContractError
from graph_core import (ClusterProfile, Edge, Graph, apply_modification, cluster_profile,
                        connected_components, find_induced_p3, find_long_shortest_path)
from oracle import Answer, Instance, ProblemKind, Solution, solve_exhaustive
from spectral import component_square_free_parts, coprime_basis, distinct_eigenvalue_count

logger = logging.getLogger(__name__)

DEFAULT_REVD_MAX_NODES = 200_000


@dataclass
class BranchStats:
    """Search-tree counters; nodes_visited counts branching nodes only"""
    nodes_visited: int = 0
    max_depth: int = 0
    leaf_count: int = 0
    fallbacks: int = 0
    precheck_cuts: int = 0
    oracle_fallback: bool = False

    def to_dict(self) -> Dict:
        return asdict(self)

    def merge(self, other: "BranchStats") -> None:
        self.nodes_visited += other.nodes_visited
        self.max_depth = max(self.max_depth, other.max_depth)
        self.leaf_count += other.leaf_count
        self.fallbacks += other.fallbacks
        self.precheck_cuts += other.precheck_cuts
        self.oracle_fallback = self.oracle_fallback or other.oracle_fallback


class BranchResult(NamedTuple):
    solution: Optional[Solution]
    stats: BranchStats
    answer: Answer = Answer.NO

    @classmethod
    def decided(cls, solution: Optional[Solution], stats: BranchStats) -> "BranchResult":
        return cls(solution, stats, Answer.YES if solution is not None else Answer.NO)


class _BestSolution:
    """Best-so-far cell with (size, lexicographic) priority"""

    def __init__(self):
        self.solution: Optional[Solution] = None

    def offer(self, candidate: Solution) -> None:
        if self.solution is None or candidate.sort_key() < self.solution.sort_key():
            self.solution = candidate

    def beats(self, size: int) -> bool:
        """True if the best known solution is strictly smaller than ``size``"""
        return self.solution is not None and self.solution.size < size


# ---------------------------------------------------------------------------
# Cluster leaves
# ---------------------------------------------------------------------------

def cluster_leaf_evd_cost(profile: ClusterProfile) -> Tuple[int, int]:
    """Minimum vertex deletions turning a cluster graph uniform, and the target size x.

    Keeping x vertices of every clique with at least x vertices retains x * mu(x)
    vertices; the best x is one of the clique sizes (smallest on ties).
    """
    if not profile.sizes:
        raise ContractError("cluster leaf needs a nonempty profile")
    sizes = profile.sizes
    best_x, best_kept = 0, -1
    for x in sorted(set(sizes)):
        kept = x * sum(1 for s in sizes if s >= x)
        if kept > best_kept:
            best_x, best_kept = x, kept
    return sum(sizes) - best_kept, best_x


def cluster_leaf_evd_deletions(graph: Graph, x: int) -> List[int]:
    """Whole cliques smaller than x, plus the lowest-index surplus of larger ones"""
    deleted = []
    for clique in connected_components(graph):
        if len(clique) < x:
            deleted.extend(clique)
        else:
            deleted.extend(clique[:len(clique) - x])
    return deleted


def cluster_leaf_eed_cost(profile: ClusterProfile) -> Tuple[int, int]:
    """Minimum edge deletions splitting every clique into x-blocks, x = gcd of the sizes"""
    if not profile.sizes:
        raise ContractError("cluster leaf needs a nonempty profile")
    x = reduce(math.gcd, profile.sizes)
    return sum(s * (s - x) // 2 for s in profile.sizes), x


def cluster_leaf_eed_deletions(graph: Graph, x: int) -> List[Edge]:
    """Cross-block edges after cutting each clique into consecutive blocks of size x"""
    deleted = []
    for clique in connected_components(graph):
        block = {v: i // x for i, v in enumerate(clique)}
        deleted.extend((u, v) for i, u in enumerate(clique) for v in clique[i + 1:]
                       if block[u] != block[v])
    return deleted


# ---------------------------------------------------------------------------
# 2-EVD
# ---------------------------------------------------------------------------

def solve_2evd(graph: Graph, k: int) -> BranchResult:
    """At most k vertex deletions leaving a uniform cluster graph (O*(3^k))"""
    stats = BranchStats()
    best = _BestSolution()

    def branch(current: Graph, labels: Tuple[int, ...], deleted: Tuple[int, ...],
               budget: int, depth: int) -> None:
        stats.max_depth = max(stats.max_depth, depth)
        p3 = find_induced_p3(current)
        if p3 is None:
            stats.leaf_count += 1
            profile = cluster_profile(current)
            if not profile.sizes:
                best.offer(Solution.of_vertices(deleted))
                return
            cost, x = cluster_leaf_evd_cost(profile)
            if cost <= budget:
                extra = cluster_leaf_evd_deletions(current, x)
                best.offer(Solution.of_vertices(deleted + tuple(labels[v] for v in extra)))
            return
        if budget == 0 or best.beats(len(deleted) + 1):
            stats.leaf_count += 1
            return
        stats.nodes_visited += 1
        for v in p3:
            child, mapping = apply_modification(current, del_v=(v,))
            branch(child, tuple(labels[u] for u in mapping), deleted + (labels[v],),
                   budget - 1, depth + 1)

    if k < 0:
        raise ContractError(f"budget must be non-negative, got {k}")
    branch(graph, tuple(range(graph.n)), (), k, 0)
    logger.debug(f"2-EVD search: {stats.nodes_visited} branch nodes, {stats.leaf_count} leaves")
    return BranchResult.decided(best.solution, stats)


# ---------------------------------------------------------------------------
# 2-EED
# ---------------------------------------------------------------------------

def solve_2eed(graph: Graph, k: int) -> BranchResult:
    """At most k edge deletions leaving a uniform cluster graph (O*(2^k))"""
    stats = BranchStats()
    best = _BestSolution()

    def branch(current: Graph, deleted: Tuple[Edge, ...], budget: int, depth: int) -> None:
        stats.max_depth = max(stats.max_depth, depth)
        p3 = find_induced_p3(current)
        if p3 is None:
            stats.leaf_count += 1
            profile = cluster_profile(current)
            if not profile.sizes:
                best.offer(Solution.of_edits(deletions=deleted))
                return
            cost, x = cluster_leaf_eed_cost(profile)
            if cost <= budget:
                extra = cluster_leaf_eed_deletions(current, x)
                best.offer(Solution.of_edits(deletions=deleted + tuple(extra)))
            return
        if budget == 0 or best.beats(len(deleted) + 1):
            stats.leaf_count += 1
            return
        stats.nodes_visited += 1
        a, b, c = p3
        for edge in ((min(a, b), max(a, b)), (min(b, c), max(b, c))):
            child, _ = apply_modification(current, del_e=(edge,))
            branch(child, deleted + (edge,), budget - 1, depth + 1)

    if k < 0:
        raise ContractError(f"budget must be non-negative, got {k}")
    branch(graph, (), k, 0)
    logger.debug(f"2-EED search: {stats.nodes_visited} branch nodes, {stats.leaf_count} leaves")
    return BranchResult.decided(best.solution, stats)


# ---------------------------------------------------------------------------
# r-EVD, r >= 3
# ---------------------------------------------------------------------------

class _NodeCapReached(Exception):
    pass


def leaf_branch_vertices(graph: Graph, stats: Optional[BranchStats] = None) -> List[int]:
    """Vertices to branch on once every component has diameter below r.

    Some eigenvalue group of the graph must vanish, so every component carrying that group
    loses a vertex. Groups come from a gcd-free basis of the components' square-free
    characteristic polynomials; each contributes its lowest-index carrying component.
    """
    parts = component_square_free_parts(graph)
    basis = coprime_basis([part for _, part in parts])
    chosen = set()
    for element in basis:
        for component, part in parts:
            if dup_degree(dup_gcd(element, part, ZZ)) > 0:
                chosen.update(component)
                break
    if not chosen:
        if stats is not None:
            stats.fallbacks += 1
        logger.warning("Eigenvalue groups did not isolate a component; branching on all vertices")
        return list(range(graph.n))
    return sorted(chosen)


def solve_revd(graph: Graph, r: int, k: int,
               max_nodes: int = DEFAULT_REVD_MAX_NODES,
               oracle_max_subsets: Optional[int] = None) -> BranchResult:
    """At most k vertex deletions leaving at most r distinct eigenvalues, r >= 3.

    Each node: accept when the exact count is at most r; cut when the count exceeds
    (r + 1) * 2^budget; branch on the r + 1 vertices of a shortest path with r edges;
    otherwise branch on leaf_branch_vertices. Past ``max_nodes`` branch nodes the
    oracle takes over when it can, else the answer is INDETERMINATE.
    """
    if r < 3:
        raise ContractError(f"solve_revd handles r >= 3, got r={r}")
    if k < 0:
        raise ContractError(f"budget must be non-negative, got {k}")
    stats = BranchStats()
    best = _BestSolution()

    def branch(current: Graph, labels: Tuple[int, ...], deleted: Tuple[int, ...],
               budget: int, depth: int) -> None:
        stats.max_depth = max(stats.max_depth, depth)
        count = distinct_eigenvalue_count(current)
        if count <= r:
            stats.leaf_count += 1
            best.offer(Solution.of_vertices(deleted))
            return
        if budget == 0 or best.beats(len(deleted) + 1):
            stats.leaf_count += 1
            return
        if count > (r + 1) * 2 ** budget:
            stats.precheck_cuts += 1
            stats.leaf_count += 1
            return
        path = find_long_shortest_path(current, r)
        candidates = path if path is not None else leaf_branch_vertices(current, stats)
        stats.nodes_visited += 1
        if stats.nodes_visited > max_nodes:
            raise _NodeCapReached()
        for v in candidates:
            child, mapping = apply_modification(current, del_v=(v,))
            branch(child, tuple(labels[u] for u in mapping), deleted + (labels[v],),
                   budget - 1, depth + 1)

    try:
        branch(graph, tuple(range(graph.n)), (), k, 0)
    except _NodeCapReached:
        logger.warning(f"r-EVD search passed {max_nodes} branch nodes; trying the oracle")
        stats.oracle_fallback = True
        instance = Instance(ProblemKind.EVD, r, k, graph)
        try:
            if oracle_max_subsets is None:
                solution = solve_exhaustive(instance)
            else:
                solution = solve_exhaustive(instance, oracle_max_subsets)
        except CapacityError:
            return BranchResult(None, stats, Answer.INDETERMINATE)
        return BranchResult.decided(solution, stats)

    logger.debug(f"r-EVD search (r={r}): {stats.nodes_visited} branch nodes, "
                 f"{stats.precheck_cuts} pre-check cuts")
    return BranchResult.decided(best.solution, stats)


def solve_fpt(instance: Instance, max_nodes: int = DEFAULT_REVD_MAX_NODES,
              oracle_max_subsets: Optional[int] = None) -> BranchResult:
    """Route an instance to the branching algorithm for its (kind, r)"""
    kind, r = instance.kind, instance.r
    if kind is ProblemKind.EVD and r == 2:
        return solve_2evd(instance.graph, instance.k)
    if kind is ProblemKind.EED and r == 2:
        return solve_2eed(instance.graph, instance.k)
    if kind is ProblemKind.EVD and r >= 3:
        return solve_revd(instance.graph, r, instance.k, max_nodes, oracle_max_subsets)
    raise ContractError(f"no branching algorithm for {kind.value} with r={r}")


FPT_SUPPORTED: Sequence[str] = ("EVD r=2", "EED r=2", "EVD r>=3")
