#!/usr/bin/env python3
"""
Oracle - problem statements, solution verification and exhaustive ground truth
Every other engine is tested against solve_exhaustive and must pass verify.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import CapacityError, ContractError
from graph_core import EdgeSet, Graph, apply_modification, cluster_profile, edge_set
from spectral import distinct_eigenvalue_count

logger = logging.getLogger(__name__)

DEFAULT_MAX_SUBSETS = 10_000_000


class ProblemKind(Enum):
    EVD = "EVD"   # delete vertices
    EED = "EED"   # delete edges
    EEA = "EEA"   # add edges
    EEE = "EEE"   # edit edges


class Answer(Enum):
    YES = "YES"
    NO = "NO"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class Instance:
    """Can at most k modifications of the given kind leave at most r distinct eigenvalues?"""
    kind: ProblemKind
    r: int
    k: int
    graph: Graph

    def __post_init__(self):
        if not isinstance(self.kind, ProblemKind):
            object.__setattr__(self, 'kind', ProblemKind(self.kind))
        if self.r < 1:
            raise ContractError(f"r must be positive, got {self.r}")
        if self.k < 0:
            raise ContractError(f"budget k must be non-negative, got {self.k}")

    def with_budget(self, k: int) -> "Instance":
        return Instance(self.kind, self.r, k, self.graph)


@dataclass(frozen=True)
class Solution:
    """Vertex deletions (EVD) or edge deletions/additions (EED, EEA, EEE)"""
    vertices: FrozenSet[int] = frozenset()
    deletions: EdgeSet = frozenset()
    additions: EdgeSet = frozenset()

    @classmethod
    def of_vertices(cls, vertices: Iterable[int]) -> "Solution":
        return cls(vertices=frozenset(vertices))

    @classmethod
    def of_edits(cls, deletions: Iterable[Sequence[int]] = (),
                 additions: Iterable[Sequence[int]] = ()) -> "Solution":
        return cls(deletions=edge_set(deletions), additions=edge_set(additions))

    @property
    def size(self) -> int:
        return len(self.vertices) + len(self.deletions) + len(self.additions)

    def sort_key(self) -> Tuple:
        """(size, lexicographic) priority used to pick among equally small solutions"""
        return (self.size, tuple(sorted(self.vertices)),
                tuple(sorted(self.deletions)), tuple(sorted(self.additions)))

    def check_kind(self, kind: ProblemKind) -> None:
        if kind is ProblemKind.EVD and (self.deletions or self.additions):
            raise ContractError("EVD solutions may only delete vertices")
        if kind is not ProblemKind.EVD and self.vertices:
            raise ContractError(f"{kind.value} solutions may not delete vertices")
        if kind is ProblemKind.EED and self.additions:
            raise ContractError("EED solutions may only delete edges")
        if kind is ProblemKind.EEA and self.deletions:
            raise ContractError("EEA solutions may only add edges")

    def describe(self) -> str:
        parts = []
        if self.vertices:
            parts.append("V{" + ",".join(str(v) for v in sorted(self.vertices)) + "}")
        if self.deletions:
            parts.append("E-{" + ",".join(f"{u}-{v}" for u, v in sorted(self.deletions)) + "}")
        if self.additions:
            parts.append("E+{" + ",".join(f"{u}-{v}" for u, v in sorted(self.additions)) + "}")
        return " ".join(parts) if parts else "{}"


@dataclass
class Verdict:
    """Outcome of checking a solution against an instance"""
    accepted: bool
    reason: str
    size: int
    distinct_count: Optional[int] = None
    witness: Optional[str] = None


def modified_graph(instance: Instance, solution: Solution) -> Graph:
    solution.check_kind(instance.kind)
    graph, _ = apply_modification(instance.graph, solution.vertices,
                                  solution.deletions, solution.additions)
    return graph


def _structural_witness(graph: Graph, r: int) -> Tuple[bool, str]:
    """r <= 2 is decided structurally: edgeless for r = 1, uniform cluster graph for r = 2"""
    if r == 1:
        if graph.m == 0:
            return True, "edgeless"
        return False, "graph has an edge"
    profile = cluster_profile(graph)
    if profile is None:
        return False, "not a cluster graph"
    if not profile.is_uniform:
        return False, f"cluster profile {profile} is not uniform"
    return True, f"uniform cluster profile {profile}"


def check_solution(instance: Instance, solution: Solution, with_count: bool = False) -> Verdict:
    """Budget check plus spectral check of the modified graph.

    For r <= 2 the structural characterization decides and is reported as the witness;
    ``with_count`` additionally computes the exact distinct count.
    """
    if solution.size > instance.k:
        return Verdict(False, f"solution size {solution.size} exceeds budget {instance.k}",
                       solution.size)
    graph = modified_graph(instance, solution)
    count = distinct_eigenvalue_count(graph) if with_count or instance.r > 2 else None
    if instance.r <= 2:
        accepted, witness = _structural_witness(graph, instance.r)
        reason = witness if accepted else f"modified graph fails: {witness}"
        return Verdict(accepted, reason, solution.size, count, witness)
    accepted = count <= instance.r
    reason = f"{count} distinct eigenvalues {'<=' if accepted else '>'} r={instance.r}"
    return Verdict(accepted, reason, solution.size, count)


def verify(instance: Instance, solution: Solution) -> bool:
    return check_solution(instance, solution).accepted


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------

def modification_pool(instance: Instance) -> List:
    """Elements whose subsets are enumerated: vertices, edges, non-edges or all pairs"""
    graph = instance.graph
    if instance.kind is ProblemKind.EVD:
        return list(range(graph.n))
    if instance.kind is ProblemKind.EED:
        return graph.edges()
    if instance.kind is ProblemKind.EEA:
        return graph.non_edges()
    return [(u, v) for u in range(graph.n) for v in range(u + 1, graph.n)]


def enumeration_size(pool_size: int, k: int) -> int:
    """
    Largest layer C(pool, i) met while enumerating sizes 0..k.
    Equals C(pool, k) while k <= pool/2; past that the middle layer C(pool, pool//2)
    is still enumerated, so it is the one held to oracle_max_subsets.
    """
    return math.comb(pool_size, min(k, pool_size // 2))


def is_feasible(instance: Instance, max_subsets: int = DEFAULT_MAX_SUBSETS) -> bool:
    return enumeration_size(len(modification_pool(instance)), instance.k) <= max_subsets


def _candidate(instance: Instance, subset: Tuple) -> Solution:
    kind = instance.kind
    if kind is ProblemKind.EVD:
        return Solution.of_vertices(subset)
    if kind is ProblemKind.EED:
        return Solution(deletions=frozenset(subset))
    if kind is ProblemKind.EEA:
        return Solution(additions=frozenset(subset))
    graph = instance.graph
    return Solution(deletions=frozenset(e for e in subset if graph.has_edge(*e)),
                    additions=frozenset(e for e in subset if not graph.has_edge(*e)))


def iter_candidates(instance: Instance) -> Iterator[Solution]:
    """All subsets of size <= k, by increasing size then lexicographically"""
    pool = modification_pool(instance)
    for size in range(min(instance.k, len(pool)) + 1):
        for subset in itertools.combinations(pool, size):
            yield _candidate(instance, subset)


def solve_exhaustive(instance: Instance,
                     max_subsets: int = DEFAULT_MAX_SUBSETS) -> Optional[Solution]:
    """Minimum-cardinality verifying solution of size <= k, or None"""
    pool_size = len(modification_pool(instance))
    layer = enumeration_size(pool_size, instance.k)
    if layer > max_subsets:
        logger.warning(f"Oracle refused {instance.kind.value}: C({pool_size}, "
                       f"{min(instance.k, pool_size // 2)}) = {layer} > {max_subsets}")
        raise CapacityError(
            f"oracle enumeration too large: pool {pool_size}, budget {instance.k}, "
            f"layer size {layer} > {max_subsets}", pool_size=pool_size, limit=max_subsets)

    checked = 0
    for candidate in iter_candidates(instance):
        checked += 1
        if verify(instance, candidate):
            logger.debug(f"Oracle found size-{candidate.size} solution after {checked} checks")
            return candidate
    logger.debug(f"Oracle exhausted {checked} candidates without a solution")
    return None


def minimum_solution_size(instance: Instance,
                          max_subsets: int = DEFAULT_MAX_SUBSETS) -> Optional[int]:
    solution = solve_exhaustive(instance, max_subsets)
    return None if solution is None else solution.size


def min_vertex_cover_size(graph: Graph) -> int:
    """Independent brute force: smallest vertex subset touching every edge"""
    edges = graph.edges()
    for size in range(graph.n + 1):
        for subset in itertools.combinations(range(graph.n), size):
            chosen = set(subset)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return graph.n
