#!/usr/bin/env python3
"""
Hardness constructions as instance generators
Each generator turns a source instance (independent set, vertex cover, 3-Partition or
partition into triangles) into a spectral editing instance with a derived budget.
map_forward_solution carries a source solution across; the brute forces below answer
the source side at desk scale so round trips can be checked against the oracle.
"""

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from errors import CapacityError, ContractError, InvariantViolation
from graph_core import (Graph, clique_number, complete_graph, cycle_graph, disjoint_union,
                        find_triangle, hypercube_graph, is_bipartite, is_d_regular,
                        max_degree, path_graph, to_networkx)
from oracle import Instance, ProblemKind, Solution

logger = logging.getLogger(__name__)

DEFAULT_MAX_GENERATED_VERTICES = 1_000_000
UNPROVEN_NOTE = "equivalence unproven for this source"


class SourceVariant(Enum):
    IS_CUBIC_TRIANGLEFREE = "IS-cubic-trianglefree"
    IS_PLANAR_CUBIC_TRIANGLEFREE = "IS-planar-cubic-trianglefree"
    VC_CUBIC = "VC-cubic"
    THREE_PARTITION = "3Partition"
    TRIANGLE_PARTITION = "PartitionIntoTriangles"


class Construction(Enum):
    IS_COPIES = "is-copies"
    IS_CLIQUES = "is-cliques"
    VC_PATHS = "vc-paths"
    EEA_3PARTITION = "2eea-3partition"
    REEA_3PARTITION = "reea-3partition"
    REED_TRIANGLES = "reed-triangles"
    EEE_TRIANGLES = "2eee-triangles"


class Gadget(Enum):
    CLIQUE = "clique"
    CYCLE = "cycle"
    PATH = "path"


@dataclass(frozen=True)
class SourceInstance:
    variant: SourceVariant
    graph: Optional[Graph] = None
    numbers: Tuple[int, ...] = ()
    z: Optional[int] = None
    k: Optional[int] = None
    b: Optional[int] = None

    def __post_init__(self):
        if self.variant is SourceVariant.THREE_PARTITION:
            _check_3partition(self.numbers, self.b)
        elif self.graph is None:
            raise ContractError(f"{self.variant.value} source needs a graph")
        if self.variant is SourceVariant.TRIANGLE_PARTITION and self.graph.n % 3:
            raise ContractError(f"triangle partition needs 3 | n, got n={self.graph.n}")

    @property
    def groups(self) -> int:
        """n of a 3-Partition source: the number of triples"""
        return len(self.numbers) // 3


@dataclass
class ReducedInstance:
    construction: Construction
    source: SourceInstance
    instance: Instance
    mapper: str
    params: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def budget(self) -> int:
        return self.instance.k

    def sidecar(self) -> Dict[str, Any]:
        """JSON-ready description written next to generated instance files"""
        return {
            "construction": self.construction.value,
            "source_variant": self.source.variant.value,
            "kind": self.instance.kind.value,
            "r": self.instance.r,
            "budget": self.budget,
            "vertices": self.instance.graph.n,
            "edges": self.instance.graph.m,
            "mapper": self.mapper,
            "params": self.params,
            "notes": self.notes,
        }


def _check_3partition(numbers: Sequence[int], b: Optional[int]) -> None:
    if b is None or b <= 0:
        raise ContractError(f"3-Partition needs a positive bound b, got {b}")
    if not numbers or len(numbers) % 3:
        raise ContractError(f"3-Partition needs 3n numbers, got {len(numbers)}")
    groups = len(numbers) // 3
    if sum(numbers) != groups * b:
        raise ContractError(f"numbers sum to {sum(numbers)}, expected n*b = {groups * b}")
    for s in numbers:
        if not (4 * s > b and 2 * s < b):
            raise ContractError(f"number {s} is outside ({b}/4, {b}/2)")


def _check_size(vertices: int, max_vertices: int, construction: Construction) -> None:
    if vertices > max_vertices:
        logger.warning(f"{construction.value}: {vertices} vertices exceeds limit {max_vertices}")
        raise CapacityError(f"{construction.value} would build {vertices} vertices "
                            f"(limit {max_vertices})", pool_size=vertices, limit=max_vertices)


def _require_cubic(graph: Graph) -> None:
    degree = is_d_regular(graph)
    if degree != 3:
        raise ContractError(f"source graph must be cubic (common degree: {degree})")


def _require_triangle_free(graph: Graph) -> None:
    triangle = find_triangle(graph)
    if triangle is not None:
        raise ContractError(f"source graph contains the triangle {triangle}")


def _assert(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(message)


# ---------------------------------------------------------------------------
# Independent set / vertex cover sources (vertex deletion targets)
# ---------------------------------------------------------------------------

def gen_2evd_from_is_copies(graph: Graph, z: int, copies: int = 2,
                            max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES) -> ReducedInstance:
    """Blow every vertex up into ``copies`` twins; adjacent copy sets are joined completely"""
    _require_cubic(graph)
    _require_triangle_free(graph)
    if copies < 2:
        raise ContractError(f"need at least 2 copies per vertex, got {copies}")
    if not 0 <= z <= graph.n:
        raise ContractError(f"target z={z} outside 0..{graph.n}")
    _check_size(graph.n * copies, max_vertices, Construction.IS_COPIES)

    edges = [(u * copies + i, v * copies + j) for u, v in graph.edges()
             for i in range(copies) for j in range(copies)]
    blown_up = Graph.from_edges(graph.n * copies, edges)
    _assert(is_d_regular(blown_up) == 3 * copies, "blow-up is not 3d-regular")
    _assert(find_triangle(blown_up) is None, "blow-up contains a triangle")

    source = SourceInstance(SourceVariant.IS_CUBIC_TRIANGLEFREE, graph=graph, z=z)
    return ReducedInstance(Construction.IS_COPIES, source,
                           Instance(ProblemKind.EVD, 2, copies * (graph.n - z), blown_up),
                           mapper="delete every copy of each vertex outside the independent set",
                           params={"z": z, "copies": copies})


def gen_2evd_from_is_cliques(graph: Graph, z: int,
                             max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES) -> ReducedInstance:
    """Six copies per vertex forming a K6; an edge uv matches copy i of u with copy i of v"""
    _require_cubic(graph)
    _require_triangle_free(graph)
    if not 0 <= z <= graph.n:
        raise ContractError(f"target z={z} outside 0..{graph.n}")
    _check_size(6 * graph.n, max_vertices, Construction.IS_CLIQUES)

    edges = [(6 * v + i, 6 * v + j) for v in range(graph.n)
             for i in range(6) for j in range(i + 1, 6)]
    edges.extend((6 * u + i, 6 * v + i) for u, v in graph.edges() for i in range(6))
    blown_up = Graph.from_edges(6 * graph.n, edges)
    _assert(is_d_regular(blown_up) == 8, "clique blow-up is not 8-regular")

    notes = []
    planar, _ = nx.check_planarity(to_networkx(graph))
    variant = SourceVariant.IS_PLANAR_CUBIC_TRIANGLEFREE
    if not planar:
        logger.warning(f"Source graph is not planar: {UNPROVEN_NOTE}")
        notes.append(UNPROVEN_NOTE)
        variant = SourceVariant.IS_CUBIC_TRIANGLEFREE
    source = SourceInstance(variant, graph=graph, z=z)
    return ReducedInstance(Construction.IS_CLIQUES, source,
                           Instance(ProblemKind.EVD, 2, 6 * (graph.n - z), blown_up),
                           mapper="keep the six copies of each independent-set vertex, delete the rest",
                           params={"z": z, "planar": planar}, notes=notes)


def gen_revd_from_vc(graph: Graph, k: int, r: int,
                     max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES) -> ReducedInstance:
    """Pendant paths of floor((r-1)/2) vertices on vertices, subdivided edges with shorter pendants.

    Vertex layout: originals, then vertex pendants (vertex-major), then one subdivision
    vertex per edge, then the subdivision pendants (edge-major).
    """
    _require_cubic(graph)
    if r < 3:
        raise ContractError(f"vertex-cover construction needs r >= 3, got {r}")
    if k < 0:
        raise ContractError(f"cover budget must be non-negative, got {k}")
    ell = (r - 1) // 2
    source_edges = graph.edges()
    n, m = graph.n, len(source_edges)
    total = n + n * ell + m + m * (ell - 1)
    _check_size(total, max_vertices, Construction.VC_PATHS)

    edges = []
    cursor = n
    for v in range(n):
        previous = v
        for _ in range(ell):
            edges.append((previous, cursor))
            previous, cursor = cursor, cursor + 1
    subdivision = {}
    for u, v in source_edges:
        subdivision[(u, v)] = cursor
        edges.extend([(u, cursor), (cursor, v)])
        cursor += 1
    for u, v in source_edges:
        previous = subdivision[(u, v)]
        for _ in range(ell - 1):
            edges.append((previous, cursor))
            previous, cursor = cursor, cursor + 1
    reduced = Graph.from_edges(total, edges)
    _assert(is_bipartite(reduced), "vertex-cover construction is not bipartite")
    _assert(max_degree(reduced) <= 4, "vertex-cover construction has a vertex of degree > 4")

    source = SourceInstance(SourceVariant.VC_CUBIC, graph=graph, k=k)
    return ReducedInstance(Construction.VC_PATHS, source,
                           Instance(ProblemKind.EVD, r, k, reduced),
                           mapper="delete the vertex cover", params={"k": k, "r": r, "ell": ell})


# ---------------------------------------------------------------------------
# 3-Partition sources (edge addition targets)
# ---------------------------------------------------------------------------

def gadget_graph(size: int, gadget: Gadget) -> Graph:
    """Connected gadget on ``size`` vertices; sizes below 3 are always cliques"""
    if gadget is Gadget.CLIQUE or size < 3:
        return complete_graph(size)
    if gadget is Gadget.CYCLE:
        return cycle_graph(size)
    return path_graph(size)


def _gadget_union(sizes: Sequence[int], gadget: Gadget) -> Tuple[Graph, List[int], int]:
    """Union of gadgets in order, block offsets, and edges missing from their cliques"""
    parts = [gadget_graph(s, gadget) for s in sizes]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    missing = sum(math.comb(s, 2) - part.m for s, part in zip(sizes, parts))
    return disjoint_union(*parts), offsets, missing


def gen_2eea_from_3partition(numbers: Sequence[int], b: int, gadget: Gadget = Gadget.CLIQUE,
                             max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES) -> ReducedInstance:
    """Cliques of the given sizes plus 3nb dummy b-cliques, budget n*b^2"""
    gadget = Gadget(gadget)
    source = SourceInstance(SourceVariant.THREE_PARTITION, numbers=tuple(numbers), b=b)
    groups = source.groups
    dummies = 3 * groups * b
    sizes = list(numbers) + [b] * dummies
    _check_size(sum(sizes), max_vertices, Construction.EEA_3PARTITION)

    graph, offsets, missing = _gadget_union(sizes, gadget)
    budget = groups * b * b + missing
    return ReducedInstance(Construction.EEA_3PARTITION, source,
                           Instance(ProblemKind.EEA, 2, budget, graph),
                           mapper="merge the three cliques of every triple pairwise",
                           params={"b": b, "n": groups, "dummy_cliques": dummies,
                                   "gadget": gadget.value, "missing_edges": missing,
                                   "offsets": offsets})


def gen_reea_from_3partition(numbers: Sequence[int], b: int, r: int,
                             max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES) -> ReducedInstance:
    """The 2-EEA construction plus 2nb^2+1 extra b-cliques and 2nb^2+1 cliques of each size L+i"""
    if r < 3:
        raise ContractError(f"r-EEA construction needs r >= 3, got {r}")
    source = SourceInstance(SourceVariant.THREE_PARTITION, numbers=tuple(numbers), b=b)
    groups = source.groups
    big = 6 * groups * b ** 3
    repeat = 2 * groups * b * b + 1
    large_sizes = [big + i for i in range(r - 2) for _ in range(repeat)]
    sizes = list(numbers) + [b] * (3 * groups * b + repeat) + large_sizes
    _check_size(sum(sizes), max_vertices, Construction.REEA_3PARTITION)

    graph, offsets, _ = _gadget_union(sizes, Gadget.CLIQUE)
    return ReducedInstance(Construction.REEA_3PARTITION, source,
                           Instance(ProblemKind.EEA, r, groups * b * b, graph),
                           mapper="merge the three cliques of every triple pairwise",
                           params={"b": b, "n": groups, "r": r, "L": big, "repeat": repeat,
                                   "gadget": Gadget.CLIQUE.value, "missing_edges": 0,
                                   "offsets": offsets})


# ---------------------------------------------------------------------------
# Triangle-partition sources (edge deletion / editing targets)
# ---------------------------------------------------------------------------

def gen_reed_from_triangle_partition(graph: Graph, r: int,
                                     max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES
                                     ) -> ReducedInstance:
    """g plus m-n+1 dummy cliques of every size 3..r+1, budget m-n"""
    if r < 3:
        raise ContractError(f"r-EED construction needs r >= 3, got {r}")
    omega = clique_number(graph)
    if omega != 3:
        raise ContractError(f"source graph must have clique number 3, got {omega}")
    n, m = graph.n, graph.m
    if m < n:
        raise ContractError(f"source graph needs m >= n, got m={m}, n={n}")
    source = SourceInstance(SourceVariant.TRIANGLE_PARTITION, graph=graph)
    repeat = m - n + 1
    dummy_sizes = [size for size in range(3, r + 2) for _ in range(repeat)]
    _check_size(n + sum(dummy_sizes), max_vertices, Construction.REED_TRIANGLES)

    reduced = disjoint_union(graph, *(complete_graph(s) for s in dummy_sizes))
    return ReducedInstance(Construction.REED_TRIANGLES, source,
                           Instance(ProblemKind.EED, r, m - n, reduced),
                           mapper="delete every source edge outside the triangles",
                           params={"r": r, "repeat": repeat})


def gen_2eee_from_triangle_partition(graph: Graph,
                                     max_vertices: int = DEFAULT_MAX_GENERATED_VERTICES
                                     ) -> ReducedInstance:
    """Two pendant triangles per vertex, each tied to it by one dummy edge; budget m+n.

    Vertex layout: originals, then six vertices per source vertex (triangle a-b-c joined
    by v-a, triangle d-e-f joined by v-d).
    """
    source = SourceInstance(SourceVariant.TRIANGLE_PARTITION, graph=graph)
    n, m = graph.n, graph.m
    _check_size(7 * n, max_vertices, Construction.EEE_TRIANGLES)

    edges = list(graph.edges())
    for v in range(n):
        base = n + 6 * v
        for start in (base, base + 3):
            a, b, c = start, start + 1, start + 2
            edges.extend([(a, b), (b, c), (a, c), (v, a)])
    reduced = Graph.from_edges(7 * n, edges)
    _assert(reduced.n == 7 * n and reduced.m == m + 8 * n, "triangle gadget counts are off")
    return ReducedInstance(Construction.EEE_TRIANGLES, source,
                           Instance(ProblemKind.EEE, 2, m + n, reduced),
                           mapper="delete the 2n dummy edges and every source edge outside the triangles",
                           params={"saviour_vertices": 4 * n})


def dummy_edges(n: int) -> List[Tuple[int, int]]:
    """The 2n vertex-to-triangle edges of the 2-EEE construction"""
    return [(v, n + 6 * v + shift) for v in range(n) for shift in (0, 3)]


# ---------------------------------------------------------------------------
# Forward solution maps
# ---------------------------------------------------------------------------

def _check_independent(graph: Graph, vertices: FrozenSet[int], z: int) -> None:
    for u, v in itertools.combinations(sorted(vertices), 2):
        if graph.has_edge(u, v):
            raise ContractError(f"vertices {u} and {v} of the independent set are adjacent")
    if len(vertices) < z:
        raise ContractError(f"independent set has {len(vertices)} < z={z} vertices")


def _check_triangles(graph: Graph, triangles: Sequence[Sequence[int]]) -> List[Tuple[int, int]]:
    covered = sorted(v for t in triangles for v in t)
    if covered != list(range(graph.n)):
        raise ContractError("triangles do not partition the vertex set")
    kept = set()
    for t in triangles:
        a, b, c = sorted(t)
        if not (graph.has_edge(a, b) and graph.has_edge(b, c) and graph.has_edge(a, c)):
            raise ContractError(f"({a}, {b}, {c}) is not a triangle")
        kept.update([(a, b), (b, c), (a, c)])
    return [e for e in graph.edges() if e not in kept]


def _merge_edges(offsets: List[int], triples: Sequence[Sequence[int]],
                 numbers: Sequence[int], b: int) -> List[Tuple[int, int]]:
    used = sorted(i for t in triples for i in t)
    if used != list(range(len(numbers))):
        raise ContractError("triples do not partition the numbers")
    additions = []
    for triple in triples:
        if sum(numbers[i] for i in triple) != b:
            raise ContractError(f"triple {tuple(triple)} does not sum to b={b}")
        for x, y in itertools.combinations(sorted(triple), 2):
            additions.extend((u, v) for u in range(offsets[x], offsets[x + 1])
                             for v in range(offsets[y], offsets[y + 1]))
    return additions


def _gadget_completion(offsets: List[int], gadget: Gadget, sizes: Sequence[int]) -> List[Tuple[int, int]]:
    if gadget is Gadget.CLIQUE:
        return []
    completion = []
    for index, size in enumerate(sizes):
        start = offsets[index]
        completion.extend((start + u, start + v) for u, v in gadget_graph(size, gadget).non_edges())
    return completion


def map_forward_solution(reduced: ReducedInstance, source_solution: Any) -> Solution:
    """Carry a source solution across the construction.

    Independent set and vertex cover sources take a vertex collection, 3-Partition a
    sequence of index triples and triangle partitions a sequence of vertex triples.
    """
    construction = reduced.construction
    source = reduced.source
    graph = source.graph

    if construction in (Construction.IS_COPIES, Construction.IS_CLIQUES):
        chosen = frozenset(source_solution)
        _check_independent(graph, chosen, source.z)
        copies = reduced.params.get("copies", 6)
        return Solution.of_vertices(v * copies + i for v in range(graph.n) if v not in chosen
                                    for i in range(copies))

    if construction is Construction.VC_PATHS:
        cover = frozenset(source_solution)
        uncovered = [e for e in graph.edges() if e[0] not in cover and e[1] not in cover]
        if uncovered:
            raise ContractError(f"edge {uncovered[0]} is not covered")
        if len(cover) > source.k:
            raise ContractError(f"cover has {len(cover)} > k={source.k} vertices")
        return Solution.of_vertices(cover)

    if construction in (Construction.EEA_3PARTITION, Construction.REEA_3PARTITION):
        offsets = reduced.params["offsets"]
        gadget = Gadget(reduced.params["gadget"])
        sizes = [offsets[i + 1] - offsets[i] for i in range(len(offsets) - 1)]
        additions = _merge_edges(offsets, source_solution, source.numbers, source.b)
        additions.extend(_gadget_completion(offsets, gadget, sizes))
        return Solution.of_edits(additions=additions)

    if construction is Construction.REED_TRIANGLES:
        return Solution.of_edits(deletions=_check_triangles(graph, source_solution))

    deletions = _check_triangles(graph, source_solution) + dummy_edges(graph.n)
    return Solution.of_edits(deletions=deletions)


# ---------------------------------------------------------------------------
# Source brute forces and fixtures
# ---------------------------------------------------------------------------

def max_independent_set(graph: Graph) -> FrozenSet[int]:
    """Exact maximum independent set as a maximum clique of the complement"""
    if graph.n == 0:
        return frozenset()
    clique, _ = nx.max_weight_clique(nx.complement(to_networkx(graph)), weight=None)
    return frozenset(clique)


def min_vertex_cover(graph: Graph) -> FrozenSet[int]:
    independent = max_independent_set(graph)
    return frozenset(v for v in range(graph.n) if v not in independent)


def solve_3partition(numbers: Sequence[int], b: int) -> Optional[List[Tuple[int, int, int]]]:
    """Index triples each summing to b, or None; the lowest unused index anchors each triple"""
    unused = set(range(len(numbers)))

    def search() -> Optional[List[Tuple[int, int, int]]]:
        if not unused:
            return []
        first = min(unused)
        unused.discard(first)
        for j, k in itertools.combinations(sorted(unused), 2):
            if numbers[first] + numbers[j] + numbers[k] == b:
                unused.difference_update((j, k))
                rest = search()
                if rest is not None:
                    return [(first, j, k)] + rest
                unused.update((j, k))
        unused.add(first)
        return None

    if len(numbers) % 3:
        return None
    return search()


def find_triangle_partition(graph: Graph) -> Optional[List[Tuple[int, int, int]]]:
    """Vertex-disjoint triangles covering every vertex, or None"""
    unused = set(range(graph.n))

    def search() -> Optional[List[Tuple[int, int, int]]]:
        if not unused:
            return []
        v = min(unused)
        unused.discard(v)
        options = sorted(u for u in graph.neighbors(v) if u in unused)
        for u, w in itertools.combinations(options, 2):
            if graph.has_edge(u, w):
                unused.difference_update((u, w))
                rest = search()
                if rest is not None:
                    return [(v, u, w)] + rest
                unused.update((u, w))
        unused.add(v)
        return None

    if graph.n % 3:
        return None
    return search()


def cube_graph() -> Graph:
    """Q3: cubic, triangle-free, planar, bipartite"""
    return hypercube_graph(3)


def prism_graph() -> Graph:
    """Triangular prism: cubic and planar, but not triangle-free"""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5),
                                (0, 3), (1, 4), (2, 5)])


def random_3partition(groups: int, b: int, seed: Optional[int] = None,
                      rng: Optional[random.Random] = None,
                      max_tries: int = 1000) -> Tuple[int, ...]:
    """Naive sampler of a YES 3-Partition instance: random triples summing to b, shuffled"""
    rng = rng or random.Random(seed)
    low, high = b // 4 + 1, (b - 1) // 2
    numbers: List[int] = []
    for _ in range(groups):
        for _ in range(max_tries):
            x, y = rng.randint(low, high), rng.randint(low, high)
            rest = b - x - y
            if 4 * rest > b and 2 * rest < b:
                numbers.extend((x, y, rest))
                break
        else:
            raise ContractError(f"no triple of numbers in ({b}/4, {b}/2) sums to {b}")
    rng.shuffle(numbers)
    return tuple(numbers)


GENERATORS = {
    Construction.IS_COPIES: gen_2evd_from_is_copies,
    Construction.IS_CLIQUES: gen_2evd_from_is_cliques,
    Construction.VC_PATHS: gen_revd_from_vc,
    Construction.EEA_3PARTITION: gen_2eea_from_3partition,
    Construction.REEA_3PARTITION: gen_reea_from_3partition,
    Construction.REED_TRIANGLES: gen_reed_from_triangle_partition,
    Construction.EEE_TRIANGLES: gen_2eee_from_triangle_partition,
}
