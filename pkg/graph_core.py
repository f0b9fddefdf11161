#!/usr/bin/env python3
"""
Graph Core - bitset graphs shared by every solver
Vertices are dense integers 0..n-1, row v is an int whose bit u is set iff {u, v} is an edge.
Graphs are immutable; modifications build new graphs and return the relabeling map.
"""

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from errors import ContractError, GraphParseError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
EdgeSet = FrozenSet[Edge]

INFINITE_DIAMETER = math.inf


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def edge_set(edges: Iterable[Sequence[int]]) -> EdgeSet:
    """Canonicalize an iterable of vertex pairs into an EdgeSet"""
    return frozenset(canonical_edge(int(u), int(v)) for u, v in edges)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask, lowest first"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with bitset adjacency rows"""
    n: int
    rows: Tuple[int, ...]
    m: int = field(init=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ContractError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        degree_sum = 0
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row >> v & 1:
                raise ContractError(f"self-loop at vertex {v}")
            if row & ~full:
                raise ContractError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            degree_sum += row.bit_count()
        object.__setattr__(self, 'm', degree_sum // 2)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ContractError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.rows[v]))

    def edges(self) -> List[Edge]:
        """Canonical edge list sorted by (u, v)"""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> List[Edge]:
        full = self.vertex_mask
        result = []
        for u in range(self.n):
            missing = full & ~self.rows[u] & ~((1 << (u + 1)) - 1)
            result.extend((u, v) for v in iter_bits(missing))
        return result

    def induced_subgraph(self, keep: Iterable[int]) -> Tuple["Graph", Tuple[int, ...]]:
        """Subgraph induced by keep, relabeled order-preservingly"""
        kept = tuple(sorted(set(keep)))
        position = {old: new for new, old in enumerate(kept)}
        keep_mask = 0
        for v in kept:
            keep_mask |= 1 << v
        rows = []
        for old in kept:
            row = 0
            for u in iter_bits(self.rows[old] & keep_mask):
                row |= 1 << position[u]
            rows.append(row)
        return Graph(len(kept), tuple(rows)), kept


# ---------------------------------------------------------------------------
# Cluster profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClusterProfile:
    """Clique orders of a cluster graph, listed in component order"""
    sizes: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def is_uniform(self) -> bool:
        # The empty profile counts as uniform (deleting everything is legal)
        return len(set(self.sizes)) <= 1

    def multiset(self) -> Counter:
        return Counter(self.sizes)

    def sorted_sizes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.sizes))

    def __str__(self) -> str:
        return "{" + ",".join(str(s) for s in self.sorted_sizes()) + "}"


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------

def _parse_int_pair(line: str, line_number: int) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphParseError(f"expected two integers, got {line!r}", line_number)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"expected two integers, got {line!r}", line_number) from None


def parse_graph(text: str, first_line_number: int = 1) -> Graph:
    """Parse the "n m" + m lines of "u v" edge-list format.

    Blank lines and lines starting with '#' are skipped. Duplicate edges collapse with a
    warning; self-loops and out-of-range endpoints are hard errors.
    """
    lines = [(first_line_number + offset, raw.strip())
             for offset, raw in enumerate(text.splitlines())]
    lines = [(number, line) for number, line in lines if line and not line.startswith('#')]
    if not lines:
        raise GraphParseError("empty graph document", first_line_number)

    header_line, header = lines[0]
    n, m = _parse_int_pair(header, header_line)
    if n < 0 or m < 0:
        raise GraphParseError(f"negative counts in header {header!r}", header_line)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else header_line
        raise GraphParseError(f"header announces {m} edges but {len(body)} edge lines follow", last)

    rows = [0] * n
    for line_number, line in body:
        u, v = _parse_int_pair(line, line_number)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"endpoint out of range 0..{n - 1} in {line!r}", line_number)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", line_number)
        if rows[u] >> v & 1:
            logger.warning(f"line {line_number}: duplicate edge ({u}, {v}) collapsed")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def serialize_graph(graph: Graph) -> str:
    """Canonical edge-list text, edges sorted by (u, v)"""
    edges = graph.edges()
    lines = [f"{graph.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Traversal
# ---------------------------------------------------------------------------

def _component_masks(graph: Graph) -> List[int]:
    masks = []
    remaining = graph.vertex_mask
    while remaining:
        component = frontier = remaining & -remaining
        while frontier:
            reached = 0
            for v in iter_bits(frontier):
                reached |= graph.rows[v]
            frontier = reached & ~component
            component |= frontier
        masks.append(component)
        remaining &= ~component
    return masks


def connected_components(graph: Graph) -> List[Tuple[int, ...]]:
    """Vertex sets of the components, ordered by smallest member"""
    return [tuple(iter_bits(mask)) for mask in _component_masks(graph)]


def _bfs_layers(graph: Graph, source: int) -> List[int]:
    layers = [1 << source]
    seen = 1 << source
    while True:
        reached = 0
        for v in iter_bits(layers[-1]):
            reached |= graph.rows[v]
        reached &= ~seen
        if not reached:
            return layers
        seen |= reached
        layers.append(reached)


def eccentricity(graph: Graph, v: int) -> int:
    return len(_bfs_layers(graph, v)) - 1


def component_diameters(graph: Graph) -> List[int]:
    """Diameter of each component, aligned with connected_components"""
    return [max(eccentricity(graph, v) for v in component)
            for component in connected_components(graph)]


def diameter(graph: Graph) -> float:
    """Diameter of a connected graph; INFINITE_DIAMETER if disconnected (0 for n <= 1)"""
    diameters = component_diameters(graph)
    if len(diameters) > 1:
        return INFINITE_DIAMETER
    return diameters[0] if diameters else 0


def shortest_path(graph: Graph, source: int, target: int) -> Optional[List[int]]:
    """BFS shortest path; each vertex takes its lowest-index predecessor"""
    layers = _bfs_layers(graph, source)
    for depth, layer in enumerate(layers):
        if layer >> target & 1:
            break
    else:
        return None
    path = [target]
    for layer in reversed(layers[:depth]):
        path.append(lowest_bit(layer & graph.rows[path[-1]]))
    path.reverse()
    return path


def find_long_shortest_path(graph: Graph, length: int) -> Optional[List[int]]:
    """Some shortest path with exactly ``length`` edges, or None if every distance is shorter.

    Any prefix of a shortest path is itself shortest, so a pair at distance >= length
    yields one. Sources are tried in index order; the target is the lowest vertex on
    the BFS layer ``length``.
    """
    for source in range(graph.n):
        layers = _bfs_layers(graph, source)
        if len(layers) > length:
            return shortest_path(graph, source, lowest_bit(layers[length]))
    return None


# ---------------------------------------------------------------------------
# Structure recognizers
# ---------------------------------------------------------------------------

def find_induced_p3(graph: Graph) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest (b, a, c) with a-b-c induced; None iff cluster graph"""
    for b in range(graph.n):
        neighborhood = graph.rows[b]
        for a in iter_bits(neighborhood):
            candidates = neighborhood & ~graph.rows[a] & ~(1 << a)
            if candidates:
                return a, b, lowest_bit(candidates)
    return None


def cluster_profile(graph: Graph) -> Optional[ClusterProfile]:
    """Component sizes if every component is a clique, else None"""
    sizes = []
    for mask in _component_masks(graph):
        for v in iter_bits(mask):
            if graph.rows[v] | (1 << v) != mask:
                return None
        sizes.append(mask.bit_count())
    return ClusterProfile(tuple(sizes))


def find_triangle(graph: Graph) -> Optional[Tuple[int, int, int]]:
    for u in range(graph.n):
        for v in iter_bits(graph.rows[u] >> (u + 1) << (u + 1)):
            common = graph.rows[u] & graph.rows[v] & ~((1 << (v + 1)) - 1)
            if common:
                return u, v, lowest_bit(common)
    return None


def is_triangle_free(graph: Graph) -> bool:
    return find_triangle(graph) is None


def is_d_regular(graph: Graph) -> Optional[int]:
    """Common degree if every vertex has it, else None (0 for the empty graph)"""
    degrees = {row.bit_count() for row in graph.rows}
    if len(degrees) > 1:
        return None
    return degrees.pop() if degrees else 0


def is_forest(graph: Graph) -> bool:
    return graph.m == graph.n - len(_component_masks(graph))


def max_degree(graph: Graph) -> int:
    return max((row.bit_count() for row in graph.rows), default=0)


def is_bipartite(graph: Graph) -> bool:
    return nx.is_bipartite(to_networkx(graph))


def clique_number(graph: Graph) -> int:
    if graph.n == 0:
        return 0
    return max(len(clique) for clique in nx.find_cliques(to_networkx(graph)))


# ---------------------------------------------------------------------------
# Modification
# ---------------------------------------------------------------------------

def apply_modification(graph: Graph,
                       del_v: Iterable[int] = (),
                       del_e: Iterable[Sequence[int]] = (),
                       add_e: Iterable[Sequence[int]] = ()) -> Tuple[Graph, Tuple[int, ...]]:
    """Delete vertices, delete edges, add edges; return (graph, new->old vertex map)"""
    deleted = set()
    for v in del_v:
        if not 0 <= v < graph.n:
            raise ContractError(f"deleted vertex {v} is not in 0..{graph.n - 1}")
        deleted.add(v)

    rows = list(graph.rows)
    for u, v in edge_set(del_e):
        if not (0 <= u < graph.n and 0 <= v < graph.n) or not graph.has_edge(u, v):
            raise ContractError(f"deleted edge ({u}, {v}) is not an edge of the graph")
        if u in deleted or v in deleted:
            raise ContractError(f"deleted edge ({u}, {v}) touches a deleted vertex")
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
    for u, v in edge_set(add_e):
        if u == v:
            raise ContractError(f"added edge ({u}, {v}) is a self-loop")
        if not (0 <= u < graph.n and 0 <= v < graph.n):
            raise ContractError(f"added edge ({u}, {v}) has an endpoint outside 0..{graph.n - 1}")
        if graph.has_edge(u, v):
            raise ContractError(f"added edge ({u}, {v}) is already an edge of the graph")
        if u in deleted or v in deleted:
            raise ContractError(f"added edge ({u}, {v}) touches a deleted vertex")
        rows[u] |= 1 << v
        rows[v] |= 1 << u

    modified = Graph(graph.n, tuple(rows))
    if not deleted:
        return modified, tuple(range(graph.n))
    return modified.induced_subgraph(v for v in range(graph.n) if v not in deleted)


def delete_vertices(graph: Graph, vertices: Iterable[int]) -> Tuple[Graph, Tuple[int, ...]]:
    return apply_modification(graph, del_v=vertices)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def cluster_graph(sizes: Sequence[int]) -> Graph:
    """Disjoint cliques laid out consecutively in the given order"""
    rows = []
    offset = 0
    for size in sizes:
        if size < 1:
            raise ContractError(f"clique size must be positive, got {size}")
        block = ((1 << size) - 1) << offset
        rows.extend(block ^ (1 << v) for v in range(offset, offset + size))
        offset += size
    return Graph(offset, tuple(rows))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ContractError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, ((0, v) for v in range(1, leaves + 1)))


def complete_bipartite_graph(p: int, q: int) -> Graph:
    return Graph.from_edges(p + q, ((u, p + v) for u in range(p) for v in range(q)))


def hypercube_graph(dimension: int) -> Graph:
    n = 1 << dimension
    return Graph.from_edges(n, ((v, v ^ (1 << bit)) for v in range(n)
                                for bit in range(dimension) if v < v ^ (1 << bit)))


def petersen_graph() -> Graph:
    return from_networkx(nx.petersen_graph())


def disjoint_union(*graphs: Graph) -> Graph:
    rows = []
    offset = 0
    for graph in graphs:
        rows.extend(row << offset for row in graph.rows)
        offset += graph.n
    return Graph(offset, tuple(rows))


def random_graph(n: int, p: float, seed: Optional[int] = None,
                 rng: Optional[random.Random] = None) -> Graph:
    """G(n, p) sample from a seeded generator"""
    rng = rng or random.Random(seed)
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)
                                if rng.random() < p))


def random_forest(n: int, seed: Optional[int] = None,
                  rng: Optional[random.Random] = None, keep: float = 0.8) -> Graph:
    """Random recursive tree with each edge kept with probability ``keep``"""
    rng = rng or random.Random(seed)
    return Graph.from_edges(n, ((rng.randrange(v), v) for v in range(1, n) if rng.random() < keep))


def to_networkx(graph: Graph) -> nx.Graph:
    result = nx.Graph()
    result.add_nodes_from(range(graph.n))
    result.add_edges_from(graph.edges())
    return result


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Relabel nodes to 0..n-1 in sorted order where possible, insertion order otherwise"""
    nodes = list(nx_graph.nodes())
    try:
        nodes.sort()
    except TypeError:
        pass
    index: Dict = {node: i for i, node in enumerate(nodes)}
    return Graph.from_edges(len(nodes), ((index[u], index[v]) for u, v in nx_graph.edges()))
