#!/usr/bin/env python3
"""
Spectral computations on adjacency matrices
Exact facts come from the integer characteristic polynomial (sympy dense ZZ arithmetic);
the floating spectrum (numpy) is a cross-check and the source of interlacing tests.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Sequence, Set, Tuple, Union

import numpy as np
from sympy.polys.densearith import dup_quo
from sympy.polys.densebasic import dup_degree
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd, dup_lcm
from sympy.polys.matrices import DomainMatrix
from sympy.polys.sqfreetools import dup_sqf_part

from errors import ContractError, InvariantViolation, NumericError
from graph_core import ClusterProfile, Graph, cluster_profile, connected_components

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_CLUSTER_TOLERANCE = 1e-6

# Dense univariate polynomial over ZZ, highest degree first (sympy "dup" layout)
Dup = List


@dataclass(frozen=True)
class CharPoly:
    """det(xI - A) with integer coefficients, lowest degree first"""
    coeffs: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_dup(cls, dup: Sequence) -> "CharPoly":
        return cls(tuple(int(c) for c in reversed(dup)))

    def to_dup(self) -> Dup:
        return [ZZ(c) for c in reversed(self.coeffs)]

    def satisfies_trace_identities(self, edge_count: int) -> bool:
        """c_{n-1} = 0 and c_{n-2} = -m for an adjacency matrix with m edges"""
        n = self.degree
        if self.coeffs[n] != 1:
            return False
        if n >= 1 and self.coeffs[n - 1] != 0:
            return False
        if n >= 2 and self.coeffs[n - 2] != -edge_count:
            return False
        return True

    def serialize(self) -> str:
        return " ".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            body = "" if magnitude == 1 and power > 0 else str(magnitude)
            if power >= 1:
                body += "x" if power == 1 else f"x^{power}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class FloatSpectrum:
    """Nondecreasing floating eigenvalues of an adjacency matrix"""
    values: Tuple[float, ...]
    tol: float

    def __len__(self) -> int:
        return len(self.values)

    def trace_is_zero(self) -> bool:
        return abs(sum(self.values)) <= self.tol * max(1, len(self.values))


def adjacency_matrix(graph: Graph) -> np.ndarray:
    matrix = np.zeros((graph.n, graph.n), dtype=float)
    for u, v in graph.edges():
        matrix[u, v] = matrix[v, u] = 1.0
    return matrix


# ---------------------------------------------------------------------------
# Exact path
# ---------------------------------------------------------------------------

def _integer_rows(graph: Graph) -> List[List]:
    return [[ZZ(row >> v & 1) for v in range(graph.n)] for row in graph.rows]


def _char_poly_dup(graph: Graph) -> Dup:
    if graph.n == 0:
        return [ZZ(1)]
    matrix = DomainMatrix(_integer_rows(graph), (graph.n, graph.n), ZZ)
    dup = list(matrix.charpoly())
    if not CharPoly.from_dup(dup).satisfies_trace_identities(graph.m):
        raise InvariantViolation(f"characteristic polynomial of a {graph.n}-vertex, {graph.m}-edge graph "
                                 f"breaks the trace identities")
    return dup


def char_poly(graph: Graph) -> CharPoly:
    """Exact characteristic polynomial (division-free Berkowitz over ZZ)"""
    return CharPoly.from_dup(_char_poly_dup(graph))


def square_free_part(poly: Union[CharPoly, Dup]) -> Dup:
    dup = poly.to_dup() if isinstance(poly, CharPoly) else poly
    if dup_degree(dup) <= 0:
        return [ZZ(1)]
    return dup_sqf_part(dup, ZZ)


def square_free_degree(poly: Union[CharPoly, Dup]) -> int:
    """Number of distinct roots: degree of p / gcd(p, p')"""
    return max(dup_degree(square_free_part(poly)), 0)


@lru_cache(maxsize=65536)
def _square_free_of_rows(n: int, rows: Tuple[int, ...]) -> Tuple:
    return tuple(square_free_part(_char_poly_dup(Graph(n, rows))))


def component_square_free_parts(graph: Graph) -> List[Tuple[Tuple[int, ...], Dup]]:
    """(component vertices, square-free char poly of the component) per component"""
    parts = []
    for component in connected_components(graph):
        sub, _ = graph.induced_subgraph(component)
        parts.append((component, list(_square_free_of_rows(sub.n, sub.rows))))
    return parts


def cluster_distinct_eigenvalues(profile: ClusterProfile) -> Set[int]:
    """Distinct eigenvalues of a disjoint union of cliques, in closed form"""
    values = {size - 1 for size in profile.sizes}
    if any(size >= 2 for size in profile.sizes):
        values.add(-1)
    return values


def distinct_eigenvalue_count(graph: Graph) -> int:
    """Exact number of distinct adjacency eigenvalues.

    Cluster graphs are answered from the clique closed form; otherwise the square-free
    parts of the components' characteristic polynomials are combined by lcm, whose
    degree equals the square-free degree of the whole polynomial.
    """
    if graph.n == 0:
        return 0
    profile = cluster_profile(graph)
    if profile is not None:
        return len(cluster_distinct_eigenvalues(profile))
    union = [ZZ(1)]
    for _, part in component_square_free_parts(graph):
        union = dup_lcm(union, part, ZZ)
    return max(dup_degree(union), 0)


def shares_eigenvalue(p: Dup, q: Dup) -> bool:
    return dup_degree(dup_gcd(p, q, ZZ)) > 0


def coprime_basis(polys: Sequence[Dup]) -> List[Dup]:
    """Pairwise coprime square-free polynomials such that every input is a product of some.

    Each basis element stands for a group of eigenvalues carried by exactly the same
    inputs. Only gcds and exact quotients are used, never factorization.
    """
    basis: List[Dup] = []
    for poly in polys:
        pending = [square_free_part(poly)]
        while pending:
            current = pending.pop()
            if dup_degree(current) <= 0:
                continue
            for index, element in enumerate(basis):
                common = dup_gcd(current, element, ZZ)
                if dup_degree(common) > 0:
                    basis.pop(index)
                    basis.append(common)
                    rest = dup_quo(element, common, ZZ)
                    if dup_degree(rest) > 0:
                        basis.append(rest)
                    pending.append(dup_quo(current, common, ZZ))
                    break
            else:
                basis.append(current)
    return basis


# ---------------------------------------------------------------------------
# Floating path
# ---------------------------------------------------------------------------

def float_spectrum(graph: Graph, tol: float = DEFAULT_TOLERANCE) -> FloatSpectrum:
    """All eigenvalues of the symmetric adjacency matrix, ascending"""
    if tol <= 0:
        raise ContractError(f"tolerance must be positive, got {tol}")
    if graph.n == 0:
        return FloatSpectrum((), tol)
    matrix = adjacency_matrix(graph)
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"symmetric eigensolver failed on n={graph.n}: {e}") from e
    residual = float(np.max(np.abs(matrix @ vectors - vectors * values)))
    if residual > tol * max(1, graph.n):
        raise NumericError(f"eigensolver residual {residual:.3e} exceeds tolerance {tol:.1e}")
    return FloatSpectrum(tuple(float(v) for v in values), tol)


def smallest_eigenvalue(graph: Graph, tol: float = DEFAULT_TOLERANCE) -> float:
    spectrum = float_spectrum(graph, tol)
    return spectrum.values[0] if spectrum.values else 0.0


def gap_cluster_count(values: Sequence[float], tol: float = DEFAULT_CLUSTER_TOLERANCE) -> int:
    """Number of groups after splitting the sorted values at gaps larger than tol"""
    ordered = sorted(values)
    if not ordered:
        return 0
    return 1 + sum(1 for low, high in zip(ordered, ordered[1:]) if high - low > tol)


def check_interlacing(outer: FloatSpectrum, inner: FloatSpectrum,
                      tol: float = DEFAULT_CLUSTER_TOLERANCE) -> bool:
    """Cauchy interlacing of a vertex-deleted subgraph's spectrum inside the full one"""
    if len(inner) != len(outer) - 1:
        raise ContractError(
            f"inner spectrum must have exactly one value fewer ({len(outer)} vs {len(inner)})")
    mu = sorted(outer.values, reverse=True)
    sigma = sorted(inner.values, reverse=True)
    return all(mu[i] + tol >= sigma[i] >= mu[i + 1] - tol for i in range(len(sigma)))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

class SpectrumKind(Enum):
    CLIQUE = "clique"
    PATH = "path"
    CYCLE = "cycle"


@dataclass(frozen=True)
class ClosedFormSpectrum:
    kind: SpectrumKind
    n: int
    values: Tuple[float, ...]

    def multiplicities(self, digits: int = 9) -> Dict[float, int]:
        counts: Dict[float, int] = {}
        for value in self.values:
            key = round(value, digits) + 0.0
            counts[key] = counts.get(key, 0) + 1
        return counts


def closed_form_spectrum(kind: Union[SpectrumKind, str], n: int) -> ClosedFormSpectrum:
    kind = SpectrumKind(kind)
    if n < 1:
        raise ContractError(f"{kind.value} spectrum needs n >= 1, got {n}")
    if kind is SpectrumKind.CLIQUE:
        values = [-1.0] * (n - 1) + [float(n - 1)]
    elif kind is SpectrumKind.PATH:
        values = [2 * math.cos(math.pi * j / (n + 1)) for j in range(1, n + 1)]
    else:
        if n < 3:
            raise ContractError(f"cycle spectrum needs n >= 3, got {n}")
        values = [2 * math.cos(2 * math.pi * j / n) for j in range(n)]
    return ClosedFormSpectrum(kind, n, tuple(sorted(values)))
