#!/usr/bin/env python3
"""
Kernelization for 2-EEA (edge additions towards a uniform cluster graph)
Rules run in a fixed order: complete components, terminal checks, small-class bound,
largest-class trimming. The reduced instance has at most 4k^2 + 2k + 1 vertices.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from errors import InvariantViolation
from graph_core import ClusterProfile, Edge, Graph, cluster_graph, connected_components
from oracle import Instance, ProblemKind, Solution, verify

logger = logging.getLogger(__name__)


class KernelVerdict(Enum):
    YES = "YES"
    NO = "NO"
    REDUCED = "reduced"


@dataclass
class RuleApplication:
    rule: str
    detail: str
    budget_delta: int = 0

    def __str__(self) -> str:
        delta = f" (k {self.budget_delta:+d})" if self.budget_delta else ""
        return f"{self.rule}: {self.detail}{delta}"


@dataclass
class KernelTrace:
    """Everything the rules did, plus the data needed to lift a kernel solution back"""
    original: Instance
    rules_applied: List[RuleApplication] = field(default_factory=list)
    verdict: KernelVerdict = KernelVerdict.REDUCED
    final_instance: Optional[Instance] = None
    completion_edges: List[Edge] = field(default_factory=list)
    vertex_map: Tuple[int, ...] = ()

    @property
    def budget(self) -> int:
        return self.original.k + sum(a.budget_delta for a in self.rules_applied)

    @staticmethod
    def size_bound(k: int) -> int:
        return 4 * k * k + 2 * k + 1

    def record(self, rule: str, detail: str, budget_delta: int = 0) -> None:
        application = RuleApplication(rule, detail, budget_delta)
        self.rules_applied.append(application)
        logger.debug(str(application))

    def describe(self) -> List[str]:
        lines = [str(a) for a in self.rules_applied]
        lines.append(f"verdict: {self.verdict.value}")
        if self.verdict is KernelVerdict.REDUCED and self.final_instance is not None:
            final = self.final_instance
            bound = self.size_bound(final.k)
            lines.append(f"kernel: n={final.graph.n}, k={final.k}, "
                         f"bound 4k^2+2k+1={bound}, within bound: {final.graph.n <= bound}")
        return lines


def _size_classes(profile: ClusterProfile) -> List[Tuple[int, int]]:
    """(size x_i, count n_i) in increasing size"""
    return sorted(Counter(profile.sizes).items())


def kernelize_2eea(graph: Graph, k: int) -> KernelTrace:
    """Apply the reduction rules in order and return the trace"""
    trace = KernelTrace(Instance(ProblemKind.EEA, 2, k, graph))

    # RR1: every component becomes a clique
    components = connected_components(graph)
    for component in components:
        missing = [(u, v) for i, u in enumerate(component) for v in component[i + 1:]
                   if not graph.has_edge(u, v)]
        if missing:
            trace.completion_edges.extend(missing)
            trace.record("RR1", f"completed component at vertex {component[0]} "
                                f"with {len(missing)} edges", -len(missing))
    budget = trace.budget
    profile = ClusterProfile(tuple(len(c) for c in components))
    classes = _size_classes(profile)

    # RR2
    if budget < 0:
        trace.record("RR2", f"budget exhausted (k={budget})")
        trace.verdict = KernelVerdict.NO
        return trace
    if len(classes) <= 1:
        trace.record("RR2", f"profile {profile} is uniform")
        trace.verdict = KernelVerdict.YES
        return trace
    if budget == 0:
        trace.record("RR2", f"k=0 with {len(classes)} clique sizes")
        trace.verdict = KernelVerdict.NO
        return trace

    # RR3
    x_t, n_t = classes[-1]
    for size, count in classes[:-1]:
        if size * count > 2 * budget:
            trace.record("RR3", f"{count} cliques of size {size}: {count * size} > 2k={2 * budget}")
            trace.verdict = KernelVerdict.NO
            return trace
    if x_t - 1 > budget:
        trace.record("RR3b", f"growing any clique to size {x_t} costs at least {x_t - 1} > k={budget}")
        trace.verdict = KernelVerdict.NO
        return trace

    # RR4
    kept_components = list(components)
    if n_t * x_t > 2 * budget:
        keep = math.ceil((2 * budget + 1) / x_t)
        if keep < n_t:
            largest = [c for c in components if len(c) == x_t]
            dropped = set(largest[keep:])
            kept_components = [c for c in components if c not in dropped]
            trace.record("RR4", f"kept {keep} of {n_t} cliques of size {x_t}")

    trace.vertex_map = tuple(v for c in kept_components for v in c)
    final_graph = cluster_graph([len(c) for c in kept_components])
    trace.final_instance = Instance(ProblemKind.EEA, 2, budget, final_graph)
    trace.verdict = KernelVerdict.REDUCED

    bound = trace.size_bound(budget)
    if final_graph.n > bound:
        raise InvariantViolation(f"kernel has {final_graph.n} vertices, bound is {bound} for k={budget}")
    logger.info(f"Kernel: {graph.n} -> {final_graph.n} vertices, k {k} -> {budget}")
    return trace


# ---------------------------------------------------------------------------
# Solving kernelized instances
# ---------------------------------------------------------------------------

def merge_cost(profile: ClusterProfile, x: int) -> int:
    """Edges added when every group of cliques merges into one clique of size x"""
    total = profile.total
    return (total * x - sum(s * s for s in profile.sizes)) // 2


def partition_into_groups(sizes: List[int], target: int) -> Optional[List[List[int]]]:
    """Indices of sizes grouped so every group sums to target, or None.

    Largest items first; among bins with the same remaining room only the first is
    tried, and failed (item, remaining rooms) states are remembered.
    """
    total = sum(sizes)
    if target <= 0 or total % target or max(sizes, default=0) > target:
        return None
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], i))
    groups = total // target
    room = [target] * groups
    assignment: Dict[int, int] = {}
    failed = set()

    def place(position: int) -> bool:
        if position == len(order):
            return True
        state = (position, tuple(sorted(room)))
        if state in failed:
            return False
        item = order[position]
        size = sizes[item]
        tried = set()
        for bin_index in range(groups):
            if room[bin_index] < size or room[bin_index] in tried:
                continue
            tried.add(room[bin_index])
            room[bin_index] -= size
            assignment[item] = bin_index
            if place(position + 1):
                return True
            room[bin_index] += size
            del assignment[item]
        failed.add(state)
        return False

    if not place(0):
        return None
    result: List[List[int]] = [[] for _ in range(groups)]
    for item in sorted(assignment):
        result[assignment[item]].append(item)
    return sorted((g for g in result if g), key=lambda g: g[0])


def solve_kernel_2eea(profile: ClusterProfile, k: int) -> Optional[Solution]:
    """Cheapest merge of the cliques of cluster_graph(profile.sizes) into equal groups.

    The cost depends only on the common target size x, so targets are tried from the
    largest clique size upward and the first partitionable one within budget wins.
    """
    if not profile.sizes:
        return Solution()
    sizes = list(profile.sizes)
    total = profile.total
    for x in range(max(sizes), total + 1):
        if total % x:
            continue
        cost = merge_cost(profile, x)
        if cost > k:
            logger.debug(f"Target size {x} costs {cost} > k={k}; no larger target is cheaper")
            return None
        groups = partition_into_groups(sizes, x)
        if groups is None:
            continue
        offsets = [0]
        for s in sizes:
            offsets.append(offsets[-1] + s)
        additions = []
        for group in groups:
            for i, a in enumerate(group):
                for b in group[i + 1:]:
                    additions.extend((u, v) for u in range(offsets[a], offsets[a + 1])
                                     for v in range(offsets[b], offsets[b + 1]))
        logger.debug(f"Merged into {len(groups)} cliques of size {x} with {cost} additions")
        return Solution.of_edits(additions=additions)
    return None


def lift_solution(trace: KernelTrace, kernel_solution: Solution) -> Solution:
    """Map kernel additions to original labels and add the component completions"""
    lifted = [(trace.vertex_map[u], trace.vertex_map[v]) for u, v in kernel_solution.additions]
    return Solution.of_edits(additions=list(trace.completion_edges) + lifted)


def solve_2eea_via_kernel(graph: Graph, k: int) -> Tuple[Optional[Solution], KernelTrace]:
    """Kernelize, solve the kernel exactly, and lift the answer to the input graph"""
    trace = kernelize_2eea(graph, k)
    if trace.verdict is KernelVerdict.NO:
        return None, trace
    if trace.verdict is KernelVerdict.YES:
        return Solution.of_edits(additions=trace.completion_edges), trace

    final = trace.final_instance
    profile = ClusterProfile(tuple(len(c) for c in connected_components(final.graph)))
    kernel_solution = solve_kernel_2eea(profile, final.k)
    if kernel_solution is None:
        return None, trace
    solution = lift_solution(trace, kernel_solution)
    if not verify(trace.original, solution):
        raise InvariantViolation(f"lifted kernel solution {solution.describe()} does not verify")
    return solution, trace
