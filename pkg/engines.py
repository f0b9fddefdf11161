#!/usr/bin/env python3
"""
Engine dispatch - routes an instance to the oracle, a branching algorithm, a
polynomial special case or the 2-EEA kernel, and re-verifies every YES before returning.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from errors import InvariantViolation, UsageError
from fpt_solvers import solve_fpt
from graph_core import (ClusterProfile, Graph, cluster_profile, connected_components,
                        find_triangle, is_d_regular, is_forest)
from kernel_eea import KernelVerdict, kernelize_2eea, lift_solution, solve_kernel_2eea
from oracle import (Answer, Instance, ProblemKind, Solution, check_solution, is_feasible,
                    solve_exhaustive)
from poly_solvers import (optimal_2eed_cluster, optimal_2eed_trianglefree, optimal_2evd_forest,
                          optimal_2evd_regular)
from solver_config import SolverConfig

logger = logging.getLogger(__name__)


class Engine(Enum):
    ORACLE = "oracle"
    FPT = "fpt"
    POLY = "poly"
    KERNEL_ORACLE = "kernel+oracle"
    AUTO = "auto"


SUPPORTED_COMBINATIONS = {
    Engine.ORACLE: "any kind, any r (subject to the enumeration limit)",
    Engine.FPT: "EVD r=2, EED r=2, EVD r>=3",
    Engine.POLY: "EVD r=2 on forests or d-regular graphs (d<=2); EED r=2 on cluster or triangle-free graphs",
    Engine.KERNEL_ORACLE: "EEA r=2",
    Engine.AUTO: "any (poly, then fpt, then oracle)",
}


@dataclass
class EngineResult:
    answer: Answer
    solution: Optional[Solution]
    engine: str
    stats: Dict = field(default_factory=dict)
    distinct_count: Optional[int] = None


def supported_combinations() -> str:
    return "; ".join(f"{engine.value}: {text}" for engine, text in SUPPORTED_COMBINATIONS.items())


def _usage(instance: Instance, engine: Engine) -> UsageError:
    return UsageError(f"engine {engine.value} does not handle {instance.kind.value} with "
                      f"r={instance.r}. Supported: {supported_combinations()}")


def fpt_supports(instance: Instance) -> bool:
    kind, r = instance.kind, instance.r
    return (kind is ProblemKind.EVD and r >= 2) or (kind is ProblemKind.EED and r == 2)


def poly_recognizer(instance: Instance) -> Optional[Tuple[str, Callable[[Graph], Solution]]]:
    """The polynomial special case that applies to this instance, if any"""
    graph = instance.graph
    if instance.r != 2:
        return None
    if instance.kind is ProblemKind.EVD:
        if is_forest(graph):
            return "forest", optimal_2evd_forest
        degree = is_d_regular(graph)
        if degree is not None and degree <= 2:
            return "regular", optimal_2evd_regular
    if instance.kind is ProblemKind.EED:
        if cluster_profile(graph) is not None:
            return "cluster", optimal_2eed_cluster
        if find_triangle(graph) is None:
            return "triangle-free", optimal_2eed_trianglefree
    return None


def _decided(solution: Optional[Solution], engine: str, stats: Optional[Dict] = None) -> EngineResult:
    answer = Answer.YES if solution is not None else Answer.NO
    return EngineResult(answer, solution, engine, stats or {})


def _run_oracle(instance: Instance, config: SolverConfig) -> EngineResult:
    solution = solve_exhaustive(instance, config.oracle_max_subsets)
    return _decided(solution, Engine.ORACLE.value)


def _run_fpt(instance: Instance, config: SolverConfig) -> EngineResult:
    if not fpt_supports(instance):
        raise _usage(instance, Engine.FPT)
    result = solve_fpt(instance, max_nodes=config.revd_max_nodes,
                       oracle_max_subsets=config.oracle_max_subsets)
    return EngineResult(result.answer, result.solution, Engine.FPT.value, result.stats.to_dict())


def _run_poly(instance: Instance, config: SolverConfig) -> EngineResult:
    recognized = poly_recognizer(instance)
    if recognized is None:
        raise _usage(instance, Engine.POLY)
    name, solver = recognized
    optimum = solver(instance.graph)
    logger.debug(f"Polynomial case '{name}': optimum {optimum.size}, budget {instance.k}")
    solution = optimum if optimum.size <= instance.k else None
    return _decided(solution, f"{Engine.POLY.value}:{name}", {"optimum": optimum.size})


def _run_kernel(instance: Instance, config: SolverConfig) -> EngineResult:
    if instance.kind is not ProblemKind.EEA or instance.r != 2:
        raise _usage(instance, Engine.KERNEL_ORACLE)
    trace = kernelize_2eea(instance.graph, instance.k)
    stats = {"rules": len(trace.rules_applied), "verdict": trace.verdict.value}
    if trace.verdict is KernelVerdict.NO:
        return _decided(None, Engine.KERNEL_ORACLE.value, stats)
    if trace.verdict is KernelVerdict.YES:
        return _decided(Solution.of_edits(additions=trace.completion_edges),
                        Engine.KERNEL_ORACLE.value, stats)

    final = trace.final_instance
    stats["kernel_vertices"] = final.graph.n
    stats["kernel_budget"] = final.k
    if is_feasible(final, config.oracle_max_subsets):
        kernel_solution = solve_exhaustive(final, config.oracle_max_subsets)
        stats["kernel_solver"] = "oracle"
    else:
        profile = ClusterProfile(tuple(len(c) for c in connected_components(final.graph)))
        kernel_solution = solve_kernel_2eea(profile, final.k)
        stats["kernel_solver"] = "partition"
    if kernel_solution is None:
        return _decided(None, Engine.KERNEL_ORACLE.value, stats)
    return _decided(lift_solution(trace, kernel_solution), Engine.KERNEL_ORACLE.value, stats)


def _run_auto(instance: Instance, config: SolverConfig) -> EngineResult:
    if poly_recognizer(instance) is not None:
        return _run_poly(instance, config)
    if fpt_supports(instance):
        return _run_fpt(instance, config)
    return _run_oracle(instance, config)


_RUNNERS = {
    Engine.ORACLE: _run_oracle,
    Engine.FPT: _run_fpt,
    Engine.POLY: _run_poly,
    Engine.KERNEL_ORACLE: _run_kernel,
    Engine.AUTO: _run_auto,
}


def run_engine(instance: Instance, engine: Engine = Engine.AUTO,
               config: Optional[SolverConfig] = None) -> EngineResult:
    """Solve with the chosen engine; a YES is returned only after it re-verifies"""
    config = config or SolverConfig()
    try:
        engine = Engine(engine)
    except ValueError:
        raise UsageError(f"unknown engine {engine!r}. Supported: {supported_combinations()}") from None
    result = _RUNNERS[engine](instance, config)
    if result.answer is Answer.YES:
        verdict = check_solution(instance, result.solution, with_count=True)
        if not verdict.accepted:
            raise InvariantViolation(f"{result.engine} returned {result.solution.describe()} "
                                     f"which fails verification: {verdict.reason}")
        result.distinct_count = verdict.distinct_count
    return result


def engine_names() -> List[str]:
    return [engine.value for engine in Engine]
