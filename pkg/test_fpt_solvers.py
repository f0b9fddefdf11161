#!/usr/bin/env python3
"""Tests for the branching solvers"""

import math
import random

import pytest

from conftest import atlas_graphs, integer_partitions
from errors import ContractError
from graph_core import (ClusterProfile, cluster_graph, complete_graph, cycle_graph, disjoint_union,
                        path_graph, random_graph)
from fpt_solvers import (BranchStats, cluster_leaf_eed_cost, cluster_leaf_eed_deletions,
                         cluster_leaf_evd_cost, cluster_leaf_evd_deletions, leaf_branch_vertices,
                         solve_2eed, solve_2evd, solve_fpt, solve_revd)
from oracle import Answer, Instance, ProblemKind, Solution, is_feasible, minimum_solution_size, verify

# every cluster graph on at most 12 vertices, one per multiset of clique sizes
CLUSTER_PROFILES = [
    pytest.param(tuple(sizes), id="-".join(map(str, sizes)),
                 marks=[pytest.mark.slow] if total > 8 else [])
    for total in range(1, 13) for sizes in integer_partitions(total)
]

SWEEP_GRAPHS = [graph for graph in atlas_graphs(5) if graph.n > 0]


def assert_matches_oracle(result, instance):
    expected = minimum_solution_size(instance)
    if expected is None:
        assert result.answer is Answer.NO
        assert result.solution is None
    else:
        assert result.answer is Answer.YES
        assert result.solution.size == expected
        assert verify(instance, result.solution)


def seeded_instances(seed, count, n_max=9, k_max=4):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_graph(rng.randint(3, n_max), rng.uniform(0.2, 0.8), rng=rng), rng.randint(0, k_max)


class TestClusterLeaves:
    @pytest.mark.parametrize("sizes, cost, x", [
        ((3, 3, 2), 2, 2),
        ((5,), 0, 5),
        ((1, 2, 3), 2, 2),
        ((4, 1, 1, 1, 1), 3, 1),
    ])
    def test_evd_cost(self, sizes, cost, x):
        assert cluster_leaf_evd_cost(ClusterProfile(sizes)) == (cost, x)

    @pytest.mark.parametrize("sizes, cost, x", [
        ((4, 2), 4, 2),
        ((3, 3), 0, 3),
        ((3, 2), 4, 1),
        ((6, 4), 16, 2),
    ])
    def test_eed_cost(self, sizes, cost, x):
        assert cluster_leaf_eed_cost(ClusterProfile(sizes)) == (cost, x)

    def test_empty_profile(self):
        with pytest.raises(ContractError):
            cluster_leaf_evd_cost(ClusterProfile(()))

    def test_evd_deletions_match_cost(self):
        graph = cluster_graph([3, 3, 2])
        deleted = cluster_leaf_evd_deletions(graph, 2)
        assert deleted == [0, 3]
        assert verify(Instance(ProblemKind.EVD, 2, 2, graph), Solution.of_vertices(deleted))

    def test_eed_deletions_match_cost(self):
        graph = cluster_graph([4, 2])
        deleted = cluster_leaf_eed_deletions(graph, 2)
        assert len(deleted) == 4
        assert verify(Instance(ProblemKind.EED, 2, 4, graph), Solution.of_edits(deletions=deleted))

    @pytest.mark.parametrize("sizes", CLUSTER_PROFILES)
    def test_evd_cost_is_oracle_minimum(self, sizes):
        graph = cluster_graph(sizes)
        cost, x = cluster_leaf_evd_cost(ClusterProfile(sizes))
        instance = Instance(ProblemKind.EVD, 2, cost, graph)
        assert minimum_solution_size(instance) == cost
        deleted = cluster_leaf_evd_deletions(graph, x)
        assert len(deleted) == cost
        assert verify(instance, Solution.of_vertices(deleted))

    @pytest.mark.parametrize("sizes", CLUSTER_PROFILES)
    def test_eed_cost_is_oracle_minimum(self, sizes):
        graph = cluster_graph(sizes)
        cost, x = cluster_leaf_eed_cost(ClusterProfile(sizes))
        assert x == math.gcd(*sizes)
        instance = Instance(ProblemKind.EED, 2, cost, graph)
        deleted = cluster_leaf_eed_deletions(graph, x)
        assert len(deleted) == cost
        assert verify(instance, Solution.of_edits(deletions=deleted))
        if is_feasible(instance, max_subsets=200_000):
            assert minimum_solution_size(instance) == cost
        else:
            # every part of the result sits inside one clique, so its size divides all sizes
            costs = [sum(s * (s - d) // 2 for s in sizes)
                     for d in range(1, max(sizes) + 1) if all(s % d == 0 for s in sizes)]
            assert min(costs) == cost


class TestTwoEVD:
    def test_examples(self):
        result = solve_2evd(path_graph(3), 1)
        assert result.answer is Answer.YES
        assert result.solution == Solution.of_vertices([0])
        assert solve_2evd(path_graph(3), 0).answer is Answer.NO

    def test_cluster_input(self):
        result = solve_2evd(disjoint_union(complete_graph(3), complete_graph(2)), 2)
        assert result.answer is Answer.YES
        assert result.solution.size == 1
        assert result.stats.nodes_visited == 0

    def test_negative_budget(self):
        with pytest.raises(ContractError):
            solve_2evd(path_graph(3), -1)

    def test_node_bound(self, rng):
        for _ in range(30):
            graph = random_graph(rng.randint(4, 9), 0.5, rng=rng)
            k = rng.randint(0, 3)
            stats = solve_2evd(graph, k).stats
            assert stats.nodes_visited <= (3 ** k - 1) // 2
            assert stats.max_depth <= k

    def test_matches_oracle(self, rng):
        for _ in range(60):
            graph = random_graph(rng.randint(3, 7), rng.uniform(0.2, 0.8), rng=rng)
            k = rng.randint(0, 3)
            result = solve_2evd(graph, k)
            expected = minimum_solution_size(Instance(ProblemKind.EVD, 2, k, graph))
            if expected is None:
                assert result.answer is Answer.NO
            else:
                assert result.solution.size == expected
                assert verify(Instance(ProblemKind.EVD, 2, k, graph), result.solution)


class TestTwoEED:
    def test_examples(self):
        result = solve_2eed(complete_graph(3), 0)
        assert result.answer is Answer.YES and result.solution == Solution()
        assert solve_2eed(path_graph(3), 1).answer is Answer.NO
        assert solve_2eed(path_graph(3), 2).solution.size == 2
        assert solve_2eed(disjoint_union(complete_graph(4), complete_graph(2)), 4).answer is Answer.YES

    def test_node_bound(self, rng):
        for _ in range(30):
            graph = random_graph(rng.randint(4, 9), 0.5, rng=rng)
            k = rng.randint(0, 4)
            assert solve_2eed(graph, k).stats.nodes_visited <= 2 ** k - 1

    def test_matches_oracle(self, rng):
        for _ in range(60):
            graph = random_graph(rng.randint(3, 6), rng.uniform(0.2, 0.8), rng=rng)
            k = rng.randint(0, 3)
            result = solve_2eed(graph, k)
            expected = minimum_solution_size(Instance(ProblemKind.EED, 2, k, graph))
            if expected is None:
                assert result.answer is Answer.NO
            else:
                assert result.solution.size == expected
                assert verify(Instance(ProblemKind.EED, 2, k, graph), result.solution)


class TestREVD:
    def test_examples(self):
        result = solve_revd(path_graph(5), 3, 1)
        assert result.answer is Answer.YES
        assert result.solution == Solution.of_vertices([1])
        assert solve_revd(complete_graph(5), 3, 0).solution == Solution()
        assert solve_revd(path_graph(8), 3, 0).answer is Answer.NO

    def test_rejects_small_r(self):
        with pytest.raises(ContractError):
            solve_revd(path_graph(5), 2, 1)

    def test_precheck_cuts_long_paths(self):
        result = solve_revd(path_graph(20), 3, 1)
        assert result.answer is Answer.NO
        assert result.stats.precheck_cuts == 1
        assert result.stats.nodes_visited == 0

    def test_oracle_fallback(self):
        result = solve_revd(path_graph(5), 3, 1, max_nodes=0)
        assert result.stats.oracle_fallback
        assert result.solution == Solution.of_vertices([1])

    def test_indeterminate_when_oracle_refuses(self):
        result = solve_revd(path_graph(5), 3, 1, max_nodes=0, oracle_max_subsets=0)
        assert result.answer is Answer.INDETERMINATE
        assert result.solution is None

    def test_leaf_branching_picks_carrying_components(self):
        # K4 + C4: eigenvalues {3,-1} and {2,0,-2}; no shared group
        graph = disjoint_union(complete_graph(4), cycle_graph(4))
        stats = BranchStats()
        assert leaf_branch_vertices(graph, stats) == list(range(8))
        assert stats.fallbacks == 0

    def test_leaf_branching_skips_redundant_component(self):
        # the two triangles carry the same eigenvalues, so only the first is branched on
        graph = disjoint_union(complete_graph(3), complete_graph(3), path_graph(3))
        assert leaf_branch_vertices(graph) == [0, 1, 2, 6, 7, 8]

    @pytest.mark.slow
    def test_matches_oracle(self, rng):
        for _ in range(40):
            graph = random_graph(rng.randint(4, 7), rng.uniform(0.3, 0.7), rng=rng)
            k = rng.randint(0, 2)
            result = solve_revd(graph, 3, k)
            expected = minimum_solution_size(Instance(ProblemKind.EVD, 3, k, graph))
            if expected is None:
                assert result.answer is Answer.NO
            else:
                assert result.solution.size == expected
                assert verify(Instance(ProblemKind.EVD, 3, k, graph), result.solution)


class TestDispatch:
    def test_routes_by_kind_and_r(self):
        assert solve_fpt(Instance(ProblemKind.EVD, 2, 1, path_graph(3))).answer is Answer.YES
        assert solve_fpt(Instance(ProblemKind.EED, 2, 1, path_graph(3))).answer is Answer.NO
        assert solve_fpt(Instance(ProblemKind.EVD, 4, 0, path_graph(4))).answer is Answer.YES

    @pytest.mark.parametrize("kind, r", [(ProblemKind.EEA, 2), (ProblemKind.EED, 3), (ProblemKind.EEE, 2)])
    def test_unsupported(self, kind, r):
        with pytest.raises(ContractError):
            solve_fpt(Instance(kind, r, 1, path_graph(3)))


class TestOracleAgreement:
    @pytest.mark.parametrize("k", range(4))
    def test_2evd_on_every_small_graph(self, k):
        for graph in SWEEP_GRAPHS:
            result = solve_2evd(graph, k)
            assert result.stats.nodes_visited <= (3 ** k - 1) // 2
            assert_matches_oracle(result, Instance(ProblemKind.EVD, 2, k, graph))

    @pytest.mark.parametrize("k", range(4))
    def test_2eed_on_every_small_graph(self, k):
        for graph in SWEEP_GRAPHS:
            result = solve_2eed(graph, k)
            assert result.stats.nodes_visited <= 2 ** k - 1
            assert_matches_oracle(result, Instance(ProblemKind.EED, 2, k, graph))

    @pytest.mark.parametrize("r", [3, 4])
    @pytest.mark.parametrize("k", range(4))
    def test_revd_on_every_small_graph(self, r, k):
        for graph in SWEEP_GRAPHS:
            assert_matches_oracle(solve_revd(graph, r, k), Instance(ProblemKind.EVD, r, k, graph))

    @pytest.mark.slow
    @pytest.mark.parametrize("chunk", range(10))
    def test_2evd_seeded(self, chunk):
        for graph, k in seeded_instances(1000 + chunk, 50):
            result = solve_2evd(graph, k)
            assert result.stats.nodes_visited <= (3 ** k - 1) // 2
            assert_matches_oracle(result, Instance(ProblemKind.EVD, 2, k, graph))

    @pytest.mark.slow
    @pytest.mark.parametrize("chunk", range(10))
    def test_2eed_seeded(self, chunk):
        for graph, k in seeded_instances(2000 + chunk, 50):
            result = solve_2eed(graph, k)
            assert result.stats.nodes_visited <= 2 ** k - 1
            assert_matches_oracle(result, Instance(ProblemKind.EED, 2, k, graph))

    @pytest.mark.slow
    @pytest.mark.parametrize("r", [3, 4])
    @pytest.mark.parametrize("chunk", range(10))
    def test_revd_seeded(self, r, chunk):
        for graph, k in seeded_instances(3000 + 100 * r + chunk, 50):
            result = solve_revd(graph, r, k)
            assert not result.stats.oracle_fallback
            assert_matches_oracle(result, Instance(ProblemKind.EVD, r, k, graph))


class TestDeterminism:
    @pytest.mark.parametrize("solve", [
        lambda graph, k: solve_2evd(graph, k),
        lambda graph, k: solve_2eed(graph, k),
        lambda graph, k: solve_revd(graph, 3, k),
    ], ids=["2evd", "2eed", "revd"])
    def test_same_input_same_run(self, solve):
        for graph, k in seeded_instances(77, 30, n_max=8, k_max=3):
            first, second = solve(graph, k), solve(graph, k)
            assert first.answer is second.answer
            assert first.solution == second.solution
            assert first.stats.to_dict() == second.stats.to_dict()
