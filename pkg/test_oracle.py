#!/usr/bin/env python3
"""Tests for verification and the exhaustive oracle"""

import math

import pytest

from errors import CapacityError, ContractError
from graph_core import complete_graph, cycle_graph, disjoint_union, empty_graph, path_graph, random_graph
from oracle import (Instance, ProblemKind, Solution, check_solution, enumeration_size, is_feasible,
                    iter_candidates, min_vertex_cover_size, minimum_solution_size, modification_pool,
                    solve_exhaustive, verify)


class TestInstance:
    def test_rejects_bad_parameters(self):
        with pytest.raises(ContractError):
            Instance(ProblemKind.EVD, 0, 1, path_graph(3))
        with pytest.raises(ContractError):
            Instance(ProblemKind.EVD, 2, -1, path_graph(3))

    def test_kind_from_string(self):
        assert Instance("EEA", 2, 1, path_graph(3)).kind is ProblemKind.EEA


class TestVerify:
    def test_examples(self):
        assert verify(Instance(ProblemKind.EVD, 2, 1, path_graph(3)), Solution.of_vertices([1]))
        assert verify(Instance(ProblemKind.EED, 2, 0, complete_graph(3)), Solution())
        assert not verify(Instance(ProblemKind.EVD, 2, 0, path_graph(3)), Solution())

    def test_over_budget(self):
        verdict = check_solution(Instance(ProblemKind.EVD, 2, 0, path_graph(3)), Solution.of_vertices([1]))
        assert not verdict.accepted
        assert "exceeds budget" in verdict.reason

    def test_kind_mismatch(self):
        with pytest.raises(ContractError):
            verify(Instance(ProblemKind.EVD, 2, 1, path_graph(3)), Solution.of_edits(deletions=[(0, 1)]))
        with pytest.raises(ContractError):
            verify(Instance(ProblemKind.EED, 2, 1, path_graph(3)), Solution.of_edits(additions=[(0, 2)]))

    def test_structural_witness(self):
        verdict = check_solution(Instance(ProblemKind.EVD, 2, 1, path_graph(3)),
                                 Solution.of_vertices([1]), with_count=True)
        assert verdict.witness == "uniform cluster profile {1,1}"
        assert verdict.distinct_count == 1

    def test_non_uniform_witness(self):
        verdict = check_solution(Instance(ProblemKind.EED, 2, 0, disjoint_union(complete_graph(3),
                                                                             complete_graph(2))), Solution())
        assert not verdict.accepted
        assert "not uniform" in verdict.reason

    def test_count_for_larger_r(self):
        verdict = check_solution(Instance(ProblemKind.EVD, 3, 0, path_graph(4)), Solution())
        assert not verdict.accepted
        assert verdict.distinct_count == 4
        assert verdict.reason == "4 distinct eigenvalues > r=3"

    def test_edit_solution(self):
        instance = Instance(ProblemKind.EEE, 2, 2, path_graph(3))
        assert verify(instance, Solution.of_edits(additions=[(0, 2)]))
        assert verify(instance, Solution.of_edits(deletions=[(0, 1), (1, 2)]))


class TestExhaustive:
    def test_p3_vertex_deletion(self):
        assert solve_exhaustive(Instance(ProblemKind.EVD, 2, 1, path_graph(3))) == Solution.of_vertices([0])

    def test_single_addition(self):
        graph = disjoint_union(empty_graph(2), complete_graph(2))
        solution = solve_exhaustive(Instance(ProblemKind.EEA, 2, 1, graph))
        assert solution == Solution.of_edits(additions=[(0, 1)])

    def test_split_k4(self):
        graph = disjoint_union(complete_graph(4), complete_graph(2))
        solution = solve_exhaustive(Instance(ProblemKind.EED, 2, 4, graph))
        assert solution.size == 4
        assert solution == Solution.of_edits(deletions=[(0, 1), (0, 2), (1, 3), (2, 3)])
        assert solve_exhaustive(Instance(ProblemKind.EED, 2, 3, graph)) is None

    def test_no_solution(self):
        assert solve_exhaustive(Instance(ProblemKind.EVD, 2, 0, path_graph(3))) is None

    def test_candidate_order(self):
        candidates = list(iter_candidates(Instance(ProblemKind.EVD, 2, 2, path_graph(3))))
        assert [sorted(c.vertices) for c in candidates] == [
            [], [0], [1], [2], [0, 1], [0, 2], [1, 2]]

    def test_edit_pool_is_all_pairs(self):
        assert len(modification_pool(Instance(ProblemKind.EEE, 2, 1, path_graph(4)))) == 6
        assert modification_pool(Instance(ProblemKind.EEA, 2, 1, path_graph(3))) == [(0, 2)]

    def test_capacity_guard(self):
        instance = Instance(ProblemKind.EEE, 2, 3, complete_graph(6))
        assert enumeration_size(15, 3) == 455
        assert not is_feasible(instance, max_subsets=10)
        with pytest.raises(CapacityError) as excinfo:
            solve_exhaustive(instance, max_subsets=10)
        assert excinfo.value.pool_size == 15

    def test_layer_uses_middle_binomial(self):
        assert enumeration_size(7, 4) == 35
        assert enumeration_size(4, 9) == 6

    def test_layer_is_pool_choose_k_up_to_half(self):
        for pool in range(0, 30):
            for k in range(pool // 2 + 1):
                assert enumeration_size(pool, k) == math.comb(pool, k)

    def test_budget_past_half_pool_is_refused_by_widest_layer(self):
        # C(36, 30) fits under the limit but the size-18 layer would still be enumerated
        instance = Instance(ProblemKind.EEA, 2, 30, empty_graph(9))
        assert math.comb(36, 30) <= 10_000_000
        assert enumeration_size(36, 30) == math.comb(36, 18)
        assert not is_feasible(instance)
        with pytest.raises(CapacityError) as excinfo:
            solve_exhaustive(instance)
        assert excinfo.value.pool_size == 36

    def test_r1_is_vertex_cover(self, rng):
        for _ in range(25):
            graph = random_graph(rng.randint(2, 7), 0.5, rng=rng)
            instance = Instance(ProblemKind.EVD, 1, graph.n, graph)
            assert minimum_solution_size(instance) == min_vertex_cover_size(graph)

    def test_cycle_edit_distance(self):
        # an odd vertex count leaves only singletons
        size = minimum_solution_size(Instance(ProblemKind.EED, 2, 5, cycle_graph(5)))
        assert size == 5


class TestMonotonicity:
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_yes_stays_yes_with_larger_budget(self, kind, rng):
        for _ in range(30):
            graph = random_graph(rng.randint(2, 5), rng.random(), rng=rng)
            r = rng.choice([2, 3]) if kind is ProblemKind.EVD else 2
            k = rng.randint(0, 2)
            smaller = minimum_solution_size(Instance(kind, r, k, graph))
            larger = minimum_solution_size(Instance(kind, r, k + 1, graph))
            if smaller is not None:
                assert larger == smaller
            elif larger is not None:
                assert larger == k + 1
