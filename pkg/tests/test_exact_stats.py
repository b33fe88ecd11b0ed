import itertools
import math

import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import random_valid_sequence, sequences
from dyngraph_dp.exact_stats import (ALL_KINDS, COMPONENTS, DEGREE_HIST, DEGREE_LIST, EDGES,
                                     MATCHING, TRIANGLES, ExactTracker, Stat, StatKind,
                                     count_components, difference_sequence, empty_value,
                                     exact_trace, exact_value, high_degree, matching_size,
                                     maximum_matching, static_sensitivity, triangle_delta,
                                     value_range)
from dyngraph_dp.graph_stream import NOOP, DynamicGraph, InvalidUpdate, Update, UpdateSequence


def complete(n):
    return DynamicGraph.from_edges(n, itertools.combinations(range(n), 2))


def as_list(v):
    return np.asarray(v).tolist()


class TestStatKind:
    @pytest.mark.parametrize("text", ["edges", "triangles", "high-degree:3", "degree-list",
                                      "degree-hist", "matching", "components"])
    def test_parse_round_trip(self, text):
        assert str(StatKind.parse(text)) == text

    def test_high_degree_default_tau(self):
        assert StatKind.parse("high-degree") == high_degree(1)

    def test_errors(self):
        with pytest.raises(ValueError):
            StatKind.parse("diameter")
        with pytest.raises(ValueError):
            StatKind.parse("edges:2")
        with pytest.raises(ValueError):
            StatKind(Stat.EDGES, 3)


class TestExactValue:
    def test_triangle_graph(self):
        g = DynamicGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert exact_value(TRIANGLES, g) == 1
        assert exact_value(EDGES, g) == 3
        assert exact_value(COMPONENTS, g) == 1
        assert exact_value(MATCHING, g) == 1
        assert as_list(exact_value(DEGREE_LIST, g)) == [2, 2, 2]

    def test_empty_graph(self):
        g = DynamicGraph(5)
        assert exact_value(COMPONENTS, g) == 5
        assert exact_value(high_degree(1), g) == 0
        assert as_list(exact_value(DEGREE_HIST, g)) == [5, 0, 0, 0, 0]

    def test_k5(self):
        g = complete(5)
        assert exact_value(TRIANGLES, g) == oracles.triangles(5, g.edges()) == 10
        assert exact_value(MATCHING, g) == oracles.max_matching(g.edges()) == 2

    @given(sequences(max_nodes=9, max_horizon=40))
    def test_all_kinds_match_brute_force(self, s):
        for g, edges in zip(s.graphs(), oracles.replay_edges(s)):
            for kind in ALL_KINDS:
                got = exact_value(kind, g)
                want = oracles.stat_value(kind.stat.value, s.num_nodes, edges, kind.tau)
                assert as_list(got) == want, kind

    def test_histogram_sums_to_n(self):
        rng = np.random.default_rng(3)
        s = random_valid_sequence(rng, 10, 80)
        for g in s.graphs():
            assert exact_value(DEGREE_HIST, g).sum() == 10
            assert exact_value(DEGREE_LIST, g).max() < 10


class TestTriangleDelta:
    def test_path_closure(self):
        g = DynamicGraph.from_edges(3, [(0, 2), (1, 2)])
        assert triangle_delta(g, Update.insert(0, 1)) == 1

    def test_k4_delete(self):
        g = complete(4)
        # brute force: triangles containing (0,1)
        containing = sum(1 for c in range(4) if c not in (0, 1))
        assert triangle_delta(g, Update.delete(0, 1)) == -containing == -2
        assert g.edge_count == 6  # not applied

    def test_noop(self):
        assert triangle_delta(complete(4), NOOP) == 0

    def test_invalid(self):
        with pytest.raises(InvalidUpdate):
            triangle_delta(complete(3), Update.insert(0, 1))


class TestMatching:
    def test_exhaustive_small(self):
        for n in range(2, 7):
            for edges, _ in oracles.all_graphs(n):
                adj = [set() for _ in range(n)]
                for u, v in edges:
                    adj[u].add(v)
                    adj[v].add(u)
                assert matching_size(adj) == oracles.max_matching(edges), (n, sorted(edges))

    def test_random_up_to_eight(self):
        rng = np.random.default_rng(5)
        pairs8 = list(itertools.combinations(range(8), 2))
        for _ in range(3000):
            n = int(rng.integers(7, 9))
            pairs = [p for p in pairs8 if p[1] < n]
            edges = [p for p in pairs if rng.random() < rng.uniform(0.1, 0.7)]
            g = DynamicGraph.from_edges(n, edges)
            assert exact_value(MATCHING, g) == oracles.max_matching(edges)

    def test_mate_is_a_matching(self):
        g = complete(7)
        mate = maximum_matching(g.adjacency)
        for v, m in enumerate(mate):
            if m != -1:
                assert mate[m] == v and g.has_edge(v, m)

    def test_blossom_needed(self):
        # odd cycle 0-1-2-3-4 with a pendant on 0 and one on 2
        g = DynamicGraph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (2, 6)])
        assert exact_value(MATCHING, g) == 3

    def test_tracker_incremental_matches_recompute(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            s = random_valid_sequence(rng, int(rng.integers(2, 10)), int(rng.integers(1, 60)))
            tracker = ExactTracker(MATCHING, s.num_nodes)
            for upd, edges in zip(s.updates, oracles.replay_edges(s)):
                assert tracker.step(upd) == oracles.max_matching(edges)


def test_components_union_find():
    rng = np.random.default_rng(2)
    s = random_valid_sequence(rng, 12, 200)
    for g, edges in zip(s.graphs(), oracles.replay_edges(s)):
        assert count_components(g.adjacency) == oracles.components(12, edges)


class TestDifferenceSequence:
    def test_edges(self):
        s = UpdateSequence(2, (Update.insert(0, 1), Update.delete(0, 1)))
        assert difference_sequence(EDGES, s) == [1, -1]

    def test_degree_list(self):
        s = UpdateSequence(3, (Update.insert(0, 1),))
        assert as_list(difference_sequence(DEGREE_LIST, s)[0]) == [1, 1, 0]

    @given(sequences(max_nodes=8, max_horizon=40))
    def test_prefix_sums_reconstruct(self, s):
        for kind in ALL_KINDS:
            acc = empty_value(kind, s.num_nodes)
            for delta, value in zip(difference_sequence(kind, s), exact_trace(kind, s)):
                acc = acc + delta
                assert as_list(acc) == as_list(value)

    def test_figure_prefix(self):
        from dyngraph_dp.reductions import figure_instance, submatrix_to_triangles
        s = submatrix_to_triangles(figure_instance()).seq
        acc = 0
        for delta, g in zip(difference_sequence(TRIANGLES, s), s.graphs()):
            acc += delta
            assert acc == oracles.triangles(s.num_nodes, g.edges())


class TestSensitivity:
    def test_table(self):
        assert static_sensitivity(EDGES) == (1, 1)
        assert static_sensitivity(MATCHING) == (1, 1)
        assert static_sensitivity(COMPONENTS) == (1, 1)
        assert static_sensitivity(TRIANGLES, num_nodes=10) == (8, 8)
        assert static_sensitivity(TRIANGLES, degree_bound=4) == (3, 3)
        assert static_sensitivity(DEGREE_LIST) == (2, math.sqrt(2))
        assert static_sensitivity(high_degree(2)) == (2, 2)
        assert static_sensitivity(DEGREE_HIST) == (4, 2 * math.sqrt(2))
        with pytest.raises(ValueError):
            static_sensitivity(TRIANGLES)

    @pytest.mark.parametrize("kind", ALL_KINDS + (high_degree(3),), ids=str)
    def test_exhaustive_flips(self, kind):
        """Max observed one-edge change over all graphs on N <= 5 nodes."""
        for n in range(2, 6):
            worst1 = worst2 = 0.0
            for edges, pairs in oracles.all_graphs(n):
                base = np.asarray(oracles.stat_value(kind.stat.value, n, edges, kind.tau), dtype=float)
                for p in pairs:
                    flipped = edges ^ {p}
                    other = np.asarray(oracles.stat_value(kind.stat.value, n, flipped, kind.tau), dtype=float)
                    diff = np.atleast_1d(other - base)
                    worst1 = max(worst1, np.abs(diff).sum())
                    worst2 = max(worst2, np.sqrt((diff ** 2).sum()))
            l1, l2 = static_sensitivity(kind, num_nodes=n)
            assert worst1 <= l1 + 1e-12 and worst2 <= l2 + 1e-12
            if n == 5:
                # the stated constants are attained, not just upper bounds
                assert worst1 == pytest.approx(l1) and worst2 == pytest.approx(l2)

    def test_triangle_degree_bound_respected(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            s = random_valid_sequence(rng, 10, 60, max_degree=3)
            for delta in difference_sequence(TRIANGLES, s):
                assert abs(delta) <= static_sensitivity(TRIANGLES, degree_bound=3)[0]


def test_additivity_over_disjoint_union():
    rng = np.random.default_rng(8)
    for _ in range(100):
        parts = [random_valid_sequence(rng, int(rng.integers(2, 6)), 20) for _ in range(3)]
        finals = [list(s.graphs())[-1].edges() for s in parts]
        offset, union = 0, []
        for s, edges in zip(parts, finals):
            union += [(u + offset, v + offset) for u, v in edges]
            offset += s.num_nodes
        g = DynamicGraph.from_edges(offset, union)
        for kind in (COMPONENTS, MATCHING, TRIANGLES, EDGES):
            total = sum(exact_value(kind, DynamicGraph.from_edges(s.num_nodes, e)) for s, e in zip(parts, finals))
            assert exact_value(kind, g) == total


def test_value_range_contains_values():
    rng = np.random.default_rng(1)
    s = random_valid_sequence(rng, 7, 100)
    for kind in ALL_KINDS:
        lo, hi = value_range(kind, 7)
        for v in exact_trace(kind, s):
            assert lo <= np.min(v) and np.max(v) <= hi
