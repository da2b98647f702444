import math
import random

import pytest

from modroute import Graph, PathCache, dijkstra, load_edge_list, path_weight, yen_k_shortest

from _fixtures import eight_node_graph
from _oracles import enumerate_simple_paths, floyd_warshall, random_digraph


class TestDijkstra:
    def test_fixture_distances(self):
        g = eight_node_graph()
        dist = dijkstra(g, 0)
        assert dist[6][0] == 4.0
        assert dist[0] == (0.0, None)

    def test_unreachable_is_infinite(self):
        g = load_edge_list("0 1 1.0\n2 3 1.0")
        dist = dijkstra(g, 0)
        assert dist[3] == (math.inf, None)

    def test_predecessors_reconstruct_shortest_path(self):
        g = eight_node_graph()
        dist = dijkstra(g, 0)
        node, path = 6, [6]
        while dist[node][1] is not None:
            node = dist[node][1]
            path.append(node)
        path.reverse()
        assert path_weight(g, path) == dist[6][0]

    def test_matches_floyd_warshall_on_random_graphs(self):
        rng = random.Random(11)
        for _ in range(30):
            m, edges = random_digraph(rng)
            if not edges:
                continue
            g = Graph(m, edges)
            expected = floyd_warshall(g)
            for src in range(m):
                got = dijkstra(g, src)
                assert [got[v][0] for v in range(m)] == expected[src]

    def test_bad_source_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            dijkstra(eight_node_graph(), 99)


class TestYen:
    def test_fixture_top3_to_goal(self):
        ps = yen_k_shortest(eight_node_graph(), 0, 6, 3)
        assert [p.total_weight for p in ps.paths] == [4.0, 5.0, 5.0]
        assert [p.nodes for p in ps.paths] == [(0, 4, 5, 6), (0, 2, 5, 6), (0, 3, 5, 6)]

    def test_fixture_top3_between_agents(self):
        ps = yen_k_shortest(eight_node_graph(), 0, 1, 3)
        assert [p.nodes for p in ps.paths] == [(0, 4, 1), (0, 2, 1), (0, 3, 1)]
        assert [p.total_weight for p in ps.paths] == [2.0, 3.0, 3.0]

    def test_source_equals_destination(self):
        ps = yen_k_shortest(eight_node_graph(), 5, 5, 4)
        assert len(ps.paths) == 1
        assert ps.paths[0].nodes == (5,) and ps.paths[0].total_weight == 0.0

    def test_unreachable_destination_gives_empty_set(self):
        g = load_edge_list("0 1 1.0\n2 3 1.0")
        assert yen_k_shortest(g, 0, 3, 3).paths == ()

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError, match="k must be"):
            yen_k_shortest(eight_node_graph(), 0, 6, 0)

    def test_first_path_weight_equals_dijkstra_distance(self):
        rng = random.Random(23)
        for _ in range(25):
            m, edges = random_digraph(rng)
            if not edges:
                continue
            g = Graph(m, edges)
            src, dst = rng.sample(range(m), 2)
            ps = yen_k_shortest(g, src, dst, 1)
            expected = dijkstra(g, src)[dst][0]
            if ps.paths:
                assert ps.paths[0].total_weight == expected
            else:
                assert expected == math.inf

    def test_matches_enumeration_on_random_graphs(self):
        rng = random.Random(37)
        for _ in range(60):
            m, edges = random_digraph(rng)
            if not edges:
                continue
            g = Graph(m, edges)
            src, dst = rng.sample(range(m), 2)
            k = rng.randint(1, 5)
            got = yen_k_shortest(g, src, dst, k)
            expected = enumerate_simple_paths(g, src, dst)[:k]
            assert [(p.total_weight, p.nodes) for p in got.paths] == expected

    def test_outputs_are_loopless_and_sorted(self):
        rng = random.Random(41)
        for _ in range(25):
            m, edges = random_digraph(rng)
            if not edges:
                continue
            g = Graph(m, edges)
            src, dst = rng.sample(range(m), 2)
            ps = yen_k_shortest(g, src, dst, 4)
            keys = [(p.total_weight, p.nodes) for p in ps.paths]
            assert keys == sorted(keys)
            for p in ps.paths:
                assert len(set(p.nodes)) == len(p.nodes)
                assert path_weight(g, p.nodes) == p.total_weight


class TestPathWeight:
    def test_fixture_values(self):
        g = eight_node_graph()
        assert path_weight(g, (0, 4, 1)) == 2.0
        assert path_weight(g, (5,)) == 0.0

    def test_non_adjacent_pair_rejected(self):
        with pytest.raises(ValueError, match="no edge"):
            path_weight(eight_node_graph(), (0, 6))


class TestPathCache:
    def test_cached_results_match_direct_calls(self):
        g = eight_node_graph()
        cache = PathCache(g)
        assert cache.distance(0, 6) == 4.0
        assert cache.k_shortest(0, 6, 3) is cache.k_shortest(0, 6, 3)
        assert cache.k_shortest(0, 6, 3) == yen_k_shortest(g, 0, 6, 3)
        direct = dijkstra(g, 0)
        assert cache.distances(0) == [direct[v][0] for v in range(g.node_count)]
