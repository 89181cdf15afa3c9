"""Graph structure, indicator functions, and segregation metrics."""

import io

import numpy as np
import pytest

from edgegame.graph import (
    DirectedGraph,
    d_indicator,
    inter_edge_count,
    s_indicator,
    segregation_measure,
    segregation_value,
    two_hop_count,
)

# Independent oracles: work from a raw edge set and the index-range
# community rule, never through the graph's incremental counters.


def oracle_d(edges, n, i, j):
    return 1 if (i, j) in edges and (i < n) != (j < n) else 0


def oracle_s(edges, n, i, j):
    return 1 if (i, j) in edges and (i < n) == (j < n) else 0


def oracle_two_hop(edges, n, i, j):
    total = 0
    for jp in range(2 * n):
        if jp in (i, j):
            continue
        total += (oracle_d(edges, n, i, jp) + oracle_d(edges, n, jp, i)) * oracle_s(
            edges, n, jp, j
        )
    return total


def random_graph(n, density, rng):
    edges = set()
    for u in range(2 * n):
        for v in range(2 * n):
            if u != v and rng.random() < density:
                edges.add((u, v))
    return edges, DirectedGraph(n, edges)


def test_d_indicator_examples():
    n = 2  # r0=0, r1=1, b0=2, b1=3
    g = DirectedGraph(n, [(0, 2)])
    assert d_indicator(g, 0, 2) == 1
    g2 = DirectedGraph(n, [(0, 1)])
    assert d_indicator(g2, 0, 1) == 0
    g3 = DirectedGraph(n)
    assert d_indicator(g3, 0, 2) == 0


def test_s_indicator_examples():
    n = 2
    g = DirectedGraph(n, [(0, 1)])
    assert s_indicator(g, 0, 1) == 1
    g2 = DirectedGraph(n, [(0, 2)])
    assert s_indicator(g2, 0, 2) == 0
    # directed: the reverse edge is absent
    assert s_indicator(g, 1, 0) == 0


def test_indicator_argument_errors():
    g = DirectedGraph(2)
    with pytest.raises(ValueError):
        d_indicator(g, 0, 4)
    with pytest.raises(ValueError):
        s_indicator(g, -1, 0)
    with pytest.raises(ValueError):
        d_indicator(g, 1, 1)


def test_inter_edge_count_examples():
    n = 2
    g = DirectedGraph(n, [(0, 2), (2, 0), (0, 1)])
    assert inter_edge_count(g) == 2
    assert inter_edge_count(DirectedGraph(n)) == 0
    complete_bipartite = [(r, b) for r in range(2) for b in range(2, 4)]
    complete_bipartite += [(b, r) for r in range(2) for b in range(2, 4)]
    assert inter_edge_count(DirectedGraph(n, complete_bipartite)) == 8


def test_segregation_examples():
    n = 2
    assert segregation_measure(DirectedGraph(n, [(0, 1), (1, 0)])) == 1.0
    complete_bipartite = [(r, b) for r in range(2) for b in range(2, 4)]
    complete_bipartite += [(b, r) for r in range(2) for b in range(2, 4)]
    assert segregation_measure(DirectedGraph(n, complete_bipartite)) == 0.0
    assert segregation_measure(DirectedGraph(n, [(0, 2), (2, 0)])) == 0.75


def test_segregation_value_empty_community():
    assert segregation_value(0, 0, 5) == 1.0
    assert segregation_value(0, 5, 0) == 1.0
    with pytest.raises(ValueError):
        segregation_value(0, -1, 3)


def test_two_hop_example_graph():
    # n=4: r1=0, r2=1, b1=4, b2=5, b4=7; b2 and b4 follow b1, r2 follows r1,
    # r1 follows b1.
    g = DirectedGraph(4, [(4, 5), (4, 7), (0, 1), (4, 0)])
    assert two_hop_count(g, 0, 5) == 1
    assert two_hop_count(g, 0, 7) == 1
    assert two_hop_count(g, 4, 1) == 1
    assert two_hop_count(g, 5, 0) == 0


def test_two_hop_empty_and_disjoint_counts():
    assert two_hop_count(DirectedGraph(3), 0, 4) == 0
    # j = 9 (blue), friends j' = 4..8 follow into j; i = 0 followed by 3 of
    # them, following 2 others: counts add to 5.
    n = 6
    edges = [(jp, 9) for jp in range(6, 11) if jp != 9]
    edges += [(jp, 9) for jp in (6, 7)]  # duplicates ignored by set semantics
    edges = set(edges)
    edges |= {(0, 6), (0, 7), (0, 8)}  # these j' follow i=0
    edges |= {(10, 0), (11, 0)}  # i follows these j'
    edges.add((11, 9))
    g = DirectedGraph(n, edges)
    assert two_hop_count(g, 0, 9) == 5


def test_two_hop_same_community_error():
    g = DirectedGraph(3)
    with pytest.raises(ValueError):
        two_hop_count(g, 0, 1)


def test_two_hop_double_counts_mutual_links():
    # j' both follows i and is followed by i: contributes 2.
    g = DirectedGraph(2, [(0, 2), (2, 0), (2, 3)])
    assert two_hop_count(g, 0, 3) == 2


def test_two_hop_matches_oracle_on_random_graphs():
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(2, 5))  # 2n <= 8
        edges, g = random_graph(n, float(rng.random()) * 0.7, rng)
        for i in range(2 * n):
            for j in range(2 * n):
                if (i < n) == (j < n):
                    continue
                assert two_hop_count(g, i, j) == oracle_two_hop(edges, n, i, j)


def test_inter_count_matches_indicator_sum():
    rng = np.random.default_rng(7)
    for _ in range(40):
        n = int(rng.integers(1, 7))  # 2n <= 12
        edges, g = random_graph(n, float(rng.random()) * 0.6, rng)
        total = sum(
            d_indicator(g, i, j)
            for i in range(2 * n)
            for j in range(2 * n)
            if i != j
        )
        assert inter_edge_count(g) == total


def test_indicators_are_exclusive():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        _, g = random_graph(n, 0.5, rng)
        for i in range(2 * n):
            for j in range(2 * n):
                if i == j:
                    continue
                assert d_indicator(g, i, j) + s_indicator(g, i, j) <= 1


def test_segregation_monotonicity_under_edge_addition():
    rng = np.random.default_rng(13)
    for _ in range(30):
        n = int(rng.integers(2, 6))
        _, g = random_graph(n, 0.3, rng)
        s0 = segregation_measure(g)
        assert 0.0 <= s0 <= 1.0
        u = int(rng.integers(0, n))
        v = int(rng.integers(n, 2 * n))
        g.add_edge(u, v)
        assert segregation_measure(g) <= s0  # new cross edge
        s1 = segregation_measure(g)
        w = int(rng.integers(0, n))
        x = (w + 1) % n
        g.add_edge(w, x)
        assert segregation_measure(g) == s1  # in-group edge changes nothing


def test_graph_validation():
    with pytest.raises(ValueError):
        DirectedGraph(0)
    g = DirectedGraph(2)
    with pytest.raises(ValueError):
        g.add_edge(1, 1)
    with pytest.raises(ValueError):
        g.add_edge(0, 4)
    assert g.add_edge(0, 1)
    assert not g.add_edge(0, 1)  # duplicate ignored
    assert g.num_edges == 1


def test_edge_cap():
    n = 2
    edges = [(u, v) for u in range(4) for v in range(4) if u != v]
    g = DirectedGraph(n, edges)
    assert g.num_edges == 2 * n * (2 * n - 1)


def test_dump_format_and_round_trip():
    g = DirectedGraph(4, [(4, 5), (0, 1), (4, 0), (4, 7)])
    text = g.dumps()
    assert text == "N=4\n0 1\n4 0\n4 5\n4 7\n"
    loaded = DirectedGraph.load(io.StringIO(text))
    assert loaded.sorted_edges() == g.sorted_edges()
    assert loaded.n_per_community == 4


def test_adjacency_round_trip():
    rng = np.random.default_rng(3)
    _, g = random_graph(3, 0.4, rng)
    back = DirectedGraph.from_adjacency(g.to_adjacency(), 3)
    assert back.sorted_edges() == g.sorted_edges()
    assert back.inter_edges == g.inter_edges
