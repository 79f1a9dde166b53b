"""Graph container, degree/component measures, betweenness, edge CSV."""
import numpy as np
import pytest

import oracles
from proxnet.graph import (Graph, alive_count, average_degree, betweenness,
                           components, degree_distribution, degrees, load_edges,
                           save_edges)


def _coords(n):
    # generic positions; geometry is irrelevant to these tests
    rng = np.random.default_rng(n)
    return rng.uniform(0, 10, size=(n, 2))


def _random_graph(rng, n):
    p = rng.uniform(2.0, 4.0) / n
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(_coords(n), np.array(edges, dtype=np.int64).reshape(-1, 2))


def test_from_edges_validation():
    coords = _coords(4)
    with pytest.raises(ValueError):
        Graph.from_edges(coords, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(coords, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(coords, [(0, 4)])
    with pytest.raises(ValueError):
        Graph.from_edges(np.zeros((0, 2)), [])


def test_adjacency_and_edges_sorted():
    g = Graph.from_edges(_coords(5), [(3, 1), (0, 3), (2, 0), (4, 0)])
    assert g.edges().tolist() == [[0, 2], [0, 3], [0, 4], [1, 3]]
    assert g.neighbors(0).tolist() == [2, 3, 4]
    assert g.neighbors(3).tolist() == [0, 1]
    assert g.edge_total == 4


def test_degrees_and_average_on_cycle():
    g = Graph.from_edges(_coords(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert degrees(g).tolist() == [2, 2, 2, 2]
    assert degree_distribution(g) == {2: 4}
    assert average_degree(g) == 2.0


def test_alive_mask_restricts_measures():
    g = Graph.from_edges(_coords(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    h = g.with_alive([True, True, True, False])
    assert alive_count(h) == 3
    assert degrees(h).tolist() == [1, 2, 1, 0]
    assert average_degree(h) == pytest.approx(4 / 3)
    # the original graph is untouched
    assert degrees(g).tolist() == [2, 2, 2, 2]


def test_components_ordering():
    # sizes 3, 2, 2, 1: equal sizes ordered by smallest member id
    g = Graph.from_edges(_coords(8), [(5, 6), (6, 7), (1, 2), (0, 3)])
    comps = components(g)
    assert comps == [{5, 6, 7}, {0, 3}, {1, 2}, {4}]


def test_components_respect_alive():
    g = Graph.from_edges(_coords(5), [(0, 1), (1, 2), (2, 3), (3, 4)])
    comps = components(g.with_alive([True, True, False, True, True]))
    assert comps == [{0, 1}, {3, 4}]


def test_betweenness_path():
    # path 0-1-2: the middle node carries the single 0..2 pair
    g = Graph.from_edges(_coords(3), [(0, 1), (1, 2)])
    assert betweenness(g).tolist() == [0.0, 1.0, 0.0]


def test_betweenness_star():
    # star: hub carries every leaf pair, C(5,2) = 10 with 5 leaves
    g = Graph.from_edges(_coords(6), [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])
    b = betweenness(g)
    assert b[0] == 10.0
    assert (b[1:] == 0.0).all()


def test_betweenness_degree_one_is_zero():
    rng = np.random.default_rng(0)
    for _ in range(10):
        g = _random_graph(rng, 25)
        b = betweenness(g)
        deg = degrees(g)
        assert (b[deg <= 1] == 0.0).all()


def test_betweenness_square_with_diagonal():
    # 4-cycle plus one diagonal: both 1-3 shortest paths have length 2,
    # splitting the pair between nodes 0 and 2
    g = Graph.from_edges(_coords(4), [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    b = betweenness(g)
    assert b.tolist() == [0.5, 0.0, 0.5, 0.0]


def test_betweenness_matches_path_enumeration():
    rng = np.random.default_rng(42)
    for trial in range(15):
        n = int(rng.integers(8, 31))
        g = _random_graph(rng, n)
        want = oracles.betweenness_paths(n, [tuple(e) for e in g.edges()])
        got = betweenness(g)
        assert np.allclose(got, want, atol=1e-9)


def test_betweenness_with_dead_nodes_matches_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(10, 25))
        g = _random_graph(rng, n)
        alive = rng.random(n) > 0.3
        got = betweenness(g.with_alive(alive))
        want = oracles.betweenness_paths(n, [tuple(e) for e in g.edges()], alive)
        assert np.allclose(got, want, atol=1e-9)
        assert (got[~alive] == 0.0).all()


def test_edge_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    g = _random_graph(rng, 20)
    path = tmp_path / "edges.csv"
    save_edges(g, path)
    back = load_edges(path)
    assert np.array_equal(back, g.edges())


def test_edge_csv_errors(tmp_path):
    cases = [
        ("a,b\n0,1\n", "line 1"),
        ("u,v\n0\n", "line 2"),
        ("u,v\n1,0\n", "line 2"),
        ("u,v\n0,x\n", "line 2"),
    ]
    for text, needle in cases:
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(ValueError, match=needle):
            load_edges(path)
