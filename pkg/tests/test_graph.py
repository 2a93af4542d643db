import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from gpstruct.errors import ContractError
from gpstruct.graph import (
    Graph,
    ball,
    ball_size_bound,
    bfs_distances,
    cartesian_product,
    complete_graph,
    components,
    crossed_grid,
    factor_ids,
    graph_power,
    grid_graph,
    growth_check,
    layering_by_axis,
    path_graph,
    product_id,
    project,
    sphere,
    star_graph,
    strong_product,
)
from gpstruct.testgen import random_product_subgraph
from oracles import all_pairs_distances, power_edges, product_edges


def test_graph_rejects_bad_input():
    with pytest.raises(ContractError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ContractError):
        Graph.from_edges(2, [(1, 1)])
    with pytest.raises(ContractError):
        Graph(2, [[1], []])
    with pytest.raises(ContractError):
        Graph(2, [[], []], coords=[(0,), (0, 1)])


def test_small_products():
    k2 = complete_graph(2)
    assert strong_product(k2, k2).m == 6
    c4 = cartesian_product(k2, k2)
    assert (c4.n, c4.m) == (4, 4) and all(c4.degree(v) == 2 for v in range(4))
    p3 = path_graph(3)
    assert strong_product(p3, p3).m == 20
    assert cartesian_product(p3, p3).m == 12


def test_identity_factor():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    k1 = complete_graph(1)
    assert strong_product(k1, g).edges() == g.edges()
    assert cartesian_product(k1, g).edges() == g.edges()


@given(graphs(max_n=5), graphs(max_n=5))
def test_products_match_adjacency_rules(a, b):
    assert set(strong_product(a, b).edges()) == product_edges(a, b, strong=True)
    assert set(cartesian_product(a, b).edges()) == product_edges(a, b, strong=False)


@given(graphs(max_n=6), graphs(max_n=6))
def test_product_counts_and_containment(a, b):
    s, c = strong_product(a, b), cartesian_product(a, b)
    assert s.n == c.n == a.n * b.n
    assert c.m == a.n * b.m + b.n * a.m
    assert s.m == a.n * b.m + b.n * a.m + 2 * a.m * b.m
    assert set(c.edges()) <= set(s.edges())


@given(graphs(max_n=5), graphs(max_n=5))
def test_strong_product_swap_is_isomorphism(a, b):
    ab, ba = strong_product(a, b), strong_product(b, a)

    def swap(v):
        x, y = factor_ids(v, (a.n, b.n))
        return product_id((y, x), (b.n, a.n))

    assert {tuple(sorted((swap(u), swap(v)))) for u, v in ab.edges()} == set(ba.edges())


def test_product_ids_round_trip():
    sizes = (3, 4, 2)
    seen = set()
    for v in range(24):
        ids = factor_ids(v, sizes)
        assert product_id(ids, sizes) == v
        seen.add(ids)
    assert len(seen) == 24
    with pytest.raises(ContractError):
        product_id((3, 0, 0), sizes)


def test_product_coords_are_factor_pairs():
    g = strong_product(path_graph(2), path_graph(3))
    assert g.coords == ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2))


def test_project():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], coords=[(0, 0), (1, 0), (1, 1)])
    proj = project(g, 0)
    assert proj.values == (0, 1) and proj.counts == {0: 1, 1: 2}
    with pytest.raises(ContractError):
        project(g, 2)
    full = strong_product(path_graph(3), path_graph(3))
    assert project(full, 1).counts == {0: 3, 1: 3, 2: 3}


def test_layering():
    full = strong_product(path_graph(3), path_graph(3))
    lay = layering_by_axis(full, 0)
    assert [len(layer) for layer in lay.layers] == [3, 3, 3]
    assert lay.is_valid(full)
    single = Graph(1, [[]], coords=[(5, 0)])
    assert layering_by_axis(single, 0).layers == ((0,),)
    bad = Graph.from_edges(2, [(0, 1)], coords=[(0,), (2,)])
    with pytest.raises(ContractError):
        layering_by_axis(bad, 0)


@pytest.mark.parametrize("seed", range(10))
def test_layering_of_random_grid_subgraphs(seed):
    g = random_product_subgraph(10, complete_graph(1), 2, random.Random(seed))
    for axis in (0, 1):
        lay = layering_by_axis(g, axis)
        assert lay.is_valid(g)
        assert all(abs(g.coords[u][axis] - g.coords[v][axis]) <= 1 for u, v in g.edges())


def test_balls():
    g = crossed_grid(7, 7)
    centre = 3 * 7 + 3
    assert len(ball(g, centre, 1)) == 9
    assert len(ball(g, centre, 2)) == 25
    assert ball(g, 0, 0) == frozenset({0})
    assert len(ball(path_graph(5), 0, 2)) == 3
    assert sphere(path_graph(5), 2, 2) == frozenset({0, 4})


@given(graphs(max_n=9))
def test_bfs_matches_floyd_warshall(g):
    d = all_pairs_distances(g)
    for v in range(g.n):
        dist = bfs_distances(g, v)
        assert dist == {u: d[v][u] for u in range(g.n) if d[v][u] != float("inf")}


def test_growth_check():
    # the centre of a 5x5 crossed grid sees all 25 vertices at radius 2, and 25 > 2^2
    rep = growth_check(crossed_grid(5, 5), 2)
    assert not rep.ok and rep.violation[1] == 2
    assert growth_check(complete_graph(1), 2).ok
    rep = growth_check(star_graph(9), 2)
    assert not rep.ok and rep.violation == (0, 2, 10)
    # an interior ball of radius 2 on a path has 5 > 2^2 vertices, but 5 <= 2^3
    assert not growth_check(path_graph(12), 2).ok
    assert growth_check(path_graph(12), 3).ok


def test_growth_check_agrees_with_bruteforce():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3])
        d = all_pairs_distances(g)
        finite = [x for row in d for x in row if x != float("inf")]
        diam = int(max(finite))
        expect = all(
            sum(1 for u in range(n) if d[v][u] <= r) <= r**1.5 for v in range(n) for r in range(2, diam + 1)
        )
        assert growth_check(g, 1.5).ok == expect


def test_ball_size_bound_examples():
    assert ball_size_bound(0, 3, 1, 2) == 27
    assert ball_size_bound(1, 2, 1, 0) == 27
    assert ball_size_bound(0, 5, 0, 3) == 1
    assert ball_size_bound(3, 9, 4, 2) == 10**3 * 9**12


@pytest.mark.parametrize("seed", range(8))
def test_ball_size_bound_on_product_subgraphs(seed):
    rng = random.Random(seed)
    h = path_graph(rng.randint(1, 4))  # pathwidth at most 1
    k = 0 if h.n == 1 else 1
    d = rng.randint(1, 2)
    g = random_product_subgraph(rng.randint(5, 25), h, d, rng)
    delta = g.max_degree()
    for r in (1, 2):
        bound = ball_size_bound(k, delta, r, d)
        for v in range(g.n):
            assert len(ball(g, v, r)) <= bound


def test_graph_power_examples():
    p4 = path_graph(4)
    assert graph_power(p4, 2).edges() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert graph_power(p4, 1).edges() == p4.edges()
    assert graph_power(p4, 3).edges() == complete_graph(4).edges()


@given(graphs(max_n=9), st.integers(1, 4))
def test_graph_power_matches_distances(g, k):
    assert set(graph_power(g, k).edges()) == power_edges(g, k)
    assert set(graph_power(g, k).edges()) <= set(graph_power(g, k + 1).edges())


def test_components_skip_removed():
    g = grid_graph(3, 3)
    comps = components(g, removed={1, 4, 7})
    assert comps == [[0, 3, 6], [2, 5, 8]]
