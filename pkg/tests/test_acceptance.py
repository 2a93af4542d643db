"""Exit criteria of the build, one test per criterion, each with its runtime budget."""

import math
import random
import subprocess
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from gpstruct.colouring import VertexOrdering, eval_colr, product_ordering, reachable_set
from gpstruct.decomposition import TreeDecomposition, exact_treewidth, heuristic_treewidth, validate_td
from gpstruct.geometry import embed_unit_disc, embedding_violation, subcube_of, unit_disc_graph
from gpstruct.graph import (
    cartesian_product,
    complete_graph,
    components,
    crossed_grid,
    cycle_graph,
    graph_power,
    grid_graph,
    path_graph,
    strong_product,
)
from gpstruct.localise import (
    LocalisingSampler,
    build_distribution,
    cor_frac_distribution,
    cor_frac_parameters,
    inclusion_bound,
    localising_violation,
    min_valid_radius,
    radius_condition,
    weighted_fragment,
)
from gpstruct.separators import layered_deletion, product_width_bound_holds
from gpstruct.shortcuts import apply_shortcuts, power_shortcut_system, validate_shortcuts
from gpstruct.testgen import (
    cartesian_clique_minor,
    random_graph,
    random_points,
    random_product_subgraph,
    shallow_minor_check,
    spider,
    star_cartesian_subdivision_witness,
    strong_star_binary_tree_witness,
)
from oracles import power_edges, product_edges, reachable_bruteforce

pytestmark = pytest.mark.acceptance


@contextmanager
def budget(seconds: float):
    start = time.perf_counter()
    yield
    took = time.perf_counter() - start
    assert took < seconds, f"took {took:.1f}s, budget {seconds}s"


def test_criterion_1_product_algebra():
    rng = random.Random(1)
    with budget(5):
        for _ in range(200):
            a = random_graph(rng.randint(1, 12), rng.random(), rng)
            b = random_graph(rng.randint(1, 12), rng.random(), rng)
            s, c = strong_product(a, b), cartesian_product(a, b)
            assert s.n == c.n == a.n * b.n
            assert c.m == a.n * b.m + b.n * a.m
            assert s.m == a.n * b.m + b.n * a.m + 2 * a.m * b.m
            if a.n * b.n <= 40:
                assert set(s.edges()) == product_edges(a, b, True)
                assert set(c.edges()) == product_edges(a, b, False)
        p3 = path_graph(3)
        assert strong_product(p3, p3).m == 20
        assert cartesian_product(p3, p3).m == 12


def test_criterion_2_exact_treewidth():
    cases = [(path_graph(n), 1) for n in range(2, 11)]
    cases += [(cycle_graph(n), 2) for n in range(3, 11)]
    cases += [(complete_graph(n), n - 1) for n in range(1, 9)]
    cases += [(grid_graph(3, 3), 3)]
    with budget(30):
        for g, want in cases:
            width, td = exact_treewidth(g)
            assert width == want
            assert validate_td(g, td).ok
            assert heuristic_treewidth(g)[0] >= width


def test_criterion_3_layered_deletion_bound():
    rng = random.Random(3)
    k2 = complete_graph(2)
    k2_td = TreeDecomposition.build([{0, 1}])
    with budget(60):
        for _ in range(20):
            g = random_product_subgraph(rng.randint(20, 60), k2, 2, rng)
            rep = layered_deletion(g, k2_td, k2)
            assert rep.d == 2 and rep.t == 1
            assert validate_td(g, rep.td).ok
            assert product_width_bound_holds(rep.td.width, 1, 2, g.n)
            assert len(rep.deleted) * rep.m <= 2 * g.n
            for comp in components(g, rep.deleted):
                for axis in range(2):
                    vals = [g.coords[v][axis] for v in comp]
                    assert max(vals) - min(vals) + 1 <= rep.m - 1


def test_criterion_4_localising_sampler():
    g = crossed_grid(15, 15)
    dist = build_distribution(3, "0.5", "0.5")
    assert dist.valid
    N = 2000
    with budget(120):
        sampler = LocalisingSampler(g, dist)
        counts = np.zeros(g.n)
        for seed in range(N):
            loc = sampler.sample(seed)
            assert localising_violation(g, loc.members, 3, loc.centres) is None
            counts[list(loc.members)] += 1
        for v in range(g.n):
            mu = min(inclusion_bound(g, dist, v), 1.0)
            sigma = math.sqrt(mu * (1 - mu) / N)
            assert counts[v] / N <= mu + 4 * sigma


def test_criterion_5_validity_frontier():
    with budget(10):
        r0 = min_valid_radius(1)
        assert radius_condition(r0, 1)
        assert not radius_condition(r0 - 1, 1)
        dist = cor_frac_distribution(r0, 1)
        assert dist.valid and abs(dist.total - 1) <= Fraction(1, 10**30)
        p, q = cor_frac_parameters(r0, 1)
        assert p * (1 + q) ** r0 > 1


def test_criterion_6_weighted_fragmentation():
    g = crossed_grid(12, 12)
    c = 3  # balls of the crossed grid are bounded by (2r+1)^2, a degree-2 polynomial
    rng = random.Random(6)
    with budget(60):
        r = min_valid_radius(c)
        gr = (2 * r + 1) ** 2
        for weights in ([1] * g.n, [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(g.n)]):
            frag = weighted_fragment(g, weights, r, gr, c, seed=0, max_draws=10000)
            wx = sum((Fraction(weights[v]) for v in frag.members), Fraction(0))
            wv = sum((Fraction(w) for w in weights), Fraction(0))
            assert r * wx * wx <= 4 * wv * wv
            assert all(len(comp) <= gr for comp in components(g, frag.members))
            assert frag.draws <= 10000


def test_criterion_7_colproduct():
    rng = random.Random(7)
    spot = 0
    with budget(120):
        done = 0
        while done < 100:
            g = random_graph(rng.randint(1, 8), rng.random(), rng)
            h = random_graph(rng.randint(1, 4), rng.random(), rng)
            if h.max_degree() > 3:
                continue
            order = list(range(g.n))
            rng.shuffle(order)
            ord_g = VertexOrdering(tuple(order))
            prod = strong_product(g, h)
            pord = product_ordering(ord_g, h)
            for r in (1, 2, 3):
                assert eval_colr(prod, pord, r) < eval_colr(g, ord_g, r) * (h.max_degree() + 2) ** r
            if spot < 10 and prod.n <= 16:
                for v in range(prod.n):
                    assert reachable_set(prod, pord, v, 2) == reachable_bruteforce(prod, pord.order, v, 2)
                spot += 1
            done += 1
        assert spot == 10


def test_criterion_8_power_shortcuts():
    rng = random.Random(8)
    with budget(20):
        for _ in range(100):
            g = random_graph(rng.randint(1, 10), rng.random() * 0.6, rng)
            k = rng.randint(2, 4)
            s = power_shortcut_system(g, k)
            assert validate_shortcuts(g, s).ok
            assert apply_shortcuts(g, s) == graph_power(g, k)
            assert set(apply_shortcuts(g, s).edges()) == power_edges(g, k)
            assert max(s.usage(g.n), default=0) <= 2 * k * g.max_degree() ** k
            assert all(len(p) - 1 <= k for p in s.paths)


def test_criterion_9_unit_disc_embedding():
    rng = random.Random(9)
    with budget(10):
        for _ in range(50):
            pts = random_points(rng.randint(1, 40), 2, 4.0, rng)
            occupancy = {}
            for p in pts:
                key = (tuple(math.floor(x) for x in p), subcube_of(p, 2))
                occupancy[key] = occupancy.get(key, 0) + 1
            k = max(occupancy.values())
            emb = embed_unit_disc(pts, k)
            assert emb.t == 4 * k
            assert embedding_violation(pts, emb) is None
            assert len(set(emb.images)) == len(pts)
            for i, j in unit_disc_graph(pts).edges():
                a, b = emb.images[i], emb.images[j]
                assert all(abs(x - y) <= 1 for x, y in zip(a[:-1], b[:-1]))
            cells = {}
            for img in emb.images:
                cells[img[:-1]] = cells.get(img[:-1], 0) + 1
                assert 0 <= img[-1] < emb.t
            assert max(cells.values()) <= emb.t
        assert embed_unit_disc([(0.0,), (0.5,), (2.0,)], 2).images == ((0, 1), (0, 2), (2, 1))


def test_criterion_10_witness_gadgets():
    with budget(10):
        for n in range(1, 7):
            assert star_cartesian_subdivision_witness(n).verdict
            assert strong_star_binary_tree_witness(n).verdict
        g = spider(4, 2)
        model = cartesian_clique_minor(g, g, 4)
        assert shallow_minor_check(model.host, 4, model.depth, model.branch_sets).ok
        bs = [list(b) for b in model.branch_sets]
        bs[0] = bs[0][:1] + [bs[0][-1]]
        bad = shallow_minor_check(model.host, 4, model.depth, bs)
        assert not bad.ok and "disconnected" in bad.failure


CLI_RUNS = [
    ["td", "exact", "tests/fixtures/p6.txt"],
    ["separate", "layered", "tests/fixtures/crossed6.json", "--h-td", "tests/fixtures/k1_td.json"],
    ["separate", "combined", "tests/fixtures/crossed6_2d.json", "--g1", "tests/fixtures/p6.txt",
     "--g2", "tests/fixtures/p6.txt", "--beta", "0.5", "--growth-c", "1", "--seed", "3"],
    ["localise", "sample", "tests/fixtures/crossed15.json", "--r", "3", "--p", "0.5", "--q", "0.5", "--seed", "11"],
    ["localise", "fragment", "tests/fixtures/crossed6.json", "--growth-c", "1", "--seed", "5"],
    ["shortcut", "power", "tests/fixtures/p6.txt", "--k", "3"],
    ["geo", "embed", "tests/fixtures/points.csv", "--k", "2"],
    ["witness", "star-strong", "--n", "5"],
]


def test_criterion_11_cli_determinism():
    from gpstruct.cli import main

    import contextlib
    import io

    def once(argv):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            assert main(argv) == 0
        return buf.getvalue().encode()

    with budget(10):
        for argv in CLI_RUNS:
            assert once(argv) == once(argv)
        first = subprocess.run(["gps", *CLI_RUNS[3]], capture_output=True, check=True).stdout
        assert first == once(CLI_RUNS[3])
