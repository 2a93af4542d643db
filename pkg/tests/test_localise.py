import math
import random
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from gpstruct.errors import ContractError, StatisticalFailure
from gpstruct.graph import Graph, complete_graph, crossed_grid, cycle_graph, empty_graph, path_graph
from gpstruct.localise import (
    LocalisingSampler,
    build_distribution,
    cor_frac_distribution,
    cor_frac_parameters,
    inclusion_bound,
    localising_violation,
    min_valid_radius,
    radius_condition,
    sample_localising,
    weight_bound_holds,
    weighted_fragment,
)
from gpstruct.testgen import random_connected_graph
from oracles import is_localising_bruteforce, min_valid_radius_scan

probs = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50)


def _fraction_recursion(r, p, q):
    f = [Fraction(0)] * (r + 1)
    f[r] = p
    tail = p
    for s in range(r - 1, -1, -1):
        f[s] = min(q * tail, 1 - tail)
        tail += f[s]
    return f, tail


def test_two_term_examples():
    d = build_distribution(1, "0.9", "0.9")
    assert d.f == (Decimal("0.1"), Decimal("0.9")) and d.valid
    d = build_distribution(1, "0.4", "0.5")
    # q p = 0.2 < 1 - p = 0.6, so the mass falls short
    assert d.f == (Decimal("0.20"), Decimal("0.4")) and not d.valid


@given(st.integers(1, 12), probs, probs)
def test_distribution_matches_exact_recursion(r, p, q):
    d = build_distribution(r, p, q)
    f, total = _fraction_recursion(r, p, q)
    assert d.f[r] == d.p
    for got, want in zip(d.f, f):
        assert abs(Fraction(got) - want) < Fraction(1, 10**40)
        assert 0 <= got <= 1
    assert d.total <= 1 + Decimal("1e-50")
    assert d.valid == (total == 1)


def test_distribution_rejects_bad_parameters():
    for p, q in [(0, 0.5), (1, 0.5), (0.5, 0), (0.5, 1.5)]:
        with pytest.raises(ContractError):
            build_distribution(3, p, q)
    with pytest.raises(ContractError):
        build_distribution(0, 0.5, 0.5)


def test_radius_threshold_for_c1():
    r0 = min_valid_radius(1)
    p, q = cor_frac_parameters(r0, 1)
    assert p * (1 + q) ** r0 > 1
    d = build_distribution(r0, p, q)
    assert d.valid and abs(d.total - 1) <= Decimal("1e-30")
    assert not radius_condition(r0 - 1, 1)
    assert radius_condition(r0 + 1, 1)


@pytest.mark.parametrize("c", [1, 2])
def test_radius_threshold_matches_float_scan(c):
    fails = min_valid_radius_scan(c, 3000)
    assert min_valid_radius(c) == max(fails) + 1


def test_condition_is_not_monotone_for_tiny_radii():
    # why the threshold is the last failure plus one rather than the first success
    assert radius_condition(2, 1) and not radius_condition(3, 1)
    assert min_valid_radius(1) > 3


def test_cor_frac_distribution_valid_from_threshold():
    r0 = min_valid_radius(1)
    for r in range(r0, r0 + 40):
        assert cor_frac_distribution(r, 1).valid


def test_sampler_requires_valid_distribution():
    with pytest.raises(ContractError):
        LocalisingSampler(path_graph(3), build_distribution(3, "0.1", "0.1"))


VALID = build_distribution(3, "0.5", "0.5")


@settings(max_examples=60)
@given(graphs(max_n=10), st.integers(0, 2**32 - 1))
def test_samples_are_localising(g, seed):
    out = sample_localising(g, VALID, seed)
    assert localising_violation(g, out.members, 3, out.centres) is None
    assert is_localising_bruteforce(g, out.members, 3)


def test_sampler_follows_first_claiming_ball():
    g = path_graph(7)
    s = LocalisingSampler(g, VALID)
    out = s.from_radii([3, 0, 0, 0, 0, 0, 0])
    # vertex 0 claims 0..3 and cuts its sphere {3}; 4..6 each claim themselves at radius 0
    assert out.members == frozenset({3, 4, 5, 6})
    assert out.centres == {(0, 1, 2): 0}


def test_sampler_is_deterministic():
    g = crossed_grid(6, 6)
    a = LocalisingSampler(g, VALID).sample(17)
    b = LocalisingSampler(g, VALID).sample(17)
    assert a == b


def test_radius_draws_follow_distribution():
    s = LocalisingSampler(empty_graph(20000), VALID)
    radii = s.draw_radii(np.random.default_rng(0))
    freq = np.bincount(radii, minlength=4) / len(radii)
    for got, want in zip(freq, VALID.float_probabilities()):
        assert abs(got - want) < 4 * math.sqrt(want * (1 - want) / len(radii)) + 1e-12


def test_localising_violation_detects_bad_sets():
    g = path_graph(9)
    assert localising_violation(g, set(), 3) is not None
    assert localising_violation(g, {3, 7}, 3) is None
    assert localising_violation(g, {4}, 3) is None  # halves of 4 fit around 1 and 6
    assert localising_violation(g, {6}, 3) is not None
    assert localising_violation(g, {3, 7}, 3, {(0, 1, 2): 6}) is not None


def test_inclusion_bound_uses_sphere():
    g = crossed_grid(15, 15)
    centre = 7 * 15 + 7
    assert inclusion_bound(g, VALID, centre) == pytest.approx(0.5 * 24 + 0.5)
    assert inclusion_bound(g, VALID, 0) == pytest.approx(0.5 * 7 + 0.5)


def test_weight_bound_is_exact():
    # 2 / sqrt(4) = 1, so w(X) = w(V) is on the boundary
    assert weight_bound_holds(5, 5, 4)
    assert not weight_bound_holds(Fraction(5) + Fraction(1, 10**30), 5, 4)
    assert weight_bound_holds(0, 0, 100)


R3 = None


def _r3():
    global R3
    if R3 is None:
        R3 = min_valid_radius(3)
    return R3


def test_weighted_fragment_unit_weights():
    g = crossed_grid(12, 12)
    r = _r3()
    frag = weighted_fragment(g, [1] * g.n, r, r**3, 3)
    assert r * frag.weight**2 <= 4 * g.n**2
    assert frag.largest_component <= r**3
    assert is_localising_bruteforce(g, frag.members, r)


def test_weighted_fragment_zero_weights_and_single_vertex():
    r = _r3()
    frag = weighted_fragment(crossed_grid(4, 4), [0] * 16, r, r**3, 3)
    assert frag.weight == 0 and frag.draws == 1
    frag = weighted_fragment(complete_graph(1), [1], r, r**3, 3)
    assert frag.members == frozenset()


def test_weighted_fragment_preconditions():
    g = cycle_graph(5)
    r = _r3()
    with pytest.raises(ContractError):
        weighted_fragment(g, [1] * 5, r - 1, r**3, 3)
    with pytest.raises(ContractError):
        weighted_fragment(g, [1] * 5, r, 4, 3)
    with pytest.raises(ContractError):
        weighted_fragment(g, [1] * 4, r, r**3, 3)
    with pytest.raises(ContractError):
        weighted_fragment(g, [1, 1, 1, 1, -1], r, r**3, 3)


def test_weighted_fragment_draw_cap(monkeypatch):
    import gpstruct.localise as loc

    monkeypatch.setattr(loc, "weight_bound_holds", lambda *a: False)
    r = min_valid_radius(1)
    with pytest.raises(StatisticalFailure, match="7 draws"):
        weighted_fragment(path_graph(5), [1] * 5, r, r**2, 1, max_draws=7)


def test_weighted_fragment_random_weights():
    rng = random.Random(4)
    r = min_valid_radius(1)
    for seed in range(5):
        g = random_connected_graph(20, 0.1, rng)
        w = [Fraction(rng.randint(0, 9), rng.randint(1, 5)) for _ in range(g.n)]
        frag = weighted_fragment(g, w, r, r**2 * 10, 1, seed=seed)
        assert weight_bound_holds(frag.weight, sum(w), r)
        assert is_localising_bruteforce(g, frag.members, r)


def test_disconnected_graph_sample():
    g = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    out = sample_localising(g, VALID, 3)
    assert is_localising_bruteforce(g, out.members, 3)
