"""Balanced separators for subgraphs of graph products."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .decomposition import (
    DEFAULT_TW_CAP,
    Separation,
    TreeDecomposition,
    balance_limit,
    exact_cap,
    exact_treewidth,
    heuristic_treewidth,
    separator_from_td,
    validate_td,
)
from .errors import ContractError
from .graph import Graph, bfs_distances, components, layering_by_axis
from .localise import (
    DEFAULT_MAX_DRAWS,
    cor_frac_distribution,
    min_valid_radius,
    weight_bound_holds,
    weighted_fragment,
)


def layer_modulus(n: int, d: int, t: int) -> int:
    """``ceil((d n / (t+1))^(1/(d+1)))`` computed exactly."""
    if n <= 0:
        return 1
    target = Fraction(d * n, t + 1)
    m = max(1, int(math.floor(float(target) ** (1.0 / (d + 1)))))
    while m > 1 and (m - 1) ** (d + 1) >= target:
        m -= 1
    while m ** (d + 1) < target:
        m += 1
    return m


def product_width_bound_holds(width: int, t: int, d: int, n: int) -> bool:
    """Exact test of ``width <= 2 (t+1)^(1/(d+1)) (d n)^(d/(d+1)) - 1``."""
    return (width + 1) ** (d + 1) <= 2 ** (d + 1) * (t + 1) * (d * n) ** d


def product_width_bound(t: int, d: int, n: int) -> float:
    return 2 * (t + 1) ** (1 / (d + 1)) * (d * n) ** (d / (d + 1)) - 1


@dataclass
class LayeredDeletionReport:
    m: int
    residues: tuple[int, ...]
    deleted: frozenset
    components: list[list[int]]
    td: TreeDecomposition
    t: int
    d: int
    n: int
    class_sizes: list[list[int]] = field(default_factory=list)
    windows: list[list[tuple[int, int]]] = field(default_factory=list)

    @property
    def width(self) -> int:
        return self.td.width

    def bounds(self) -> dict:
        d, n, m = self.d, self.n, self.m
        chosen = [sizes[a] for sizes, a in zip(self.class_sizes, self.residues)]
        spans = [hi - lo + 1 for win in self.windows for lo, hi in win]
        return {
            "residue_class_size": {
                "lhs": max(chosen, default=0),
                "rhs": n / m,
                "holds": all(c * m <= n for c in chosen),
            },
            "deleted_size": {
                "lhs": len(self.deleted),
                "rhs": d * n / m,
                "holds": len(self.deleted) * m <= d * n,
            },
            "component_window": {
                "lhs": max(spans, default=0),
                "rhs": m - 1,
                "holds": all(s <= m - 1 for s in spans),
            },
            "treewidth": {
                "lhs": self.width,
                "rhs": product_width_bound(self.t, d, n) if n else 0.0,
                "holds": n == 0 or product_width_bound_holds(self.width, self.t, d, n),
            },
        }

    def to_obj(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "d": self.d,
            "n": self.n,
            "residues": list(self.residues),
            "deleted": sorted(self.deleted),
            "components": self.components,
            "td": self.td.to_obj(),
            "bounds": self.bounds(),
        }


def _check_product_coords(g: Graph, h: Graph | None, h_td: TreeDecomposition) -> set:
    if g.coords is None:
        raise ContractError("graph carries no coordinates")
    if g.n and (g.arity or 0) < 2:
        raise ContractError("coords must be (z_1, ..., z_d, h) with d >= 1")
    if len(set(g.coords)) != g.n:
        raise ContractError("coordinates are not distinct, so g is not a subgraph of the product")
    h_vertices = set().union(*h_td.bags) if h_td.bags else set()
    for v, c in enumerate(g.coords):
        if c[-1] not in h_vertices:
            raise ContractError(f"vertex {v} has H-coordinate {c[-1]} missing from every bag")
    if h is not None:
        check = validate_td(h, h_td)
        if not check:
            raise ContractError(f"H decomposition invalid: {check.axiom}: {check.detail}")
        for u, v in g.edges():
            a, b = g.coords[u][-1], g.coords[v][-1]
            if a != b and not h.has_edge(a, b):
                raise ContractError(f"edge ({u}, {v}) maps to non-adjacent H vertices {a}, {b}")
    return h_vertices


def layered_deletion(g: Graph, h_td: TreeDecomposition, h: Graph | None = None) -> LayeredDeletionReport:
    """Delete one residue class of layers per grid axis and decompose what remains.

    ``g`` is a subgraph of ``Z^d ⊠ H`` with coords ``(z_1, ..., z_d, h)``.
    Each remaining component spans fewer than ``m`` consecutive layers on
    every axis, so it lives in ``Q^d ⊠ H`` for a path ``Q`` on ``m-1``
    vertices; its decomposition copies ``h_td`` with every ``H``-vertex
    replaced by the component's vertices above it.  The deleted set is added
    to every bag.
    """
    t = h_td.width
    if g.n == 0:
        return LayeredDeletionReport(1, (), frozenset(), [], TreeDecomposition((), (), -1), t, 0, 0)
    _check_product_coords(g, h, h_td)
    d = g.arity - 1
    n = g.n
    if t < 0:
        raise ContractError("H decomposition is empty")
    m = layer_modulus(n, d, t)
    layerings = [layering_by_axis(g, i) for i in range(d)]
    residues = []
    class_sizes = []
    deleted: set[int] = set()
    for lay in layerings:
        sizes = [0] * m
        for j, layer in enumerate(lay.layers):
            sizes[j % m] += len(layer)
        alpha = min(range(m), key=lambda a: (sizes[a], a))
        residues.append(alpha)
        class_sizes.append(sizes)
        deleted.update(v for v in range(n) if lay.index[v] % m == alpha)

    comps = components(g, deleted)
    windows = []
    for comp in comps:
        win = []
        for lay in layerings:
            idx = [lay.index[v] for v in comp]
            win.append((min(idx), max(idx)))
        windows.append(win)

    base = sorted(deleted)
    bags: list[frozenset] = []
    edges: list[tuple[int, int]] = []
    k = len(h_td.bags)
    for ci, comp in enumerate(comps):
        above: dict[int, list[int]] = {}
        for v in comp:
            above.setdefault(g.coords[v][-1], []).append(v)
        offset = ci * k
        for bag in h_td.bags:
            members = [v for hv in bag for v in above.get(hv, ())]
            bags.append(frozenset(members).union(base))
        edges.extend((a + offset, b + offset) for a, b in h_td.tree_edges)
        if ci:
            edges.append((offset - k, offset))
    if not comps:
        bags.append(frozenset(base))
    td = TreeDecomposition.build(bags, edges)
    check = validate_td(g, td)
    if not check:
        raise AssertionError(f"assembled decomposition invalid: {check.axiom}: {check.detail}")
    return LayeredDeletionReport(m, tuple(residues), frozenset(deleted), comps, td, t, d, n,
                                 class_sizes, windows)


# -- combined separator ------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with non-negative integer coefficients, lowest degree first."""

    coefficients: tuple[int, ...]

    @classmethod
    def monomial(cls, exponent: int) -> "Polynomial":
        return cls((0,) * exponent + (1,))

    @property
    def degree(self) -> int:
        nz = [i for i, a in enumerate(self.coefficients) if a]
        return nz[-1] if nz else 0

    def __call__(self, r: int) -> int:
        return sum(a * r**i for i, a in enumerate(self.coefficients))


def _ball_sizes_ok(g: Graph, r: int, bound: int) -> bool:
    return all(len(bfs_distances(g, v, r)) <= bound for v in range(g.n))


def _default_td(g: Graph) -> TreeDecomposition:
    if g.n <= exact_cap(DEFAULT_TW_CAP):
        return exact_treewidth(g)[1]
    return heuristic_treewidth(g)[1]


def combined_separator(
    g: Graph,
    g1: Graph,
    g2: Graph,
    growth: Polynomial,
    beta: float,
    seed: int = 0,
    td_provider: Callable[[Graph], TreeDecomposition] | None = None,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> Separation:
    """Balanced separator ``A ∪ B`` of a subgraph ``g`` of ``g1 ⊠ g2``.

    ``A`` is the preimage of a light fragmenting set of the factor with small
    balls; ``B`` is a balanced separator of ``g - A`` read off a tree
    decomposition.  The result's ``extra`` dict records radii, weights and
    every checked inequality.
    """
    n = g.n
    provider = td_provider or _default_td
    if n <= 1:
        return Separation(frozenset(range(n)), frozenset(), n, {"A": [], "B": [], "bounds": {}})
    if g.coords is None or g.arity != 2:
        raise ContractError("coords must be (g1 vertex, g2 vertex) pairs")
    for v, (a, b) in enumerate(g.coords):
        if not (0 <= a < g1.n and 0 <= b < g2.n):
            raise ContractError(f"vertex {v} has coords ({a}, {b}) outside the factors")
    for u, v in g.edges():
        (a, b), (x, y) = g.coords[u], g.coords[v]
        if (a, b) == (x, y) or (a != x and not g1.has_edge(a, x)) or (b != y and not g2.has_edge(b, y)):
            raise ContractError(f"edge ({u}, {v}) is not an edge of the strong product")
    if not beta > 0:
        raise ContractError("beta must be positive")

    c = growth.degree + 1
    r = max(1, math.ceil(n**beta))
    r_used = r
    if r < 2 or not cor_frac_distribution(r, c).valid:
        r_used = max(r, min_valid_radius(c))
    bound = growth(r_used)
    if _ball_sizes_ok(g1, r_used, bound):
        axis, factor = 0, g1
    elif _ball_sizes_ok(g2, r_used, bound):
        axis, factor = 1, g2
    else:
        raise ContractError(f"neither factor has all {r_used}-balls of size at most g(r)={bound}")

    weights = [0] * factor.n
    for cd in g.coords:
        weights[cd[axis]] += 1
    frag = weighted_fragment(factor, weights, r_used, bound, c, seed, max_draws, check_radius=False)
    A = frozenset(v for v in range(n) if g.coords[v][axis] in frag.members)

    rest, old = g.induced_subgraph(v for v in range(n) if v not in A)
    if rest.n:
        td = provider(rest)
        inner = separator_from_td(rest, td)
        s1 = frozenset(old[v] for v in inner.side1)
        s2 = frozenset(old[v] for v in inner.side2)
        B = frozenset(old[v] for v in inner.separator)
        width = td.width
    else:
        s1 = s2 = B = frozenset()
        width = -1
    sep = Separation(A | s1, A | s2, n)
    bounds = {
        "weight": {
            "lhs": len(A),
            "rhs": 2 * n / r_used**0.5,
            "holds": weight_bound_holds(len(A), n, r_used),
        },
        "fragment_components": {
            "lhs": frag.largest_component,
            "rhs": bound,
            "holds": frag.largest_component <= bound,
        },
        "separator_B": {"lhs": len(B), "rhs": width + 1, "holds": len(B) <= width + 1},
        "balance": {
            "lhs": max(len(sep.strict1), len(sep.strict2)),
            "rhs": balance_limit(n),
            "holds": sep.balanced,
        },
    }
    extra = {
        "r": r,
        "r_used": r_used,
        "c": c,
        "factor": axis + 1,
        "X": sorted(frag.members),
        "draws": frag.draws,
        "A": sorted(A),
        "B": sorted(B),
        "remainder_width": width,
        "bounds": bounds,
    }
    return Separation(sep.side1, sep.side2, n, extra)
