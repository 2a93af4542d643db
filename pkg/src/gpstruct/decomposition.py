"""Tree and path decompositions, treewidth, and separators read off a decomposition."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, ContractError
from .graph import MAX_PRODUCT_VERTICES, Graph, components, path_graph, strong_product

DEFAULT_TW_CAP = 16


def exact_cap(default: int) -> int:
    """Exact-search size cap; the ``GPS_EXACT_CAP`` environment variable overrides it."""
    raw = os.environ.get("GPS_EXACT_CAP")
    if raw is None or not raw.strip():
        return default
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ContractError(f"GPS_EXACT_CAP must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise ContractError("GPS_EXACT_CAP must be positive")
    return cap


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...]
    width: int

    @classmethod
    def build(cls, bags: Iterable[Iterable[int]], tree_edges: Iterable[tuple[int, int]] = ()):
        bags = tuple(frozenset(b) for b in bags)
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in tree_edges))
        return cls(bags, edges, max((len(b) for b in bags), default=0) - 1)

    def tree_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def to_obj(self) -> dict:
        return {
            "bags": [sorted(b) for b in self.bags],
            "tree_edges": [list(e) for e in self.tree_edges],
            "width": self.width,
        }

    @classmethod
    def from_obj(cls, obj) -> "TreeDecomposition":
        try:
            bags = tuple(frozenset(int(v) for v in b) for b in obj["bags"])
            edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in obj.get("tree_edges", []))
            width = int(obj["width"]) if "width" in obj else max((len(b) for b in bags), default=0) - 1
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed tree decomposition: {exc}") from exc
        return cls(bags, edges, width)


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset, ...]
    width: int

    @classmethod
    def build(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        bags = tuple(frozenset(b) for b in bags)
        return cls(bags, max((len(b) for b in bags), default=0) - 1)

    def as_tree(self) -> TreeDecomposition:
        return TreeDecomposition(self.bags, tuple((i, i + 1) for i in range(len(self.bags) - 1)), self.width)


@dataclass(frozen=True)
class Validation:
    ok: bool
    axiom: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _is_tree(nodes: int, edges: Sequence[tuple[int, int]]) -> str | None:
    if nodes == 0:
        return None if not edges else "tree has edges but no nodes"
    if len(edges) != nodes - 1:
        return f"tree on {nodes} nodes has {len(edges)} edges"
    parent = list(range(nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        if not (0 <= a < nodes and 0 <= b < nodes):
            return f"tree edge ({a}, {b}) references a missing bag"
        ra, rb = find(a), find(b)
        if ra == rb:
            return f"tree edge ({a}, {b}) closes a cycle"
        parent[ra] = rb
    return None


def validate_td(g: Graph, td: TreeDecomposition) -> Validation:
    """Check the decomposition axioms; never raises."""
    if isinstance(td, PathDecomposition):
        td = td.as_tree()
    problem = _is_tree(len(td.bags), td.tree_edges)
    if problem:
        return Validation(False, "tree", problem)
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not (isinstance(v, int) and 0 <= v < g.n):
                return Validation(False, "vertex-ids", f"bag {i} holds unknown vertex {v}")
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders[v].append(i)
    for u, v in g.edges():
        if not any(v in td.bags[i] for i in holders[u]):
            return Validation(False, "edge-coverage", f"edge ({u}, {v}) is in no bag")
    tadj = td.tree_adjacency()
    for v in range(g.n):
        nodes = set(holders[v])
        if not nodes:
            return Validation(False, "vertex-subtree", f"vertex {v} is in no bag")
        start = holders[v][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            return Validation(False, "vertex-subtree", f"bags holding vertex {v} are not connected")
    real = max((len(b) for b in td.bags), default=0) - 1
    if td.width != real:
        return Validation(False, "width", f"declared width {td.width} but largest bag gives {real}")
    return Validation(True)


# -- elimination orderings ---------------------------------------------------


def td_from_elimination_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Decomposition with one bag per vertex: the vertex plus its later neighbours in the fill graph."""
    if sorted(order) != list(range(g.n)):
        raise ContractError("elimination order is not a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    nbrs = [set(nb) for nb in g.adj]
    bags = []
    edges = []
    roots = []
    for v in order:
        later = nbrs[v]
        bags.append(frozenset(later | {v}))
        for a in later:
            nbrs[a] |= later
            nbrs[a].discard(a)
            nbrs[a].discard(v)
        if later:
            nxt = min(later, key=pos.__getitem__)
            edges.append((pos[v], pos[nxt]))
        else:
            roots.append(pos[v])
        nbrs[v] = set()
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition.build(bags, edges)


def elimination_width(g: Graph, order: Sequence[int]) -> int:
    return td_from_elimination_order(g, order).width


def _fill(nbrs: list[set[int]], v: int) -> int:
    """Missing edges among the neighbours of ``v``."""
    nb = nbrs[v]
    d = len(nb)
    present = sum(len(nb & nbrs[a]) for a in nb)
    return (d * (d - 1) - present) // 2


def min_fill_order(g: Graph) -> list[int]:
    """Greedy minimum-fill elimination ordering; ties go to the smallest vertex id.

    Fill counts are cached and refreshed only for the eliminated vertex's
    neighbours and for vertices seeing two of them, the only places new fill
    edges can change them.
    """
    nbrs = [set(nb) for nb in g.adj]
    fill = {v: _fill(nbrs, v) for v in range(g.n)}
    order = []
    while fill:
        v = min(fill, key=lambda u: (fill[u], u))
        nb = nbrs[v]
        for a in nb:
            nbrs[a] |= nb
            nbrs[a].discard(a)
            nbrs[a].discard(v)
        dirty = set(nb)
        for a in nb:
            # a non-neighbour of v only changes if two of its neighbours got joined
            dirty.update(u for u in nbrs[a] if u not in dirty and len(nbrs[u] & nb) >= 2)
        nbrs[v] = set()
        del fill[v]
        order.append(v)
        for u in dirty:
            if u in fill:
                fill[u] = _fill(nbrs, u)
    return order


def heuristic_treewidth(g: Graph) -> tuple[int, TreeDecomposition]:
    """Upper bound from the min-fill heuristic, with its decomposition."""
    td = td_from_elimination_order(g, min_fill_order(g))
    return td.width, td


def degeneracy(g: Graph) -> int:
    """Largest minimum degree over subgraphs; a lower bound on treewidth."""
    deg = [len(nb) for nb in g.adj]
    alive = set(range(g.n))
    best = 0
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        best = max(best, deg[v])
        alive.discard(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    return best


def _eliminated_degree(adjmask: Sequence[int], s: int, v: int) -> int:
    """Vertices outside ``s ∪ {v}`` reachable from ``v`` through ``s`` (bitmasks)."""
    vb = 1 << v
    comp = vb
    frontier = vb
    while frontier:
        nb = 0
        f = frontier
        while f:
            low = f & -f
            nb |= adjmask[low.bit_length() - 1]
            f ^= low
        frontier = nb & s & ~comp
        comp |= frontier
    reach = 0
    c = comp
    while c:
        low = c & -c
        reach |= adjmask[low.bit_length() - 1]
        c ^= low
    return (reach & ~s & ~vb).bit_count()


def exact_treewidth(g: Graph, cap: int | None = None) -> tuple[int, TreeDecomposition]:
    """Exact treewidth by dynamic programming over sets of eliminated vertices.

    States are pruned against the min-fill upper bound, so the search only
    explores eliminations that could beat it.
    """
    cap = exact_cap(DEFAULT_TW_CAP) if cap is None else cap
    if g.n > cap:
        raise CapacityError(
            f"exact treewidth is capped at {cap} vertices (got {g.n}); use heuristic_treewidth"
        )
    ub, ub_td = heuristic_treewidth(g)
    if g.n == 0 or ub <= degeneracy(g):
        return ub, ub_td

    n = g.n
    full = (1 << n) - 1
    adjmask = [sum(1 << w for w in nb) for nb in g.adj]
    best = ub
    best_end = None
    value = {0: -1}
    back: dict[int, tuple[int, int]] = {}
    level = [0]
    for size in range(n):
        nxt: dict[int, int] = {}
        for s in level:
            tw_s = value[s]
            if n - size - 1 <= tw_s:
                # the rest can go in any order without exceeding tw_s
                if tw_s < best:
                    best, best_end = tw_s, s
                continue
            for v in range(n):
                if s >> v & 1:
                    continue
                val = max(tw_s, _eliminated_degree(adjmask, s, v))
                if val >= best:
                    continue
                t = s | (1 << v)
                if val < nxt.get(t, best):
                    nxt[t] = val
                    back[t] = (s, v)
        value.update(nxt)
        level = sorted(nxt)
        if full in nxt and nxt[full] < best:
            best, best_end = nxt[full], full
    if best_end is None:
        return ub, ub_td
    order = []
    s = best_end
    while s:
        s, v = back[s]
        order.append(v)
    order.reverse()
    order += [v for v in range(n) if not best_end >> v & 1]
    td = td_from_elimination_order(g, order)
    if td.width != best:
        raise AssertionError(f"reconstructed width {td.width} differs from DP value {best}")
    return best, td


# -- separations -------------------------------------------------------------


def balance_limit(n: int) -> int:
    """Largest strict side allowed in a balanced separation: ``ceil(2n/3)``."""
    return -(-2 * n // 3)


@dataclass(frozen=True)
class Separation:
    side1: frozenset
    side2: frozenset
    n: int
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def separator(self) -> frozenset:
        return self.side1 & self.side2

    @property
    def order(self) -> int:
        return len(self.separator)

    @property
    def strict1(self) -> frozenset:
        return self.side1 - self.side2

    @property
    def strict2(self) -> frozenset:
        return self.side2 - self.side1

    @property
    def balanced(self) -> bool:
        lim = balance_limit(self.n)
        return len(self.strict1) <= lim and len(self.strict2) <= lim

    def violation(self, g: Graph) -> str | None:
        if self.side1 | self.side2 != frozenset(range(g.n)):
            return "sides do not cover the vertex set"
        a = self.strict1
        b = self.strict2
        for u, v in g.edges():
            if (u in a and v in b) or (u in b and v in a):
                return f"edge ({u}, {v}) joins the two strict sides"
        return None

    def to_obj(self) -> dict:
        return {
            "side1": sorted(self.side1),
            "side2": sorted(self.side2),
            "separator": sorted(self.separator),
            "order": self.order,
            "strict_sizes": [len(self.strict1), len(self.strict2)],
            "balance_limit": balance_limit(self.n),
            "balanced": self.balanced,
        }


def split_components(comps: list[list[int]], n: int) -> tuple[set, set]:
    """Group components (each at most n/2) into two parts of at most 2n/3 each."""
    comps = sorted(comps, key=lambda c: (-len(c), c[0]))
    a: set = set()
    b: set = set()
    if comps and 3 * len(comps[0]) >= n:
        a.update(comps[0])
        for c in comps[1:]:
            b.update(c)
        return a, b
    for c in comps:
        if 3 * len(a) < n:
            a.update(c)
        else:
            b.update(c)
    return a, b


def _next_hop(tadj: list[list[int]], src: int, targets: set[int]) -> int:
    parent = {src: src}
    queue = [src]
    for x in queue:
        if x in targets and x != src:
            while parent[x] != src:
                x = parent[x]
            return x
        for y in tadj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    raise ContractError("tree decomposition does not reach a required bag")


def separator_from_td(g: Graph, td: TreeDecomposition) -> Separation:
    """Balanced separation whose separator is one bag of ``td``.

    Walk along the tree towards any component of ``G - bag`` holding more than
    half the vertices; the walk stops at a bag leaving only small components,
    which are then grouped into two sides.
    """
    check = validate_td(g, td)
    if not check:
        raise ContractError(f"invalid tree decomposition: {check.axiom}: {check.detail}")
    n = g.n
    if n == 0:
        return Separation(frozenset(), frozenset(), 0)
    tadj = td.tree_adjacency()
    holders: dict[int, set[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders.setdefault(v, set()).add(i)
    x = 0
    for _ in range(len(td.bags) + 1):
        bag = td.bags[x]
        comps = components(g, bag)
        big = [c for c in comps if 2 * len(c) > n]
        if not big:
            break
        x = _next_hop(tadj, x, holders[big[0][0]])
    else:
        raise AssertionError("separator walk did not terminate")
    a, b = split_components(comps, n)
    sep = set(td.bags[x])
    return Separation(frozenset(a | sep), frozenset(b | sep), n, {"bag": x})


# -- products ----------------------------------------------------------------


def product_td(h_td: TreeDecomposition, q_sizes: Sequence[int], n_h: int | None = None) -> TreeDecomposition:
    """Decomposition of ``P_{q_1} ⊠ ... ⊠ P_{q_d} ⊠ H`` from one of ``H``.

    Every ``H``-vertex in a bag is replaced by its whole copy of the path
    product.  Vertex ids follow the row-major product encoding with the
    ``H`` coordinate last.
    """
    if any(q < 1 for q in q_sizes):
        raise ContractError("path sizes must be at least 1")
    if n_h is None:
        n_h = 1 + max((v for b in h_td.bags for v in b), default=-1)
    cells = math.prod(q_sizes)
    if cells * n_h > MAX_PRODUCT_VERTICES:
        raise CapacityError(f"product of size {cells * n_h} exceeds capacity")
    grid = [0]
    for q in q_sizes:
        grid = [g * q + z for g in grid for z in range(q)]
    bags = [frozenset(c * n_h + h for c in grid for h in bag) for bag in h_td.bags]
    width = (h_td.width + 1) * cells - 1
    return TreeDecomposition(tuple(bags), h_td.tree_edges, width if bags else -1)


def path_product(q_sizes: Sequence[int], h: Graph) -> Graph:
    """Materialize ``P_{q_1} ⊠ ... ⊠ P_{q_d} ⊠ H`` (used to validate :func:`product_td`)."""
    out = None
    for q in q_sizes:
        p = path_graph(q)
        out = p if out is None else strong_product(out, p)
    return h if out is None else strong_product(out, h)
