"""Simple undirected graphs, graph products, projections, layerings and balls.

Vertices are the dense integers ``0..n-1``.  A graph may carry a coordinate
tuple per vertex; products fill these in so that a vertex of ``A ⊠ B`` can be
traced back to its factor vertices.  A finite subgraph of ``Z^d ⊠ H`` is a
graph whose coords are ``(z_1, ..., z_d, h)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapacityError, ContractError

MAX_PRODUCT_VERTICES = 10**7


class Graph:
    """Immutable simple graph with sorted adjacency lists."""

    __slots__ = ("n", "adj", "coords", "_nbsets")

    def __init__(self, n: int, adj: Sequence[Sequence[int]], coords=None, *, check: bool = True):
        self.n = n
        self.adj = tuple(tuple(sorted(nb)) for nb in adj)
        self.coords = None if coords is None else tuple(tuple(c) for c in coords)
        self._nbsets = None
        if check:
            self._check()

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], coords=None) -> "Graph":
        nbs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ContractError(f"self-loop at vertex {u}")
            nbs[u].add(v)
            nbs[v].add(u)
        return cls(n, nbs, coords)

    def _check(self) -> None:
        if len(self.adj) != self.n:
            raise ContractError("adjacency length does not match n")
        for u, nb in enumerate(self.adj):
            for i, v in enumerate(nb):
                if not 0 <= v < self.n:
                    raise ContractError(f"neighbour {v} of {u} outside [0, {self.n})")
                if v == u:
                    raise ContractError(f"self-loop at vertex {u}")
                if i and nb[i - 1] == v:
                    raise ContractError(f"duplicate edge ({u}, {v})")
        sets = self.neighbour_sets()
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u not in sets[v]:
                    raise ContractError(f"adjacency not symmetric on ({u}, {v})")
        if self.coords is not None:
            if len(self.coords) != self.n:
                raise ContractError("coords length does not match n")
            arities = {len(c) for c in self.coords}
            if len(arities) > 1:
                raise ContractError("coordinate tuples have differing arity")

    def neighbour_sets(self) -> tuple[frozenset, ...]:
        if self._nbsets is None:
            self._nbsets = tuple(frozenset(nb) for nb in self.adj)
        return self._nbsets

    @property
    def m(self) -> int:
        return sum(len(nb) for nb in self.adj) // 2

    @property
    def arity(self) -> int | None:
        if self.coords is None:
            return None
        return len(self.coords[0]) if self.coords else 0

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbour_sets()[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj), default=0)

    def with_coords(self, coords) -> "Graph":
        return Graph(self.n, self.adj, coords)

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Return ``(sub, old_ids)``; vertex ``i`` of ``sub`` is ``old_ids[i]``."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        adj = [[index[w] for w in self.adj[v] if w in index] for v in old]
        coords = None if self.coords is None else [self.coords[v] for v in old]
        return Graph(len(old), adj, coords, check=False), old

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.n, self.adj, self.coords))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_capacity(na: int, nb: int) -> None:
    if na * nb > MAX_PRODUCT_VERTICES:
        raise CapacityError(
            f"product would have {na * nb} vertices, above the limit of {MAX_PRODUCT_VERTICES}"
        )


def _product_coords(a: Graph, b: Graph) -> list[tuple]:
    ca = a.coords if a.coords is not None else [(v,) for v in range(a.n)]
    cb = b.coords if b.coords is not None else [(x,) for x in range(b.n)]
    return [tuple(ca[v]) + tuple(cb[x]) for v in range(a.n) for x in range(b.n)]


def _product(a: Graph, b: Graph, strong: bool) -> Graph:
    _check_capacity(a.n, b.n)
    nb_ = b.n
    adj: list[list[int]] = []
    for v in range(a.n):
        row_a = (v,) + a.adj[v]
        for x in range(b.n):
            row_b = (x,) + b.adj[x]
            nbrs = []
            for w in row_a:
                for y in row_b:
                    if w == v and y == x:
                        continue
                    if not strong and w != v and y != x:
                        continue
                    nbrs.append(w * nb_ + y)
            adj.append(nbrs)
    return Graph(a.n * b.n, adj, _product_coords(a, b), check=False)


def strong_product(a: Graph, b: Graph) -> Graph:
    """``a ⊠ b`` with row-major ids ``id(v, x) = v * b.n + x``."""
    return _product(a, b, strong=True)


def cartesian_product(a: Graph, b: Graph) -> Graph:
    """``a □ b`` with the same id encoding as :func:`strong_product`."""
    return _product(a, b, strong=False)


def product_id(factor_ids: Sequence[int], factor_sizes: Sequence[int]) -> int:
    """Row-major id of a product vertex given its factor ids."""
    if len(factor_ids) != len(factor_sizes):
        raise ContractError("factor id tuple arity does not match number of factors")
    out = 0
    for i, s in zip(factor_ids, factor_sizes):
        if not 0 <= i < s:
            raise ContractError(f"factor id {i} outside [0, {s})")
        out = out * s + i
    return out


def factor_ids(vid: int, factor_sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in reversed(factor_sizes):
        vid, i = divmod(vid, s)
        out.append(i)
    return tuple(reversed(out))


@dataclass(frozen=True)
class Projection:
    values: tuple
    counts: dict

    def weight(self, value) -> int:
        return self.counts.get(value, 0)


def _require_coords(g: Graph, axis: int | None = None) -> None:
    if g.coords is None:
        raise ContractError("graph carries no coordinates")
    if axis is not None and not 0 <= axis < (g.arity or 0):
        raise ContractError(f"axis {axis} outside coordinate arity {g.arity}")


def project(g: Graph, axis: int) -> Projection:
    """Axis-coordinates occurring in ``g`` with their preimage counts."""
    _require_coords(g, axis)
    counts: dict = {}
    for c in g.coords:
        counts[c[axis]] = counts.get(c[axis], 0) + 1
    return Projection(tuple(sorted(counts)), dict(sorted(counts.items())))


@dataclass(frozen=True)
class Layering:
    """Level sets of one integer coordinate; ``layers[j]`` holds value ``offset + j``."""

    layers: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]
    offset: int = 0

    def violations(self, g: Graph) -> list[tuple[int, int]]:
        return [(u, v) for u, v in g.edges() if abs(self.index[u] - self.index[v]) > 1]

    def is_valid(self, g: Graph) -> bool:
        seen = sorted(v for layer in self.layers for v in layer)
        return seen == list(range(g.n)) and not self.violations(g)


def layering_by_axis(g: Graph, axis: int) -> Layering:
    _require_coords(g, axis)
    if g.n == 0:
        return Layering((), (), 0)
    vals = [c[axis] for c in g.coords]
    lo, hi = min(vals), max(vals)
    layers: list[list[int]] = [[] for _ in range(hi - lo + 1)]
    for v, x in enumerate(vals):
        layers[x - lo].append(v)
    index = tuple(x - lo for x in vals)
    out = Layering(tuple(tuple(l) for l in layers), index, lo)
    bad = out.violations(g)
    if bad:
        u, v = bad[0]
        raise ContractError(
            f"edge ({u}, {v}) spans coordinates {vals[u]} and {vals[v]} on axis {axis}"
        )
    return out


def bfs_distances(g: Graph, source: int, limit: int | None = None, allowed=None) -> dict[int, int]:
    """Distances from ``source``, truncated at ``limit``; optionally restricted to ``allowed``."""
    if not 0 <= source < g.n:
        raise ContractError(f"vertex {source} outside [0, {g.n})")
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = du + 1
                queue.append(w)
    return dist


def ball(g: Graph, v: int, r: int) -> frozenset[int]:
    """Closed ball: vertices at distance at most ``r`` from ``v``."""
    if r < 0:
        raise ContractError("radius must be non-negative")
    return frozenset(bfs_distances(g, v, r))


def sphere(g: Graph, v: int, r: int) -> frozenset[int]:
    """Vertices at distance exactly ``r`` from ``v``."""
    return frozenset(u for u, d in bfs_distances(g, v, r).items() if d == r)


def components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Connected components of ``g - removed``, each sorted, ordered by least vertex."""
    gone = set(removed)
    seen = set(gone)
    out = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def eccentricity(g: Graph, v: int) -> int:
    return max(bfs_distances(g, v).values())


def diameter(g: Graph) -> int:
    """Largest finite distance (maximum over components)."""
    return max((eccentricity(g, v) for v in range(g.n)), default=0)


@dataclass(frozen=True)
class GrowthReport:
    ok: bool
    violation: tuple[int, int, int] | None = None  # (vertex, radius, ball size)


def growth_check(g: Graph, c: float) -> GrowthReport:
    """Check ``|N^r[v]| <= r^c`` for every vertex and every ``2 <= r <= diameter``."""
    if c <= 0:
        raise ContractError("growth exponent must be positive")
    diam = diameter(g)
    for v in range(g.n):
        dist = bfs_distances(g, v)
        by_radius = [0] * (diam + 1)
        for d in dist.values():
            by_radius[d] += 1
        size = by_radius[0] + (by_radius[1] if diam >= 1 else 0)
        for r in range(2, diam + 1):
            size += by_radius[r]
            if size > r**c:
                return GrowthReport(False, (v, r, size))
    return GrowthReport(True)


def ball_size_bound(k: int, delta: int, r: int, d: int) -> int:
    """``(1+delta)^k (2r+1)^((k+1)(d+1))`` as an exact integer."""
    if min(k, delta, r, d) < 0:
        raise ContractError("ball_size_bound arguments must be non-negative")
    return (1 + delta) ** k * (2 * r + 1) ** ((k + 1) * (d + 1))


def graph_power(g: Graph, k: int) -> Graph:
    """``G^k``: join every pair at distance at most ``k``."""
    if k < 1:
        raise ContractError("power must be at least 1")
    adj = []
    for v in range(g.n):
        adj.append([u for u in bfs_distances(g, v, k) if u != v])
    return Graph(g.n, adj, g.coords, check=False)


# -- standard families ------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, [[] for _ in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ContractError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def star_graph(n: int) -> Graph:
    """``K_{1,n}`` with centre 0 and leaves ``1..n``."""
    return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    """Plain ``rows x cols`` grid (``P_rows □ P_cols``) with coords ``(i, j)``."""
    return cartesian_product(path_graph(rows), path_graph(cols))


def crossed_grid(rows: int, cols: int) -> Graph:
    """Grid with crosses, ``P_rows ⊠ P_cols``, with coords ``(i, j)``."""
    return strong_product(path_graph(rows), path_graph(cols))


def disjoint_union(a: Graph, b: Graph) -> Graph:
    adj = [list(nb) for nb in a.adj] + [[v + a.n for v in nb] for nb in b.adj]
    return Graph(a.n + b.n, adj, check=False)
