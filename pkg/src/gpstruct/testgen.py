"""Explicit witness gadgets from the structure theory, plus random instance generators.

Witness builders name vertices the way the constructions do (centre ``c``,
leaves ``a_i`` and ``b_j``) so a failing check points at a specific step.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import ContractError
from .graph import (
    Graph,
    bfs_distances,
    cartesian_product,
    path_graph,
    star_graph,
    strong_product,
)


@dataclass
class WitnessReport:
    construction: str
    host_vertices: int
    host_edges: int
    pattern: str
    verdict: bool
    failure: str | None = None
    details: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "construction": self.construction,
            "host": {"n": self.host_vertices, "m": self.host_edges},
            "pattern": self.pattern,
            "verdict": self.verdict,
            "failure": self.failure,
            "details": self.details,
        }


def _pid(v: int, x: int, nb: int) -> int:
    return v * nb + x


def star_cartesian_subdivision_witness(n: int) -> WitnessReport:
    """Exhibit a 1-subdivision of ``K_{n,n}`` inside ``K_{1,n} □ K_{1,n}``.

    Branch vertices are ``(a_i, c)`` and ``(c, b_j)``; the edge ``a_i b_j`` is
    subdivided by ``(a_i, b_j)``.
    """
    if n < 1:
        raise ContractError("n must be at least 1")
    star = star_graph(n)
    host = cartesian_product(star, star)
    nb = star.n
    c = 0
    leaves = range(1, n + 1)
    left = [_pid(a, c, nb) for a in leaves]
    right = [_pid(c, b, nb) for b in leaves]
    middle = {(i, j): _pid(a, b, nb) for i, a in enumerate(leaves) for j, b in enumerate(leaves)}
    failure = None
    used = left + right + list(middle.values())
    if len(set(used)) != len(used):
        failure = "branch and subdivision vertices are not distinct"
    else:
        for (i, j), mid in middle.items():
            if not host.has_edge(left[i], mid):
                failure = f"missing edge (a_{i + 1}, c)-(a_{i + 1}, b_{j + 1})"
                break
            if not host.has_edge(mid, right[j]):
                failure = f"missing edge (a_{i + 1}, b_{j + 1})-(c, b_{j + 1})"
                break
    return WitnessReport(
        "star-cartesian",
        host.n,
        host.m,
        f"1-subdivision of K_{{{n},{n}}}",
        failure is None,
        failure,
        {"branch_left": left, "branch_right": right, "subdivision": [middle[k] for k in sorted(middle)]},
    )


def complete_binary_tree(depth: int) -> Graph:
    """Heap-numbered complete binary tree: children of ``i`` are ``2i+1`` and ``2i+2``."""
    size = 2 ** (depth + 1) - 1
    return Graph.from_edges(size, [(i, (i - 1) // 2) for i in range(1, size)])


def _tree_depth(i: int) -> int:
    return (i + 1).bit_length() - 1


def binary_tree_depth_in_knn(n: int) -> int:
    """Deepest complete binary tree whose two colour classes both fit in ``n`` slots."""
    depth = 0
    while True:
        nxt = depth + 1
        even = sum(2**j for j in range(0, nxt + 1, 2))
        odd = sum(2**j for j in range(1, nxt + 1, 2))
        if max(even, odd) > n:
            return depth
        depth = nxt


def strong_star_binary_tree_witness(n: int) -> WitnessReport:
    """Exhibit ``K_{n,n}`` inside ``K_{1,n} ⊠ K_{1,n}`` and a complete binary tree inside it.

    ``(a_i, c)`` and ``(c, b_j)`` are adjacent through the diagonal rule of the
    strong product.  The tree's even levels go to the ``a`` side and its odd
    levels to the ``b`` side, so its depth is limited by both class sizes.
    """
    if n < 1:
        raise ContractError("n must be at least 1")
    star = star_graph(n)
    host = strong_product(star, star)
    nb = star.n
    c = 0
    left = [_pid(a, c, nb) for a in range(1, n + 1)]
    right = [_pid(c, b, nb) for b in range(1, n + 1)]
    failure = None
    for i, u in enumerate(left):
        for j, v in enumerate(right):
            if not host.has_edge(u, v):
                failure = f"missing K_{{n,n}} edge (a_{i + 1}, c)-(c, b_{j + 1})"
                break
        if failure:
            break

    depth = binary_tree_depth_in_knn(n)
    tree = complete_binary_tree(depth)
    counters = [0, 0]
    image = []
    for i in range(tree.n):
        side = _tree_depth(i) % 2
        pool = left if side == 0 else right
        image.append(pool[counters[side]])
        counters[side] += 1
    if failure is None:
        if len(set(image)) != len(image):
            failure = "tree embedding is not injective"
        else:
            for u, v in tree.edges():
                if not host.has_edge(image[u], image[v]):
                    failure = f"tree edge ({u}, {v}) not preserved"
                    break
    return WitnessReport(
        "star-strong",
        host.n,
        host.m,
        f"K_{{{n},{n}}} containing a complete binary tree of depth {depth}",
        failure is None,
        failure,
        {"left": left, "right": right, "tree_depth": depth, "tree_image": image},
    )


@dataclass(frozen=True)
class MinorCheck:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def shallow_minor_check(g: Graph, n: int, r: int, branch_sets: Sequence[Sequence[int]]) -> MinorCheck:
    """Verify ``branch_sets`` model ``K_n`` as an ``r``-shallow minor of ``g``.

    Sets must be non-empty, disjoint, each of radius at most ``r`` inside
    its own induced subgraph, and every two must be joined by an edge.
    """
    if len(branch_sets) != n:
        return MinorCheck(False, f"expected {n} branch sets, got {len(branch_sets)}")
    owner: dict[int, int] = {}
    sets = []
    for i, bs in enumerate(branch_sets):
        bs = set(bs)
        if not bs:
            return MinorCheck(False, f"branch set {i} is empty")
        for v in bs:
            if not 0 <= v < g.n:
                return MinorCheck(False, f"branch set {i} holds unknown vertex {v}")
            if v in owner:
                return MinorCheck(False, f"vertex {v} lies in branch sets {owner[v]} and {i}")
            owner[v] = i
        sets.append(bs)
    for i, bs in enumerate(sets):
        start = min(bs)
        if len(bfs_distances(g, start, allowed=bs)) != len(bs):
            return MinorCheck(False, f"branch set {i} is disconnected")
        if not any(len(bfs_distances(g, v, r, allowed=bs)) == len(bs) for v in sorted(bs)):
            return MinorCheck(False, f"branch set {i} has radius above {r}")
    linked = set()
    for u, v in g.edges():
        a, b = owner.get(u), owner.get(v)
        if a is not None and b is not None and a != b:
            linked.add((min(a, b), max(a, b)))
    for a, b in combinations(range(n), 2):
        if (a, b) not in linked:
            return MinorCheck(False, f"branch sets {a} and {b} are not adjacent")
    return MinorCheck(True)


def spider(legs: int, length: int) -> Graph:
    """Centre 0 with ``legs`` paths of ``length`` edges; leg ``i`` holds ``1 + i*length ..``."""
    edges = []
    for i in range(legs):
        prev = 0
        for j in range(length):
            v = 1 + i * length + j
            edges.append((prev, v))
            prev = v
    return Graph.from_edges(1 + legs * length, edges)


def _tree_path(g: Graph, a: int, b: int, z: int) -> list[int]:
    """Shortest ``ab``-path inside the union of BFS paths from ``a`` and ``b`` to ``z``."""
    dist = bfs_distances(g, z)

    def to_z(x):
        out = [x]
        while out[-1] != z:
            out.append(min(u for u in g.adj[out[-1]] if dist.get(u) == dist[out[-1]] - 1))
        return out

    pa, pb = to_z(a), to_z(b)
    allowed = set(pa) | set(pb)
    prev = {a: None}
    queue = [a]
    for x in queue:
        for y in g.adj[x]:
            if y in allowed and y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


@dataclass
class MinorModel:
    host: Graph
    n: int
    depth: int
    branch_sets: list[list[int]]


def cartesian_clique_minor(g1: Graph, g2: Graph, n: int, z: int | None = None) -> MinorModel:
    """Build a shallow ``K_n`` minor of ``g1 □ g2`` from the large-ball argument.

    ``A`` is ``n`` vertices of ``g1`` at one common distance ``i`` from ``z``;
    for each pair ``{v, w}`` of ``A`` a distinct vertex ``σ(vw)`` of ``g2`` carries
    a copy of the ``vw``-path through ``z``.  Branch set ``v`` is the fibre
    ``{v} × V(g2)`` plus the half of each path copy nearest to it.  The
    returned depth is twice the larger of the two factor radii.
    """
    if z is None:
        z = min(range(g1.n), key=lambda v: (max(bfs_distances(g1, v).values()), v))
    dist = bfs_distances(g1, z)
    rad1 = max(dist.values())
    rad2 = min(max(bfs_distances(g2, v).values()) for v in range(g2.n))
    layers: dict[int, list[int]] = {}
    for v, dv in dist.items():
        if dv:
            layers.setdefault(dv, []).append(v)
    level = next((i for i in sorted(layers) if len(layers[i]) >= n), None)
    if level is None:
        raise ContractError(f"no distance class around {z} holds {n} vertices")
    A = sorted(layers[level])[:n]
    pairs = list(combinations(range(n), 2))
    if g2.n < len(pairs):
        raise ContractError(f"second factor needs at least {len(pairs)} vertices")
    sigma = {pair: b for pair, b in zip(pairs, range(g2.n))}
    host = cartesian_product(g1, g2)
    nb = g2.n
    branch = [[_pid(A[i], x, nb) for x in range(g2.n)] for i in range(n)]
    for (i, j), b in sigma.items():
        path = _tree_path(g1, A[i], A[j], z)
        inner = path[1:-1]
        half = (len(inner) + 1) // 2
        branch[i].extend(_pid(x, b, nb) for x in inner[:half])
        branch[j].extend(_pid(x, b, nb) for x in inner[half:])
    return MinorModel(host, n, 2 * max(rad1, rad2), [sorted(b) for b in branch])


# -- random instances --------------------------------------------------------


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_tree(n: int, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(i, rng.randrange(i)) for i in range(1, n)])


def random_connected_graph(n: int, p: float, rng: random.Random) -> Graph:
    tree = random_tree(n, rng).edges()
    extra = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, tree + extra)


def random_product_subgraph(
    n: int,
    h: Graph,
    dims: int,
    rng: random.Random,
    keep_edge: float = 0.7,
) -> Graph:
    """Random connected subgraph of ``Z^dims ⊠ h`` on ``n`` vertices with coords ``(z.., h)``.

    Grows a vertex set by random strong-product steps, then keeps a random
    spanning tree plus each other product edge with probability ``keep_edge``.
    """
    if n < 1:
        raise ContractError("n must be at least 1")
    steps = [tuple(s) for s in _unit_steps(dims)]
    start = (0,) * dims + (0,)
    chosen = [start]
    seen = {start}
    parent_edges = []
    while len(chosen) < n:
        base = rng.choice(chosen)
        step = rng.choice(steps)
        hv = base[-1]
        hnext = rng.choice((hv,) + h.adj[hv])
        cand = tuple(a + b for a, b in zip(base[:-1], step)) + (hnext,)
        if cand in seen:
            continue
        seen.add(cand)
        parent_edges.append((base, cand))
        chosen.append(cand)
    index = {c: i for i, c in enumerate(chosen)}
    edges = {(index[a], index[b]) for a, b in parent_edges}
    for i, a in enumerate(chosen):
        for j in range(i + 1, len(chosen)):
            b = chosen[j]
            if all(abs(x - y) <= 1 for x, y in zip(a[:-1], b[:-1])) and (
                a[-1] == b[-1] or h.has_edge(a[-1], b[-1])
            ):
                if rng.random() < keep_edge:
                    edges.add((i, j))
    return Graph.from_edges(n, sorted(edges), chosen)


def _unit_steps(dims: int):
    steps = [()]
    for _ in range(dims):
        steps = [s + (x,) for s in steps for x in (-1, 0, 1)]
    return steps


def random_points(n: int, d: int, side: float, rng: random.Random) -> list[tuple[float, ...]]:
    return [tuple(rng.uniform(0, side) for _ in range(d)) for _ in range(n)]


def path_as_product(n: int) -> Graph:
    """``P_n`` recorded as a subgraph of ``Z ⊠ K_1`` (coords ``(i, 0)``)."""
    return path_graph(n).with_coords([(i, 0) for i in range(n)])


def grid_as_product(g: Graph) -> Graph:
    """Append a zero ``H``-coordinate to a coordinate graph (``H = K_1``)."""
    return g.with_coords([tuple(c) + (0,) for c in g.coords])
