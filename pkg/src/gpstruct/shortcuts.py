"""Shortcut systems and the supergraph obtained by adding one edge per shortcut."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ContractError
from .graph import Graph


@dataclass(frozen=True)
class ShortcutSystem:
    """Paths stored with both endpoints; only interior vertices count towards usage."""

    paths: tuple[tuple[int, ...], ...]
    k: int
    d: int

    def usage(self, n: int) -> list[int]:
        counts = [0] * n
        for path in self.paths:
            for v in path[1:-1]:
                if 0 <= v < n:
                    counts[v] += 1
        return counts

    def to_obj(self) -> dict:
        return {"k": self.k, "d": self.d, "paths": [list(p) for p in self.paths]}

    @classmethod
    def from_obj(cls, obj) -> "ShortcutSystem":
        try:
            return cls(tuple(tuple(int(v) for v in p) for p in obj["paths"]), int(obj["k"]), int(obj["d"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed shortcut system: {exc}") from exc


@dataclass(frozen=True)
class ShortcutCheck:
    ok: bool
    violation: str | None = None
    vertex: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_shortcuts(g: Graph, s: ShortcutSystem) -> ShortcutCheck:
    for i, path in enumerate(s.paths):
        if len(path) < 2:
            return ShortcutCheck(False, f"path {i} has fewer than two vertices")
        if any(not 0 <= v < g.n for v in path):
            return ShortcutCheck(False, f"path {i} uses a vertex outside the graph")
        if path[0] == path[-1]:
            return ShortcutCheck(False, f"path {i} has equal endpoints", path[0])
        if len(set(path)) != len(path):
            return ShortcutCheck(False, f"path {i} repeats a vertex")
        if len(path) - 1 > s.k:
            return ShortcutCheck(False, f"path {i} has length {len(path) - 1} > k={s.k}")
        for a, b in zip(path, path[1:]):
            if not g.has_edge(a, b):
                return ShortcutCheck(False, f"path {i} steps along non-edge ({a}, {b})")
    for v, used in enumerate(s.usage(g.n)):
        if used > s.d:
            return ShortcutCheck(False, f"vertex {v} is interior to {used} paths > d={s.d}", v)
    return ShortcutCheck(True)


def apply_shortcuts(g: Graph, s: ShortcutSystem) -> Graph:
    """``G^P``: ``g`` plus an edge between the endpoints of every shortcut."""
    check = validate_shortcuts(g, s)
    if not check:
        raise ContractError(f"invalid shortcut system: {check.violation}")
    extra = [(p[0], p[-1]) for p in s.paths]
    return Graph.from_edges(g.n, g.edges() + extra, g.coords)


def _bfs_tree(g: Graph, root: int, depth: int) -> tuple[dict[int, int], dict[int, int]]:
    dist = {root: 0}
    parent = {root: root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        if dist[u] == depth:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    # smallest-id parent one layer closer to the root
    for w, dw in dist.items():
        if dw:
            parent[w] = min(u for u in g.adj[w] if dist.get(u) == dw - 1)
    return dist, parent


def power_shortcut_system(g: Graph, k: int) -> ShortcutSystem:
    """One shortest path for every pair at distance ``2..k``, so that ``G^P = G^k``.

    Paths run from the smaller endpoint, following smallest-id BFS parents back
    from the larger one.  The declared bounds are ``(k, 2 k Δ^k)``.
    """
    if k < 2:
        raise ContractError("k must be at least 2")
    paths = []
    for v in range(g.n):
        dist, parent = _bfs_tree(g, v, k)
        for w in sorted(dist):
            if w <= v or dist[w] < 2:
                continue
            path = [w]
            while path[-1] != v:
                path.append(parent[path[-1]])
            paths.append(tuple(reversed(path)))
    return ShortcutSystem(tuple(paths), k, 2 * k * g.max_degree() ** k)
