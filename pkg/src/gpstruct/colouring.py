"""Strong r-colouring numbers: reachability under an ordering, exact values, product orderings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decomposition import exact_cap
from .errors import CapacityError, ContractError
from .graph import Graph

DEFAULT_COLR_CAP = 10


@dataclass(frozen=True)
class VertexOrdering:
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ContractError("ordering is not a permutation of 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "VertexOrdering":
        return cls(tuple(range(n)))

    @property
    def position(self) -> list[int]:
        pos = [0] * len(self.order)
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos

    def restricted(self, vertices: Sequence[int]) -> "VertexOrdering":
        """Ordering of ``vertices`` (relabelled to ``0..k-1`` by sorted id) inherited from self."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        return VertexOrdering(tuple(index[v] for v in self.order if v in index))


def _check(g: Graph, ord_: VertexOrdering) -> list[int]:
    if len(ord_.order) != g.n:
        raise ContractError(f"ordering has {len(ord_.order)} entries for {g.n} vertices")
    return ord_.position


def _reach(g: Graph, pos: Sequence[int], v: int, r: int) -> set[int]:
    # BFS through vertices after v; endpoints are neighbours that are not after v.
    pv = pos[v]
    out = {v}
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if pos[w] <= pv:
                    out.add(w)
                elif w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return out


def reachable_set(g: Graph, ord_: VertexOrdering, v: int, r: int) -> frozenset[int]:
    """Vertices ``(r, ord)``-reachable from ``v``, including ``v`` itself."""
    pos = _check(g, ord_)
    if not 0 <= v < g.n:
        raise ContractError(f"vertex {v} outside [0, {g.n})")
    if r < 1:
        raise ContractError("radius must be at least 1")
    return frozenset(_reach(g, pos, v, r))


def eval_colr(g: Graph, ord_: VertexOrdering, r: int) -> int:
    """Largest reachable-set size under ``ord_``."""
    pos = _check(g, ord_)
    if r < 1:
        raise ContractError("radius must be at least 1")
    return max((len(_reach(g, pos, v, r)) for v in range(g.n)), default=0)


def _reach_count_given_later(g: Graph, later: int, v: int, r: int) -> int:
    """Reachable-set size of ``v`` when exactly the vertices in bitmask ``later`` come after it."""
    out = 1 << v
    seen = out
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                b = 1 << w
                if later & b:
                    if not seen & b:
                        seen |= b
                        nxt.append(w)
                else:
                    out |= b
        frontier = nxt
    return out.bit_count()


def exact_colr(g: Graph, r: int, cap: int | None = None) -> tuple[int, VertexOrdering]:
    """Exact ``col_r`` with an optimal ordering.

    The reachable set of ``v`` depends only on which vertices come after
    ``v``, so orderings are built from the back: ``best(S)`` is the optimum
    for placing the vertices outside ``S`` in front of the suffix ``S``.
    That is a dynamic program over ``2^n`` suffix sets.
    """
    cap = exact_cap(DEFAULT_COLR_CAP) if cap is None else cap
    if g.n > cap:
        raise CapacityError(f"exact col_r is capped at {cap} vertices (got {g.n})")
    if r < 1:
        raise ContractError("radius must be at least 1")
    n = g.n
    if n == 0:
        return 0, VertexOrdering(())
    full = (1 << n) - 1
    best = [0] * (1 << n)
    choice = [-1] * (1 << n)
    # decreasing popcount: supersets first
    for s in sorted(range(full), key=lambda x: -x.bit_count()):
        val = None
        for v in range(n):
            if s >> v & 1:
                continue
            cand = max(_reach_count_given_later(g, s, v, r), best[s | (1 << v)])
            if val is None or cand < val:
                val, choice[s] = cand, v
        best[s] = val
    order = []
    s = 0
    while s != full:
        v = choice[s]
        order.append(v)
        s |= 1 << v
    # choices were made from the back of the ordering forwards
    return best[0], VertexOrdering(tuple(reversed(order)))


def product_ordering(ord_g: VertexOrdering, h: Graph) -> VertexOrdering:
    """Order ``G ⊠ H`` by G-position first, then H id (ids ``v * |H| + w``)."""
    nh = h.n
    return VertexOrdering(tuple(v * nh + w for v in ord_g.order for w in range(nh)))


def colproduct_bound(colr_g: int, max_degree_h: int, r: int) -> int:
    """Right-hand side ``c (Δ+2)^r`` of the product bound (strict inequality)."""
    return colr_g * (max_degree_h + 2) ** r
