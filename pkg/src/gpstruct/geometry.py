"""Unit-disc and k-nearest-neighbour graphs, and embedding unit-disc graphs into ``Z^d ⊠ K_t``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import ContractError
from .graph import Graph

Point = tuple[float, ...]


def _dimension(points: Sequence[Point]) -> int:
    if not points:
        return 0
    d = len(points[0])
    for i, p in enumerate(points):
        if len(p) != d:
            raise ContractError(f"point {i} has dimension {len(p)}, expected {d}")
        if not all(math.isfinite(x) for x in p):
            raise ContractError(f"point {i} has a non-finite coordinate")
    return d


def squared_distance_exact(a: Point, b: Point) -> Fraction:
    return sum(((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(a, b)), Fraction(0))


def within_unit(a: Point, b: Point) -> bool:
    """``dist(a, b) <= 1`` decided on squared distances, exactly near the threshold."""
    sq = sum((x - y) ** 2 for x, y in zip(a, b))
    if abs(sq - 1.0) > 1e-9:
        return sq < 1.0
    return squared_distance_exact(a, b) <= 1


def unit_disc_graph(points: Sequence[Point]) -> Graph:
    """Join two points when their Euclidean distance is at most 1."""
    n = len(points)
    d = _dimension(points)
    if n < 2:
        return Graph(n, [[] for _ in range(n)])
    if d == 0:
        return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    tree = cKDTree(np.asarray(points, dtype=float))
    candidates = tree.query_pairs(1.0 + 1e-7, output_type="ndarray")
    edges = [(int(i), int(j)) for i, j in candidates if within_unit(points[i], points[j])]
    return Graph.from_edges(n, edges)


def knn_graph(points: Sequence[Point], k: int) -> Graph:
    """Symmetric k-nearest-neighbour graph; distance ties go to the lower index."""
    if k < 1:
        raise ContractError("k must be at least 1")
    n = len(points)
    _dimension(points)
    if n < 2:
        return Graph(n, [[] for _ in range(n)])
    X = np.asarray(points, dtype=float)
    edges = []
    for i in range(n):
        sq = ((X - X[i]) ** 2).sum(axis=1)
        others = [j for j in range(n) if j != i]
        # lexsort: last key is primary
        order = np.lexsort((np.array(others), sq[others]))
        for j in order[:k]:
            edges.append((i, others[j]))
    return Graph.from_edges(n, edges)


def isqrt_ceil(d: int) -> int:
    s = math.isqrt(d)
    return s if s * s == d else s + 1


def clique_size_bound(d: int, k: int) -> int:
    """``t = k * ceil(sqrt(d))^d``."""
    return k * isqrt_ceil(d) ** d


def cell_of(p: Point) -> tuple[int, ...]:
    return tuple(math.floor(x) for x in p)


def subcube_of(p: Point, s: int) -> tuple[int, ...]:
    """Index of the side-``1/s`` sub-cube of ``p``'s unit cell (half-open)."""
    out = []
    for x in p:
        f = Fraction(x) - math.floor(x)
        out.append(min(s - 1, math.floor(f * s)))
    return tuple(out)


@dataclass(frozen=True)
class ProductEmbedding:
    d: int
    t: int
    images: tuple[tuple[int, ...], ...]  # (p_1, ..., p_d, label) with label in 1..t

    def to_obj(self) -> dict:
        cells: dict[tuple, list] = {}
        for v, img in enumerate(self.images):
            cells.setdefault(img[:-1], []).append([v, img[-1]])
        return {
            "d": self.d,
            "t": self.t,
            "images": [list(img) for img in self.images],
            "cells": [{"cell": list(c), "labels": vs} for c, vs in sorted(cells.items())],
        }


class EmbeddingError(ContractError):
    def __init__(self, message: str, cell=None, subcube=None, clique=None):
        super().__init__(message)
        self.cell = cell
        self.subcube = subcube
        self.clique = clique


def embed_unit_disc(points: Sequence[Point], k: int) -> ProductEmbedding:
    """Map each point to ``(floor cell, label)`` in ``Z^d ⊠ K_t`` with ``t = k ceil(sqrt d)^d``.

    Each unit cell splits into ``ceil(sqrt d)^d`` sub-cubes of diameter at
    most 1; the points of one sub-cube are a clique, so a sub-cube with more
    than ``k`` points certifies a ``(k+1)``-clique and the call fails.
    Labels inside a cell follow ascending point index.
    """
    if k < 1:
        raise ContractError("k must be at least 1")
    d = _dimension(points)
    if not points:
        return ProductEmbedding(d, 0 if d == 0 else clique_size_bound(d, k), ())
    if d == 0:
        raise ContractError("points must have dimension at least 1")
    s = isqrt_ceil(d)
    t = k * s**d
    cells: dict[tuple[int, ...], list[int]] = {}
    subcubes: dict[tuple, list[int]] = {}
    for v, p in enumerate(points):
        c = cell_of(p)
        cells.setdefault(c, []).append(v)
        subcubes.setdefault((c, subcube_of(p, s)), []).append(v)
    for (c, sc), vs in sorted(subcubes.items()):
        if len(vs) > k:
            clique = vs[: k + 1]
            for i, a in enumerate(clique):
                for b in clique[i + 1:]:
                    if not within_unit(points[a], points[b]):
                        raise AssertionError(f"sub-cube points {a}, {b} are farther apart than 1")
            raise EmbeddingError(
                f"cell {list(c)} sub-cube {list(sc)} holds {len(vs)} points, a clique larger than k={k}",
                c, sc, clique,
            )
    images: list[tuple[int, ...] | None] = [None] * len(points)
    for c, vs in cells.items():
        if len(vs) > t:
            raise AssertionError(f"cell {c} holds {len(vs)} > t={t} points")
        for label, v in enumerate(sorted(vs), start=1):
            images[v] = c + (label,)
    return ProductEmbedding(d, t, tuple(images))


def embedding_violation(points: Sequence[Point], emb: ProductEmbedding, g: Graph | None = None) -> str | None:
    """Check injectivity, label range and edge preservation into ``Z^d ⊠ K_t``."""
    if len(emb.images) != len(points):
        return "image count differs from point count"
    if len(set(emb.images)) != len(emb.images):
        return "images are not distinct"
    for v, img in enumerate(emb.images):
        if len(img) != emb.d + 1:
            return f"image of {v} has arity {len(img)}"
        if not 1 <= img[-1] <= emb.t:
            return f"label of {v} outside 1..{emb.t}"
    g = unit_disc_graph(points) if g is None else g
    for u, v in g.edges():
        a, b = emb.images[u], emb.images[v]
        if any(abs(x - y) > 1 for x, y in zip(a[:-1], b[:-1])):
            return f"edge ({u}, {v}) maps to grid-distant cells"
        if a == b:
            return f"edge ({u}, {v}) maps to a single vertex"
    return None
