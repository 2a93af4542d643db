"""Figures written next to the JSON reports (``--figure PATH`` on report commands)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .graph import Graph  # noqa: E402

_PNG_META = {"Software": None}


def _xy(g: Graph, drop_last: bool = False):
    """Plane positions from the first two coords; ``drop_last`` skips an H-coordinate."""
    if g.coords is None:
        raise ValueError("plotting needs coordinates")
    cs = [c[:-1] if drop_last else c for c in g.coords]
    if cs and not cs[0]:
        raise ValueError("plotting needs at least one grid coordinate")
    xs = [c[0] for c in cs]
    ys = [c[1] if len(c) > 1 else 0 for c in cs]
    return xs, ys


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META if str(path).endswith(".png") else None)
    plt.close(fig)


def _edges(ax, g: Graph, xs, ys, **kw) -> None:
    for u, v in g.edges():
        ax.plot([xs[u], xs[v]], [ys[u], ys[v]], **kw)


def plot_layered(g: Graph, report, path) -> None:
    """Deleted vertices as red crosses, remaining components coloured."""
    xs, ys = _xy(g, drop_last=True)
    fig, ax = plt.subplots(figsize=(6, 6))
    _edges(ax, g, xs, ys, color="0.8", lw=0.6, zorder=1)
    cmap = plt.get_cmap("tab20")
    for i, comp in enumerate(report.components):
        ax.scatter([xs[v] for v in comp], [ys[v] for v in comp], s=18, color=cmap(i % 20), zorder=2)
    dele = sorted(report.deleted)
    ax.scatter([xs[v] for v in dele], [ys[v] for v in dele], s=28, marker="x", color="red", zorder=3,
               label=f"X ({len(dele)})")
    ax.set_title(f"layered deletion: m={report.m}, width={report.width}")
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    _finish(fig, path)


def plot_localising(g: Graph, members, path, title: str = "r-localising set") -> None:
    xs, ys = _xy(g)
    fig, ax = plt.subplots(figsize=(6, 6))
    _edges(ax, g, xs, ys, color="0.85", lw=0.5, zorder=1)
    inside = [v for v in range(g.n) if v not in members]
    ax.scatter([xs[v] for v in inside], [ys[v] for v in inside], s=12, color="0.4", zorder=2)
    ax.scatter([xs[v] for v in sorted(members)], [ys[v] for v in sorted(members)], s=30,
               color="crimson", zorder=3, label=f"X ({len(members)})")
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    _finish(fig, path)


def plot_embedding(points, emb, g: Graph, path) -> None:
    """Points with unit-cell grid lines; each point annotated with its label."""
    if emb.d not in (1, 2):
        raise ValueError("only 1- and 2-dimensional point sets can be drawn")
    xs = [p[0] for p in points]
    ys = [p[1] if emb.d == 2 else 0.0 for p in points]
    fig, ax = plt.subplots(figsize=(6, 6 if emb.d == 2 else 2.5))
    if points:
        for x in range(int(min(xs)) - 1, int(max(xs)) + 2):
            ax.axvline(x, color="0.9", lw=0.8, zorder=0)
        if emb.d == 2:
            for y in range(int(min(ys)) - 1, int(max(ys)) + 2):
                ax.axhline(y, color="0.9", lw=0.8, zorder=0)
    _edges(ax, g, xs, ys, color="steelblue", lw=0.6, zorder=1)
    ax.scatter(xs, ys, s=16, color="black", zorder=2)
    for v, img in enumerate(emb.images):
        ax.annotate(str(img[-1]), (xs[v], ys[v]), fontsize=7, xytext=(3, 3), textcoords="offset points")
    ax.set_title(f"unit-disc embedding into Z^{emb.d} x K_{emb.t}")
    if emb.d == 2:
        ax.set_aspect("equal")
    _finish(fig, path)
