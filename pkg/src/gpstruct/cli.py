"""Command-line entry point: ``gps <group> <command> ...``.

Every command writes one canonical JSON document (stdout, or ``--out``).
Exit status is 0 on success, 1 when a contract or checked bound fails, and
2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import colouring, decomposition, geometry, localise, separators, shortcuts, testgen
from .errors import ContractError, GPSError, InputError
from .graph import Graph, cartesian_product, graph_power, strong_product
from .io import (
    dumps_json,
    graph_to_obj,
    read_graph,
    read_int_list,
    read_json,
    read_points,
    read_weights,
)

log = logging.getLogger("gpstruct")


@dataclass
class RunConfig:
    group: str
    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    figure: str | None = None
    fmt: str = "auto"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in ("k", "n", "r", "max_draws"):
            val = self.params.get(key)
            if val is not None and val <= 0:
                raise ContractError(f"--{key.replace('_', '-')} must be positive")
        if self.seed < 0 or self.seed >= 2**64:
            raise ContractError("--seed must be a 64-bit unsigned integer")


class Outcome:
    """A JSON document plus the first failed check, if any."""

    def __init__(self, doc: dict, failure: str | None = None):
        self.doc = doc
        self.failure = failure


def _bounds_failure(bounds: dict) -> str | None:
    for name, b in sorted(bounds.items()):
        if not b.get("holds", True):
            return f"bound {name} violated: {b['lhs']} vs {b['rhs']}"
    return None


def _graph(cfg: RunConfig, i: int = 0) -> Graph:
    return read_graph(cfg.inputs[i], cfg.fmt)


def _unwrap(obj, key: str):
    """Accept either a bare object or a report that nests it under ``key``."""
    if isinstance(obj, dict) and isinstance(obj.get(key), dict):
        return obj[key]
    return obj


def _td(path) -> decomposition.TreeDecomposition:
    try:
        return decomposition.TreeDecomposition.from_obj(_unwrap(read_json(path), "td"))
    except ContractError as exc:
        raise InputError(str(exc)) from exc


def _polynomial(cfg: RunConfig) -> separators.Polynomial:
    poly = cfg.params.get("growth_poly")
    if poly:
        try:
            coeffs = tuple(int(x) for x in poly.split(","))
        except ValueError as exc:
            raise InputError(f"--growth-poly must be comma-separated integers: {exc}") from exc
        if any(a < 0 for a in coeffs):
            raise ContractError("growth polynomial coefficients must be non-negative")
        return separators.Polynomial(coeffs)
    c = cfg.params.get("growth_c")
    if c is None or c < 1:
        raise ContractError("give --growth-c (g(r) = r^c) or --growth-poly")
    return separators.Polynomial.monomial(c)


# -- handlers ----------------------------------------------------------------


def _product(cfg: RunConfig) -> Outcome:
    a, b = _graph(cfg, 0), _graph(cfg, 1)
    op = strong_product if cfg.command == "strong" else cartesian_product
    g = op(a, b)
    expect = a.n * b.m + b.n * a.m + (2 * a.m * b.m if cfg.command == "strong" else 0)
    bounds = {
        "vertex_count": {"lhs": g.n, "rhs": a.n * b.n, "holds": g.n == a.n * b.n},
        "edge_count": {"lhs": g.m, "rhs": expect, "holds": g.m == expect},
    }
    return Outcome({"graph": graph_to_obj(g), "bounds": bounds}, _bounds_failure(bounds))


def _td_cmd(cfg: RunConfig) -> Outcome:
    g = _graph(cfg)
    if cfg.command == "exact":
        width, td = decomposition.exact_treewidth(g)
        return Outcome({"width": width, "td": td.to_obj(), "method": "exact"})
    if cfg.command == "heuristic":
        width, td = decomposition.heuristic_treewidth(g)
        return Outcome({"width": width, "td": td.to_obj(), "method": "min-fill"})
    if cfg.command == "validate":
        td = _td(cfg.inputs[1])
        res = decomposition.validate_td(g, td)
        doc = {"valid": res.ok, "axiom": res.axiom, "detail": res.detail, "width": td.width}
        return Outcome(doc, None if res.ok else f"{res.axiom}: {res.detail}")
    # separator
    td = _td(cfg.params["td"]) if cfg.params.get("td") else decomposition.heuristic_treewidth(g)[1]
    sep = decomposition.separator_from_td(g, td)
    bounds = {
        "order": {"lhs": sep.order, "rhs": td.width + 1, "holds": sep.order <= td.width + 1},
        "balance": {
            "lhs": max(len(sep.strict1), len(sep.strict2)),
            "rhs": decomposition.balance_limit(g.n),
            "holds": sep.balanced,
        },
    }
    return Outcome({"separation": sep.to_obj(), "bounds": bounds}, _bounds_failure(bounds))


def _separate(cfg: RunConfig) -> Outcome:
    g = _graph(cfg)
    if cfg.command == "layered":
        h = read_graph(cfg.params["h"], cfg.fmt) if cfg.params.get("h") else None
        rep = separators.layered_deletion(g, _td(cfg.params["h_td"]), h)
        if cfg.figure:
            from .plotting import plot_layered

            plot_layered(g, rep, cfg.figure)
        doc = rep.to_obj()
        return Outcome(doc, _bounds_failure(doc["bounds"]))
    g1 = read_graph(cfg.params["g1"], cfg.fmt)
    g2 = read_graph(cfg.params["g2"], cfg.fmt)
    sep = separators.combined_separator(
        g, g1, g2, _polynomial(cfg), cfg.params["beta"], cfg.seed,
        max_draws=cfg.params.get("max_draws") or localise.DEFAULT_MAX_DRAWS,
    )
    bounds = sep.extra.get("bounds", {})
    doc = {"separation": sep.to_obj(), "bounds": bounds,
           **{k: v for k, v in sep.extra.items() if k != "bounds"}}
    return Outcome(doc, _bounds_failure(bounds))


def _localise(cfg: RunConfig) -> Outcome:
    if cfg.command == "radius":
        c = cfg.params["c"]
        r0 = localise.min_valid_radius(c)
        dist = localise.cor_frac_distribution(r0, c)
        bounds = {
            "growth_condition": {"lhs": r0, "rhs": "p(1+q)^r > 1", "holds": localise.radius_condition(r0, c)},
            "previous_fails": {"lhs": r0 - 1, "rhs": "p(1+q)^r <= 1",
                               "holds": not localise.radius_condition(r0 - 1, c)},
            "sum_to_one": {"lhs": str(dist.total), "rhs": "1", "holds": dist.valid},
        }
        return Outcome({"c": c, "r0": r0, "bounds": bounds}, _bounds_failure(bounds))
    g = _graph(cfg)
    if cfg.command == "sample":
        dist = localise.build_distribution(cfg.params["r"], cfg.params["p"], cfg.params["q"])
        if not dist.valid:
            raise ContractError(f"distribution sums to {dist.total}, not 1")
        loc = localise.sample_localising(g, dist, cfg.seed)
        if cfg.figure:
            from .plotting import plot_localising

            plot_localising(g, loc.members, cfg.figure, f"r={dist.r} localising set, seed {cfg.seed}")
        problem = localise.localising_violation(g, loc.members, dist.r)
        bounds = {"localising": {"lhs": len(loc.members), "rhs": "exact check", "holds": problem is None}}
        doc = {"seed": cfg.seed, "distribution": dist.to_obj(), **loc.to_obj(), "bounds": bounds}
        return Outcome(doc, problem)
    # fragment
    poly = _polynomial(cfg)
    c = poly.degree + 1
    r = cfg.params.get("r") or localise.min_valid_radius(c)
    weights = read_weights(cfg.params["weights"]) if cfg.params.get("weights") else [1] * g.n
    frag = localise.weighted_fragment(
        g, weights, r, poly(r), c, cfg.seed,
        cfg.params.get("max_draws") or localise.DEFAULT_MAX_DRAWS,
    )
    if cfg.figure:
        from .plotting import plot_localising

        plot_localising(g, frag.members, cfg.figure, f"weighted fragment, r={r}")
    doc = frag.to_obj()
    doc["c"] = c
    return Outcome(doc, _bounds_failure(doc["bounds"]))


def _ordering(path, n: int) -> colouring.VertexOrdering:
    order = read_int_list(path)
    if len(order) != n:
        raise ContractError(f"ordering has {len(order)} entries for {n} vertices")
    return colouring.VertexOrdering(tuple(order))


def _colr(cfg: RunConfig) -> Outcome:
    g = _graph(cfg)
    r = cfg.params["r"]
    if cfg.command == "exact":
        val, ordering = colouring.exact_colr(g, r)
        return Outcome({"r": r, "colr": val, "order": list(ordering.order)})
    ordering = _ordering(cfg.params["order"], g.n) if cfg.params.get("order") else colouring.VertexOrdering.identity(g.n)
    val = colouring.eval_colr(g, ordering, r)
    if cfg.command == "eval":
        return Outcome({"r": r, "value": val, "order": list(ordering.order)})
    h = read_graph(cfg.params["h"], cfg.fmt)
    prod = strong_product(g, h)
    pord = colouring.product_ordering(ordering, h)
    pval = colouring.eval_colr(prod, pord, r)
    rhs = colouring.colproduct_bound(val, h.max_degree(), r)
    bounds = {"colproduct": {"lhs": pval, "rhs": rhs, "holds": pval < rhs}}
    doc = {"r": r, "value_g": val, "value_product": pval, "order": list(pord.order), "bounds": bounds}
    return Outcome(doc, _bounds_failure(bounds))


def _shortcut(cfg: RunConfig) -> Outcome:
    g = _graph(cfg)
    if cfg.command == "power":
        k = cfg.params["k"]
        system = shortcuts.power_shortcut_system(g, k)
        check = shortcuts.validate_shortcuts(g, system)
        usage = max(system.usage(g.n), default=0)
        longest = max((len(p) - 1 for p in system.paths), default=0)
        same = shortcuts.apply_shortcuts(g, system).edges() == graph_power(g, k).edges()
        bounds = {
            "usage": {"lhs": usage, "rhs": system.d, "holds": usage <= system.d},
            "length": {"lhs": longest, "rhs": k, "holds": longest <= k},
            "power_equivalence": {"lhs": "E(G^P)", "rhs": "E(G^k)", "holds": same},
        }
        doc = {"system": system.to_obj(), "valid": check.ok, "bounds": bounds}
        return Outcome(doc, _bounds_failure(bounds))
    try:
        system = shortcuts.ShortcutSystem.from_obj(_unwrap(read_json(cfg.inputs[1]), "system"))
    except ContractError as exc:
        raise InputError(str(exc)) from exc
    if cfg.command == "validate":
        check = shortcuts.validate_shortcuts(g, system)
        doc = {"valid": check.ok, "violation": check.violation, "vertex": check.vertex,
               "usage": system.usage(g.n)}
        return Outcome(doc, check.violation)
    return Outcome({"graph": graph_to_obj(shortcuts.apply_shortcuts(g, system))})


def _geo(cfg: RunConfig) -> Outcome:
    points = read_points(cfg.inputs[0])
    if cfg.command == "udg":
        return Outcome({"graph": graph_to_obj(geometry.unit_disc_graph(points))})
    if cfg.command == "knn":
        return Outcome({"graph": graph_to_obj(geometry.knn_graph(points, cfg.params["k"]))})
    emb = geometry.embed_unit_disc(points, cfg.params["k"])
    g = geometry.unit_disc_graph(points)
    if cfg.figure:
        from .plotting import plot_embedding

        plot_embedding(points, emb, g, cfg.figure)
    problem = geometry.embedding_violation(points, emb, g)
    occupancy = {}
    for img in emb.images:
        occupancy[img[:-1]] = occupancy.get(img[:-1], 0) + 1
    top = max(occupancy.values(), default=0)
    bounds = {
        "embedding": {"lhs": "images", "rhs": f"Z^{emb.d} x K_{emb.t}", "holds": problem is None},
        "cell_occupancy": {"lhs": top, "rhs": emb.t, "holds": top <= emb.t},
    }
    doc = {**emb.to_obj(), "k": cfg.params["k"], "bounds": bounds}
    return Outcome(doc, problem or _bounds_failure(bounds))


def _witness(cfg: RunConfig) -> Outcome:
    n = cfg.params["n"]
    if cfg.command == "star-cartesian":
        rep = testgen.star_cartesian_subdivision_witness(n)
    else:
        rep = testgen.strong_star_binary_tree_witness(n)
    return Outcome(rep.to_obj(), rep.failure)


HANDLERS = {
    "product": _product,
    "td": _td_cmd,
    "separate": _separate,
    "localise": _localise,
    "colr": _colr,
    "shortcut": _shortcut,
    "geo": _geo,
    "witness": _witness,
}


def run(cfg: RunConfig) -> int:
    try:
        outcome = HANDLERS[cfg.group](cfg)
        text = dumps_json(outcome.doc)
        if cfg.out:
            try:
                Path(cfg.out).write_text(text)
            except OSError as exc:
                raise InputError(f"cannot write {cfg.out}: {exc.strerror or exc}") from exc
        else:
            sys.stdout.write(text)
        if outcome.failure:
            print(outcome.failure, file=sys.stderr)
            return 1
        return 0
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ContractError as exc:
        print(str(exc), file=sys.stderr)
        return 1


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["auto", "text", "json"], default="auto",
                        help="format of graph inputs")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="gps", description="Graph product structure toolkit")
    groups = parser.add_subparsers(dest="group", required=True)

    def cmd(group, name, inputs=(), figure=False, **_):
        p = group.add_parser(name, parents=[common])
        for i in inputs:
            p.add_argument(i)
        if figure:
            p.add_argument("--figure", help="also render a PNG figure here")
        return p

    g = groups.add_parser("product").add_subparsers(dest="command", required=True)
    cmd(g, "strong", ["a", "b"])
    cmd(g, "cartesian", ["a", "b"])

    g = groups.add_parser("td").add_subparsers(dest="command", required=True)
    cmd(g, "exact", ["graph"])
    cmd(g, "heuristic", ["graph"])
    cmd(g, "validate", ["graph", "decomposition"])
    cmd(g, "separator", ["graph"]).add_argument("--td")

    g = groups.add_parser("separate").add_subparsers(dest="command", required=True)
    p = cmd(g, "layered", ["graph"], figure=True)
    p.add_argument("--h-td", required=True)
    p.add_argument("--h")
    p = cmd(g, "combined", ["graph"])
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--growth-c", type=int)
    p.add_argument("--growth-poly")
    p.add_argument("--max-draws", type=int)

    g = groups.add_parser("localise").add_subparsers(dest="command", required=True)
    p = cmd(g, "sample", ["graph"], figure=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=str, required=True)
    p.add_argument("--q", type=str, required=True)
    p = cmd(g, "fragment", ["graph"], figure=True)
    p.add_argument("--r", type=int)
    p.add_argument("--weights")
    p.add_argument("--growth-c", type=int)
    p.add_argument("--growth-poly")
    p.add_argument("--max-draws", type=int)
    cmd(g, "radius").add_argument("--c", type=int, required=True)

    g = groups.add_parser("colr").add_subparsers(dest="command", required=True)
    for name in ("eval", "exact", "product"):
        p = cmd(g, name, ["graph"])
        p.add_argument("--r", type=int, required=True)
        if name != "exact":
            p.add_argument("--order")
        if name == "product":
            p.add_argument("--h", required=True)

    g = groups.add_parser("shortcut").add_subparsers(dest="command", required=True)
    cmd(g, "power", ["graph"]).add_argument("--k", type=int, required=True)
    cmd(g, "apply", ["graph", "system"])
    cmd(g, "validate", ["graph", "system"])

    g = groups.add_parser("geo").add_subparsers(dest="command", required=True)
    cmd(g, "udg", ["points"])
    cmd(g, "embed", ["points"], figure=True).add_argument("--k", type=int, required=True)
    cmd(g, "knn", ["points"]).add_argument("--k", type=int, required=True)

    g = groups.add_parser("witness").add_subparsers(dest="command", required=True)
    cmd(g, "star-cartesian").add_argument("--n", type=int, required=True)
    cmd(g, "star-strong").add_argument("--n", type=int, required=True)
    return parser


_INPUT_NAMES = ("a", "b", "graph", "decomposition", "system", "points")
_SKIP = {"group", "command", "fmt", "out", "seed", "verbose", "figure", *_INPUT_NAMES}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = [getattr(ns, k) for k in _INPUT_NAMES if getattr(ns, k, None) is not None]
    params = {k: v for k, v in vars(ns).items() if k not in _SKIP}
    return RunConfig(ns.group, ns.command, inputs, ns.out, getattr(ns, "figure", None), ns.fmt, ns.seed, params)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
    except ContractError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    log.debug("running %s %s", cfg.group, cfg.command)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
