"""Readers and writers for graphs, decompositions, point sets and shortcut systems.

Text graphs are ``n m`` followed by ``m`` lines ``u v``.  Coordinate-annotated
graphs are JSON objects ``{"n": .., "edges": [[u, v], ..], "coords": [[..], ..]}``.
Writers always emit edges sorted lexicographically with ``u < v``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

from .errors import ContractError, InputError
from .graph import Graph


def dumps_json(obj) -> str:
    """Canonical JSON used for every emitted artifact (stable key order)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def parse_text_graph(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InputError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed text graph: {exc}") from exc
    if len(edges) != m:
        raise InputError(f"header declares {m} edges but {len(edges)} follow")
    try:
        return Graph.from_edges(n, edges)
    except ContractError as exc:
        raise InputError(str(exc)) from exc


def format_text_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def graph_to_obj(g: Graph) -> dict:
    obj = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.coords is not None:
        obj["coords"] = [list(c) for c in g.coords]
    return obj


def graph_from_obj(obj) -> Graph:
    try:
        n = int(obj["n"])
        edges = [(int(u), int(v)) for u, v in obj.get("edges", [])]
        coords = obj.get("coords")
        if coords is not None:
            coords = [tuple(int(x) for x in c) for c in coords]
        return Graph.from_edges(n, edges, coords)
    except (KeyError, TypeError, ValueError, ContractError) as exc:
        raise InputError(f"malformed JSON graph: {exc}") from exc


def parse_json_graph(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return graph_from_obj(obj)


def format_json_graph(g: Graph) -> str:
    return dumps_json(graph_to_obj(g))


def read_graph(path, fmt: str = "auto") -> Graph:
    text = _read(path)
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        return parse_json_graph(text)
    if fmt == "text":
        return parse_text_graph(text)
    raise InputError(f"unknown graph format {fmt!r}")


def write_graph(g: Graph, path, fmt: str = "json") -> None:
    Path(path).write_text(format_json_graph(g) if fmt == "json" else format_text_graph(g))


def read_json(path):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def parse_points_csv(text: str) -> list[tuple[float, ...]]:
    """One point per row; a leading header row of non-numeric names is skipped."""
    points = []
    seen_row = False
    for row in csv.reader(io.StringIO(text)):
        row = [x.strip() for x in row if x.strip()]
        if not row or row[0].startswith("#"):
            continue
        if not seen_row:
            seen_row = True
            if all(_is_name(x) for x in row):
                continue
        try:
            pt = tuple(float(x) for x in row)
        except ValueError as exc:
            raise InputError(f"malformed point row {row}: {exc}") from exc
        if not all(math.isfinite(x) for x in pt):
            raise InputError(f"non-finite coordinate in row {row}")
        if points and len(pt) != len(points[0]):
            raise InputError("point rows have differing dimension")
        points.append(pt)
    return points


def _is_name(x: str) -> bool:
    try:
        float(x)
    except ValueError:
        return True
    return False


def read_points(path) -> list[tuple[float, ...]]:
    return parse_points_csv(_read(path))


def read_int_list(path) -> list[int]:
    """An ordering or vertex list: a JSON array, or whitespace-separated integers."""
    text = _read(path)
    try:
        if text.lstrip().startswith("["):
            return [int(x) for x in json.loads(text)]
        return [int(x) for x in text.split()]
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed integer list in {path}: {exc}") from exc


def read_weights(path) -> list[Fraction]:
    """Vertex weights kept exact: decimal literals become fractions, not floats."""
    text = _read(path)
    try:
        if text.lstrip().startswith("["):
            values = json.loads(text, parse_float=Fraction, parse_int=Fraction)
        else:
            values = text.split()
        out = [Fraction(x) for x in values]
    except (ValueError, TypeError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise InputError(f"malformed weight list in {path}: {exc}") from exc
    if any(w < 0 for w in out):
        raise InputError(f"negative weight in {path}")
    return out
