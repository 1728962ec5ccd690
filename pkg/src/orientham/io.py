"""Edge-list, JSON and DOT serialisation.

Edge list::

    n m
    u v
    ...

JSON: ``{"n": int, "edges": [[u, v], ...], "partition": {"0": "A", ...}}``
with ``partition`` optional. Both are written in canonical form (edges sorted
lexicographically) so that el -> json -> el round-trips byte for byte. DOT is
export only.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Digraph, FourPartition, GraphError, OrientedGraph

DOT_COLORS = {"A": "red", "B": "blue", "C": "green", "D": "yellow"}


class FormatError(ValueError):
    """Input text does not follow the declared format."""


def _make_graph(n: int, edges: list[tuple[int, int]], oriented: bool | None) -> Digraph:
    try:
        graph = Digraph.from_edges(n, edges)
        if oriented is None:
            oriented = graph.is_digon_free()
        return OrientedGraph.from_edges(n, edges) if oriented else graph
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


def to_edge_list(graph: Digraph) -> str:
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, oriented: bool | None = None) -> Digraph:
    """Parse the edge-list format.

    With ``oriented=None`` the result is an :class:`OrientedGraph` whenever the
    edges allow it.
    """
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty edge list")
    try:
        header = [int(tok) for tok in rows[0]]
        body = [tuple(int(tok) for tok in row) for row in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"non-integer token in edge list: {exc}") from exc
    if len(header) != 2:
        raise FormatError("edge list header must be 'n m'")
    n, m = header
    if len(body) != m:
        raise FormatError(f"header announces {m} edges but {len(body)} follow")
    if any(len(row) != 2 for row in body):
        raise FormatError("every edge line must contain exactly two vertex ids")
    if len(set(body)) != len(body):
        raise FormatError("duplicate edge in edge list")
    return _make_graph(n, body, oriented)  # type: ignore[arg-type]


def to_json_obj(graph: Digraph, part: FourPartition | None = None) -> dict:
    obj: dict = {"n": graph.n, "edges": [[u, v] for u, v in graph.edges()]}
    if part is not None:
        obj["partition"] = {str(v): c for v, c in enumerate(part.class_of)}
    return obj


def to_json(graph: Digraph, part: FourPartition | None = None) -> str:
    return json.dumps(to_json_obj(graph, part)) + "\n"


def from_json_obj(obj: dict, oriented: bool | None = None) -> tuple[Digraph, FourPartition | None]:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise FormatError("graph JSON needs 'n' and 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise FormatError("'n' must be a non-negative integer")
    try:
        edges = [(int(u), int(v)) for u, v in obj["edges"]]
    except (TypeError, ValueError) as exc:
        raise FormatError("'edges' must be a list of [u, v] pairs") from exc
    if len(set(edges)) != len(edges):
        raise FormatError("duplicate edge in JSON graph")
    graph = _make_graph(n, edges, oriented)
    part = None
    if obj.get("partition") is not None:
        try:
            part = FourPartition.from_mapping(n, {int(k): v for k, v in obj["partition"].items()})
        except (GraphError, ValueError, AttributeError) as exc:
            raise FormatError(f"bad partition: {exc}") from exc
    return graph, part


def parse_json(text: str, oriented: bool | None = None) -> tuple[Digraph, FourPartition | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_json_obj(obj, oriented)


def to_dot(graph: Digraph, part: FourPartition | None = None, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(graph.n):
        if part is not None:
            color = DOT_COLORS[part.class_of[v]]
            lines.append(f'  {v} [label="{v}:{part.class_of[v]}", style=filled, fillcolor={color}];')
        else:
            lines.append(f"  {v};")
    lines.extend(f"  {u} -> {v};" for u, v in graph.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(graph: Digraph, fmt: str, part: FourPartition | None = None) -> str:
    if fmt == "el":
        return to_edge_list(graph)
    if fmt == "json":
        return to_json(graph, part)
    if fmt == "dot":
        return to_dot(graph, part)
    raise ValueError(f"unknown format {fmt!r}")


def guess_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".dot":
        return "dot"
    return "el"


def load_graph(path: str | Path, fmt: str | None = None) -> tuple[Digraph, FourPartition | None]:
    fmt = fmt or guess_format(path)
    text = Path(path).read_text()
    if fmt == "el":
        return parse_edge_list(text), None
    if fmt == "json":
        return parse_json(text)
    raise FormatError(f"cannot read format {fmt!r} (DOT is export-only)")
