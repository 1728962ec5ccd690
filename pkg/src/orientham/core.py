"""Graph data model shared by every other module.

Vertices are dense integers ``0..n-1``. Graphs are immutable once built; use
:class:`GraphBuilder` (or the ``from_edges`` constructors) to assemble them.
Adjacency is kept in both directions, plus lazily built bitmasks so that
neighbourhood unions and membership tests are cheap integer operations.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Collection, Iterable, Iterator, Mapping, Sequence
from functools import cached_property
from typing import NamedTuple

CLASSES = ("A", "B", "C", "D")


class GraphError(ValueError):
    """Raised for malformed graphs, paths or partitions."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Digraph:
    """Loop-free directed graph on ``0..n-1`` with out- and in-adjacency.

    ``out_lists[v]`` lists the out-neighbours of ``v``; duplicates are merged
    and every list is stored sorted. Anti-parallel pairs (digons) are allowed
    here but rejected by :class:`OrientedGraph`.
    """

    def __init__(self, n: int, out_lists: Sequence[Iterable[int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        if out_lists and len(out_lists) != n:
            raise GraphError(f"expected {n} adjacency lists, got {len(out_lists)}")
        self.n = n
        out: list[tuple[int, ...]] = []
        ins: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            row = tuple(sorted(set(out_lists[u]))) if out_lists else ()
            if row and (row[0] < 0 or row[-1] >= n):
                raise GraphError(f"edge from {u} leaves the vertex range 0..{n - 1}")
            for v in row:
                if v == u:
                    raise GraphError(f"self-loop at vertex {u}")
                ins[v].append(u)
            out.append(row)
        self._out = tuple(out)
        # u increases monotonically above, so every in-list is already sorted
        self._in = tuple(tuple(row) for row in ins)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]):
        out_lists: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) leaves the vertex range 0..{n - 1}")
            out_lists[u].append(v)
        return cls(n, out_lists)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(row) for row in self._out)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(row) for row in self._in)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    @property
    def m(self) -> int:
        return sum(len(row) for row in self._out)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges in canonical lexicographic order."""
        for u, row in enumerate(self._out):
            for v in row:
                yield u, v

    def out_neighborhood(self, vertices: Iterable[int]) -> set[int]:
        """``N+(S)``: every vertex with an in-edge from some vertex of ``S``."""
        masks = self.out_masks
        acc = 0
        for v in vertices:
            acc |= masks[v]
        return set(bits(acc))

    def is_digon_free(self) -> bool:
        outs, ins = self.out_masks, self.in_masks
        return all(outs[v] & ins[v] == 0 for v in range(self.n))

    def is_tournament(self) -> bool:
        if not self.is_digon_free():
            return False
        full = (1 << self.n) - 1
        outs, ins = self.out_masks, self.in_masks
        return all((outs[v] | ins[v] | 1 << v) == full for v in range(self.n))

    def induced(self, vertices: Iterable[int]) -> tuple[Digraph, list[int]]:
        """Induced subgraph ``G[S]``, relabelled; returns it and the old ids."""
        keep = sorted(set(vertices))
        new_id = {v: i for i, v in enumerate(keep)}
        rows = [[new_id[w] for w in self._out[v] if w in new_id] for v in keep]
        return type(self)(len(keep), rows), keep

    def without_vertices(self, vertices: Iterable[int]) -> tuple[Digraph, list[int]]:
        """``G - S``: delete ``S`` and every incident edge."""
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def with_edges(self, add: Iterable[tuple[int, int]] = (), remove: Iterable[tuple[int, int]] = ()):
        """A new graph of the same type with edges added and removed."""
        rows = [set(row) for row in self._out]
        for u, v in remove:
            rows[u].discard(v)
        for u, v in add:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) leaves the vertex range 0..{self.n - 1}")
            rows[u].add(v)
        return type(self)(self.n, rows)

    def as_digraph(self) -> Digraph:
        return Digraph(self.n, self._out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self._out == other._out

    def __hash__(self) -> int:
        return hash((self.n, self._out))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, m={self.m})"


class OrientedGraph(Digraph):
    """A digraph with neither loops nor anti-parallel edge pairs."""

    def __init__(self, n: int, out_lists: Sequence[Iterable[int]] = ()):
        super().__init__(n, out_lists)
        if not self.is_digon_free():
            u = next(v for v in range(n) if self.out_masks[v] & self.in_masks[v])
            w = next(bits(self.out_masks[u] & self.in_masks[u]))
            raise GraphError(f"digon between {u} and {w}: not an oriented graph")


class GraphBuilder:
    """Mutable edge accumulator; ``build()`` freezes it into a graph.

    With ``oriented=True`` any insertion that would create a loop or a digon
    raises immediately.
    """

    def __init__(self, n: int, oriented: bool = True):
        self.n = n
        self.oriented = oriented
        self._out: list[set[int]] = [set() for _ in range(n)]

    def add_edge(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) leaves the vertex range 0..{self.n - 1}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if self.oriented and u in self._out[v]:
            raise GraphError(f"adding {u}->{v} would create a digon")
        self._out[u].add(v)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> None:
        for u, v in edges:
            self.add_edge(u, v)

    def remove_edge(self, u: int, v: int) -> None:
        self._out[u].discard(v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def build(self) -> Digraph:
        cls = OrientedGraph if self.oriented else Digraph
        return cls(self.n, self._out)


@dataclasses.dataclass(frozen=True)
class SemiDegreeReport:
    delta_plus: int
    delta_minus: int
    delta0: int
    delta: int
    delta_star: int


def semi_degree_report(graph: Digraph) -> SemiDegreeReport:
    """Minimum out-, in-, semi-, total degree and their combination ``δ*``.

    Total degree counts ``|N+(x) ∪ N-(x)|``, so a digon contributes once.
    """
    if graph.n < 1:
        raise GraphError("degree report needs at least one vertex")
    outs, ins = graph.out_masks, graph.in_masks
    dplus = min(len(graph.out_neighbors(v)) for v in range(graph.n))
    dminus = min(len(graph.in_neighbors(v)) for v in range(graph.n))
    delta = min((outs[v] | ins[v]).bit_count() for v in range(graph.n))
    return SemiDegreeReport(dplus, dminus, min(dplus, dminus), delta, delta + dplus + dminus)


@dataclasses.dataclass(frozen=True)
class FourPartition:
    """Assignment of every vertex to one of the classes A, B, C, D."""

    class_of: tuple[str, ...]

    def __post_init__(self):
        bad = [c for c in self.class_of if c not in CLASSES]
        if bad:
            raise GraphError(f"unknown partition class {bad[0]!r}")

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, str]) -> FourPartition:
        missing = [v for v in range(n) if v not in mapping]
        if missing or len(mapping) != n:
            raise GraphError(f"partition must cover exactly 0..{n - 1}")
        return cls(tuple(mapping[v] for v in range(n)))

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> FourPartition:
        """Consecutive blocks: first ``sizes[0]`` vertices in A, and so on."""
        return cls(tuple(c for c, s in zip(CLASSES, sizes) for _ in range(s)))

    def members(self, label: str) -> list[int]:
        return [v for v, c in enumerate(self.class_of) if c == label]

    def sizes(self) -> tuple[int, int, int, int]:
        return tuple(self.class_of.count(c) for c in CLASSES)  # type: ignore[return-value]

    def __len__(self) -> int:
        return len(self.class_of)


@dataclasses.dataclass(frozen=True)
class DiPath:
    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("path vertices must be distinct")

    def validate(self, graph: Digraph) -> None:
        if not self.vertices:
            raise GraphError("path must have at least one vertex")
        for v in self.vertices:
            if not 0 <= v < graph.n:
                raise GraphError(f"path vertex {v} is not in the graph")
        for u, v in zip(self.vertices, self.vertices[1:]):
            if not graph.has_edge(u, v):
                raise GraphError(f"{u}->{v} is not an edge, so this is not a path")

    @property
    def initial(self) -> int:
        return self.vertices[0]

    @property
    def final(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)


class Contraction(NamedTuple):
    graph: Digraph
    vertex: int
    relabel: dict[int, int]


def contract_path(
    graph: Digraph,
    path: DiPath | Sequence[int],
    restrict_out: Collection[int] | None = None,
    restrict_in: Collection[int] | None = None,
) -> Contraction:
    """Replace the vertices of ``path`` by a single new vertex ``p``.

    ``N+(p)`` is ``N+(final) ∩ restrict_out`` and ``N-(p)`` is
    ``N-(initial) ∩ restrict_in``; ``None`` means no restriction. The surviving
    vertices keep their relative order and ``p`` gets the largest id.
    ``relabel`` maps every surviving old id to its new id.

    The result keeps the graph's type when that is still valid; contracting an
    oriented graph can create a digon through ``p``, in which case a plain
    :class:`Digraph` is returned.
    """
    if not isinstance(path, DiPath):
        path = DiPath(tuple(path))
    path.validate(graph)
    on_path = set(path.vertices)
    for name, restriction in (("restrict_out", restrict_out), ("restrict_in", restrict_in)):
        if restriction is not None and on_path & set(restriction):
            raise GraphError(f"{name} intersects the contracted path")

    keep = [v for v in range(graph.n) if v not in on_path]
    relabel = {v: i for i, v in enumerate(keep)}
    p = len(keep)
    out_p = [w for w in graph.out_neighbors(path.final) if w not in on_path]
    in_p = [w for w in graph.in_neighbors(path.initial) if w not in on_path]
    if restrict_out is not None:
        allowed = set(restrict_out)
        out_p = [w for w in out_p if w in allowed]
    if restrict_in is not None:
        allowed = set(restrict_in)
        in_p = [w for w in in_p if w in allowed]
    in_p_set = set(in_p)

    rows: list[list[int]] = []
    for v in keep:
        row = [relabel[w] for w in graph.out_neighbors(v) if w not in on_path]
        if v in in_p_set:
            row.append(p)
        rows.append(row)
    rows.append([relabel[w] for w in out_p])

    result = Digraph(p + 1, rows)
    if isinstance(graph, OrientedGraph) and result.is_digon_free():
        result = OrientedGraph(p + 1, rows)
    return Contraction(result, p, relabel)


def is_bd_balanced(path: DiPath | Sequence[int], part: FourPartition) -> bool:
    """True iff the path minus its initial vertex meets B and D equally often."""
    vertices = path.vertices if isinstance(path, DiPath) else tuple(path)
    if not vertices:
        raise GraphError("path must have at least one vertex")
    tail = [part.class_of[v] for v in vertices[1:]]
    return tail.count("B") == tail.count("D")


def strongly_connected_components(graph: Digraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    n = graph.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            row = graph.out_neighbors(v)
            recurse = False
            while i < len(row):
                w = row[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def reachable_mask(out_masks: Sequence[int], source_mask: int, allowed: int) -> int:
    """Vertices of ``allowed`` reachable from ``source_mask`` (sources included)."""
    seen = source_mask
    frontier = source_mask
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= out_masks[v]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


def is_strongly_connected(graph: Digraph) -> bool:
    if graph.n <= 1:
        return True
    full = (1 << graph.n) - 1
    return (
        reachable_mask(graph.out_masks, 1, full) == full
        and reachable_mask(graph.in_masks, 1, full) == full
    )
