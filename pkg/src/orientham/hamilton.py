"""Exact Hamilton-cycle search, fixed-length cycles through a vertex, a naive
counting oracle, and greedy removal of edge-disjoint Hamilton cycles.

Small instances (``n <= DP_CUTOFF``) are solved by a subset dynamic programme
over (visited set, endpoint), vectorised with numpy: ``table[mask]`` is the
bitmask of vertices at which a path from the start vertex covering exactly
``mask`` can end. The DP is exhaustive, so it never answers UNKNOWN. Larger
instances use backtracking with two prunes on the residual instance (the
path so far contracted to one vertex): strong connectivity at every node and
1-factor existence at the root and then every ``FACTOR_CHECK_PERIOD`` nodes.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
from collections.abc import Sequence

import numpy as np

from .core import Digraph, GraphError, bits, reachable_mask
from .factor import maximum_matching

DP_CUTOFF = 20
FACTOR_CHECK_PERIOD = 64
ORACLE_MAX_N = 11


class Status(str, enum.Enum):
    FOUND = "FOUND"
    NONE = "NONE"
    UNKNOWN = "UNKNOWN"


@dataclasses.dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10_000_000
    mode: str = "auto"  # auto | dp | backtrack

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.mode not in ("auto", "dp", "backtrack"):
            raise ValueError(f"unknown search mode {self.mode!r}")


@dataclasses.dataclass(frozen=True)
class SearchResult:
    status: Status
    cycle: tuple[int, ...] | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def is_cycle(graph: Digraph, order: Sequence[int]) -> bool:
    """``order`` is a directed cycle of ``graph`` on distinct vertices."""
    if len(order) < 2 or len(set(order)) != len(order):
        return False
    if any(not 0 <= v < graph.n for v in order):
        return False
    return all(graph.has_edge(order[i], order[(i + 1) % len(order)]) for i in range(len(order)))


def is_hamilton_cycle(graph: Digraph, order: Sequence[int]) -> bool:
    return len(order) == graph.n and is_cycle(graph, order)


# --------------------------------------------------------------------------
# subset DP


def _path_table(graph: Digraph, start: int, max_size: int) -> np.ndarray:
    """``table[mask]``: endpoints of paths from ``start`` covering exactly ``mask``.

    Only masks with at most ``max_size`` vertices are filled in.
    """
    n = graph.n
    masks = np.arange(1 << n, dtype=np.int64)
    sizes = np.bitwise_count(masks)
    table = np.zeros(1 << n, dtype=np.uint32)
    table[1 << start] = 1 << start
    in_masks = np.array(graph.in_masks, dtype=np.uint32)
    has_start = (masks >> start) & 1 == 1
    for size in range(1, max_size):
        layer = masks[(sizes == size) & has_start]
        layer = layer[table[layer] != 0]
        if layer.size == 0:
            break
        ends = table[layer]
        for w in range(n):
            bit = 1 << w
            hit = layer[((ends & in_masks[w]) != 0) & ((layer & bit) == 0)]
            if hit.size:
                table[hit | bit] |= np.uint32(bit)
    return table


def _trace_back(graph: Digraph, table: np.ndarray, start: int, mask: int, end: int) -> list[int]:
    path = [end]
    cur = end
    while mask != 1 << start:
        mask ^= 1 << cur
        cur = next(bits(int(table[mask]) & graph.in_masks[cur]))
        path.append(cur)
    path.reverse()
    return path


def _hamilton_dp(graph: Digraph) -> SearchResult:
    n = graph.n
    table = _path_table(graph, 0, n)
    full = (1 << n) - 1
    ends = int(table[full]) & graph.in_masks[0]
    nodes = int(np.count_nonzero(table))
    if not ends:
        return SearchResult(Status.NONE, None, nodes)
    end = next(bits(ends))
    return SearchResult(Status.FOUND, tuple(_trace_back(graph, table, 0, full, end)), nodes)


def _cycle_through_dp(graph: Digraph, v: int, length: int) -> SearchResult:
    table = _path_table(graph, v, length)
    masks = np.arange(1 << graph.n, dtype=np.int64)
    candidates = masks[(np.bitwise_count(masks) == length) & ((masks >> v) & 1 == 1)]
    closing = candidates[(table[candidates] & np.uint32(graph.in_masks[v])) != 0]
    nodes = int(np.count_nonzero(table))
    if closing.size == 0:
        return SearchResult(Status.NONE, None, nodes)
    mask = int(closing[0])
    end = next(bits(int(table[mask]) & graph.in_masks[v]))
    return SearchResult(Status.FOUND, tuple(_trace_back(graph, table, v, mask, end)), nodes)


# --------------------------------------------------------------------------
# backtracking


class _BudgetExhausted(Exception):
    pass


class _Backtracker:
    def __init__(self, graph: Digraph, budget: SearchBudget):
        self.graph = graph
        self.outs = graph.out_masks
        self.ins = graph.in_masks
        self.max_nodes = budget.max_nodes
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _BudgetExhausted

    def _residual_ok(self, start: int, end: int, unvisited: int, closing: bool) -> bool:
        """Strong connectivity of the residual graph with the path contracted to ``p``.

        ``closing`` means the path must return to ``start`` (Hamilton mode),
        so ``N-(p)`` is ``N-(start) ∩ unvisited``.
        """
        if not unvisited:
            return True
        outs, ins = self.outs, self.ins
        for w in bits(unvisited):
            if not (ins[w] & (unvisited | 1 << end)) or not (outs[w] & (unvisited | 1 << start)):
                return False
        forward = reachable_mask(outs, outs[end] & unvisited, unvisited)
        if forward != unvisited or (closing and not (forward & ins[start])):
            return False
        backward = reachable_mask(ins, ins[start] & unvisited, unvisited)
        return backward == unvisited and bool(backward & outs[end])

    def _residual_has_factor(self, start: int, end: int, unvisited: int) -> bool:
        ids = list(bits(unvisited))
        local = {v: i for i, v in enumerate(ids)}
        p = len(ids)
        rows = [[local[w] for w in bits(self.outs[v] & unvisited)] for v in ids]
        for v in bits(self.ins[start] & unvisited):
            rows[local[v]].append(p)
        rows.append([local[w] for w in bits(self.outs[end] & unvisited)])
        return -1 not in maximum_matching(Digraph(p + 1, rows))

    def _order(self, end: int, unvisited: int) -> list[int]:
        cands = list(bits(self.outs[end] & unvisited))
        cands.sort(key=lambda w: ((self.outs[w] & unvisited).bit_count(), w))
        return cands

    def hamilton(self) -> list[int] | None:
        n = self.graph.n
        start = 0
        path = [start]
        unvisited = ((1 << n) - 1) ^ 1

        def extend(end: int, unvisited: int) -> bool:
            self._tick()
            if not unvisited:
                return bool(self.outs[end] >> start & 1)
            if not self._residual_ok(start, end, unvisited, closing=True):
                return False
            if self.nodes % FACTOR_CHECK_PERIOD == 1 and not self._residual_has_factor(start, end, unvisited):
                return False
            for w in self._order(end, unvisited):
                path.append(w)
                if extend(w, unvisited ^ 1 << w):
                    return True
                path.pop()
            return False

        return path if extend(start, unvisited) else None

    def cycle_through(self, v: int, length: int) -> list[int] | None:
        path = [v]
        target = v

        def extend(end: int, visited: int, remaining: int) -> bool:
            self._tick()
            if remaining == 0:
                return bool(self.outs[end] >> target & 1)
            for w in self._order(end, ~visited & ((1 << self.graph.n) - 1)):
                if remaining == 1 and not (self.outs[w] >> target & 1):
                    continue
                path.append(w)
                if extend(w, visited | 1 << w, remaining - 1):
                    return True
                path.pop()
            return False

        return path if extend(v, 1 << v, length - 1) else None


# --------------------------------------------------------------------------
# public API


def find_hamilton_cycle(graph: Digraph, budget: SearchBudget | None = None) -> SearchResult:
    """Search for a Hamilton cycle.

    ``FOUND`` results are re-validated; ``NONE`` means the search space was
    exhausted; ``UNKNOWN`` means the backtracking budget ran out.
    """
    budget = budget or SearchBudget()
    n = graph.n
    if n < 2:
        return SearchResult(Status.NONE)
    use_dp = budget.mode == "dp" or (budget.mode == "auto" and n <= DP_CUTOFF)
    if use_dp:
        if n > 26:
            raise GraphError(f"subset DP is capped at 26 vertices, got {n}")
        result = _hamilton_dp(graph)
    else:
        solver = _Backtracker(graph, budget)
        try:
            cycle = solver.hamilton()
        except _BudgetExhausted:
            return SearchResult(Status.UNKNOWN, None, solver.nodes)
        result = SearchResult(Status.FOUND if cycle else Status.NONE, tuple(cycle) if cycle else None, solver.nodes)
    if result.found and not is_hamilton_cycle(graph, result.cycle):
        raise AssertionError(f"solver produced an invalid Hamilton cycle {result.cycle}")
    return result


def find_cycle_through(graph: Digraph, v: int, length: int, budget: SearchBudget | None = None) -> SearchResult:
    """A directed cycle on exactly ``length`` vertices that passes through ``v``."""
    budget = budget or SearchBudget()
    n = graph.n
    if not 0 <= v < n:
        raise GraphError(f"vertex {v} is not in the graph")
    if not 2 <= length <= n:
        raise GraphError(f"cycle length must lie in 2..{n}, got {length}")
    if length == 2 and graph.is_digon_free():
        raise GraphError("an oriented graph has no cycles of length 2")
    use_dp = budget.mode == "dp" or (budget.mode == "auto" and n <= DP_CUTOFF)
    if use_dp:
        result = _cycle_through_dp(graph, v, length)
    else:
        solver = _Backtracker(graph, budget)
        try:
            cycle = solver.cycle_through(v, length)
        except _BudgetExhausted:
            return SearchResult(Status.UNKNOWN, None, solver.nodes)
        result = SearchResult(Status.FOUND if cycle else Status.NONE, tuple(cycle) if cycle else None, solver.nodes)
    if result.found and not (len(result.cycle) == length and v in result.cycle and is_cycle(graph, result.cycle)):
        raise AssertionError(f"solver produced an invalid cycle {result.cycle}")
    return result


def count_hamilton_cycles_oracle(graph: Digraph) -> int:
    """Count Hamilton cycles by trying every cyclic order. Deliberately naive."""
    n = graph.n
    if n > ORACLE_MAX_N:
        raise GraphError(f"the counting oracle is capped at {ORACLE_MAX_N} vertices")
    if n < 2:
        return 0
    edges = set(graph.edges())
    count = 0
    for rest in itertools.permutations(range(1, n)):
        order = (0, *rest)
        if all((order[i], order[(i + 1) % n]) in edges for i in range(n)):
            count += 1
    return count


def kelly_greedy(tournament: Digraph, budget: SearchBudget | None = None) -> list[tuple[int, ...]]:
    """Repeatedly find a Hamilton cycle and delete its edges until none is found."""
    if not tournament.is_tournament():
        raise GraphError("kelly_greedy expects a tournament")
    graph = tournament
    cycles: list[tuple[int, ...]] = []
    while True:
        result = find_hamilton_cycle(graph, budget)
        if not result.found:
            return cycles
        cyc = result.cycle
        cycles.append(cyc)
        graph = graph.with_edges(remove=[(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))])


def edge_disjoint(cycles: Sequence[Sequence[int]]) -> bool:
    seen: set[tuple[int, int]] = set()
    for cyc in cycles:
        for i in range(len(cyc)):
            e = (cyc[i], cyc[(i + 1) % len(cyc)])
            if e in seen:
                return False
            seen.add(e)
    return True
