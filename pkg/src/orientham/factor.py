"""1-factors of digraphs via bipartite matching.

A 1-factor of ``G`` is the same thing as a perfect matching in the split
bipartite graph whose left and right sides are copies of ``V(G)``, with
``u -> v`` whenever ``uv`` is an edge. A maximum matching either is perfect
(read the cycles off the successor permutation) or leaves a left vertex
unmatched, in which case the left vertices reachable from the unmatched ones
by alternating paths form a set ``S`` with ``|N+(S)| < |S|``.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from collections.abc import Sequence

from .core import Digraph, GraphError

_UNMATCHED = -1
_INF = float("inf")


@dataclasses.dataclass(frozen=True)
class OneFactor:
    """Vertex-disjoint directed cycles, each given in traversal order."""

    cycles: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, cycles: Sequence[Sequence[int]]) -> OneFactor:
        return cls(tuple(tuple(c) for c in cycles))

    def successor(self) -> dict[int, int]:
        succ = {}
        for cyc in self.cycles:
            for i, v in enumerate(cyc):
                succ[v] = cyc[(i + 1) % len(cyc)]
        return succ

    def predecessor(self) -> dict[int, int]:
        return {w: v for v, w in self.successor().items()}

    def cycle_index(self) -> dict[int, int]:
        return {v: i for i, cyc in enumerate(self.cycles) for v in cyc}

    def vertices(self) -> list[int]:
        return [v for cyc in self.cycles for v in cyc]


def check_one_factor(graph: Digraph, factor: OneFactor) -> list[str]:
    """Return every way ``factor`` fails to be a 1-factor of ``graph``."""
    problems = []
    seen: list[int] = [v for cyc in factor.cycles for v in cyc]
    if sorted(seen) != list(range(graph.n)):
        problems.append("cycles do not partition the vertex set")
    min_len = 3 if graph.is_digon_free() else 2
    for cyc in factor.cycles:
        if len(cyc) < min_len:
            problems.append(f"cycle {list(cyc)} is shorter than {min_len}")
        for i, u in enumerate(cyc):
            v = cyc[(i + 1) % len(cyc)]
            if not (0 <= u < graph.n and 0 <= v < graph.n) or not graph.has_edge(u, v):
                problems.append(f"{u}->{v} is not an edge")
    return problems


def maximum_matching(graph: Digraph) -> list[int]:
    """Hopcroft-Karp on the split graph. ``match[u]`` is u's successor or -1."""
    n = graph.n
    adj = [graph.out_neighbors(u) for u in range(n)]
    match_left = [_UNMATCHED] * n
    match_right = [_UNMATCHED] * n

    # greedy warm start
    for u in range(n):
        for v in adj[u]:
            if match_right[v] == _UNMATCHED:
                match_left[u] = v
                match_right[v] = u
                break

    while True:
        dist = [_INF] * n
        queue = deque(u for u in range(n) if match_left[u] == _UNMATCHED)
        for u in queue:
            dist[u] = 0
        found = _INF
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adj[u]:
                w = match_right[v]
                if w == _UNMATCHED:
                    found = min(found, dist[u] + 1)
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found == _INF:
            break

        ptr = [0] * n
        for root in range(n):
            if match_left[root] != _UNMATCHED:
                continue
            # iterative layered DFS for one augmenting path from root
            stack = [root]
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < len(adj[u]):
                    v = adj[u][ptr[u]]
                    ptr[u] += 1
                    w = match_right[v]
                    if w == _UNMATCHED:
                        if dist[u] + 1 == found:
                            # augment along the stack
                            for x in reversed(stack):
                                nxt = match_left[x]
                                match_left[x] = v
                                match_right[v] = x
                                v = nxt
                            stack = []
                            advanced = True
                            break
                    elif dist[w] == dist[u] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = _INF
                    stack.pop()
    return match_left


def _cycles_from_successor(succ: Sequence[int]) -> OneFactor:
    seen = [False] * len(succ)
    cycles = []
    for start in range(len(succ)):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = succ[v]
        cycles.append(tuple(cyc))
    return OneFactor(tuple(cycles))


def _violator_from_matching(graph: Digraph, match_left: Sequence[int]) -> set[int]:
    match_right = [_UNMATCHED] * graph.n
    for u, v in enumerate(match_left):
        if v != _UNMATCHED:
            match_right[v] = u
    reached = {u for u in range(graph.n) if match_left[u] == _UNMATCHED}
    queue = deque(reached)
    while queue:
        u = queue.popleft()
        for v in graph.out_neighbors(u):
            w = match_right[v]
            # maximality: every right vertex reached here is matched
            if w not in reached:
                reached.add(w)
                queue.append(w)
    return reached


def find_one_factor(graph: Digraph) -> OneFactor | None:
    """A 1-factor of ``graph``, or ``None`` if none exists."""
    if graph.n < 1:
        raise GraphError("1-factor search needs at least one vertex")
    match = maximum_matching(graph)
    if _UNMATCHED in match:
        return None
    return _cycles_from_successor(match)


def hall_violator(graph: Digraph) -> set[int] | None:
    """A set ``S`` with ``|N+(S)| < |S|``, or ``None`` when a 1-factor exists."""
    if graph.n < 1:
        raise GraphError("1-factor search needs at least one vertex")
    match = maximum_matching(graph)
    if _UNMATCHED not in match:
        return None
    return _violator_from_matching(graph, match)


def solve_one_factor(graph: Digraph) -> tuple[OneFactor | None, set[int] | None]:
    """One matching run, both certificates: exactly one side is not ``None``."""
    if graph.n < 1:
        raise GraphError("1-factor search needs at least one vertex")
    match = maximum_matching(graph)
    if _UNMATCHED in match:
        return None, _violator_from_matching(graph, match)
    return _cycles_from_successor(match), None
