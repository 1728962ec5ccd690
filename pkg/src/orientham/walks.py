"""Shifted walks, balanced closed walks and lifting them to Hamilton cycles.

Let ``F`` be a 1-factor of a reduced graph ``R`` and write ``a-`` for the
predecessor of ``a`` on its factor cycle. A *shifted walk* from ``x`` to
``y`` is a concatenation of full cycle traversals ``a1 .. a1-``,
``a2 .. a2-``, ... with ``x = a1``, ``y = at-`` and ``a(i+1)`` an
out-neighbour of ``ai-``. Every traversal visits each vertex of its cycle
once, so shifted walks are balanced with respect to ``F``.

A closed walk in ``R*`` (``R`` plus exceptional vertices ``k, k+1, ...``)
is built from shifted walks and lifted to a Hamilton cycle of a blow-up by
giving every visit its own cluster vertex and replacing one traversal of
each factor cycle by a path that winds around that cycle's clusters until
they are used up.
"""

from __future__ import annotations

import dataclasses
import random
from collections import Counter, deque
from collections.abc import Sequence

from .core import GraphError, OrientedGraph, bits
from .factor import OneFactor, check_one_factor
from .generators import Attachment, BlowUp, BlowUpSpec, PairMode
from .hamilton import is_hamilton_cycle


class WalkError(RuntimeError):
    """A walk could not be built or lifted."""


class _RestartSearch(Exception):
    pass


class LiftBudgetExceeded(WalkError):
    """The min-degree embedding ran out of search nodes (status UNKNOWN)."""


@dataclasses.dataclass(frozen=True)
class ShiftedWalk:
    """Traversals ``(entry, cycle)``; each starts at ``entry`` and goes once round ``cycle``."""

    segments: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def start(self) -> int:
        return self.segments[0][0]

    @property
    def end(self) -> int:
        a, cyc = self.segments[-1]
        return cyc[cyc.index(a) - 1]

    @property
    def cycles_traversed(self) -> int:
        return len(self.segments)

    def vertices(self) -> list[int]:
        out: list[int] = []
        for a, cyc in self.segments:
            i = cyc.index(a)
            out.extend(cyc[i:] + cyc[:i])
        return out


@dataclasses.dataclass(frozen=True)
class ClosedWalk:
    """Vertex sequence with ``vertices[0] == vertices[-1]``."""

    vertices: tuple[int, ...]

    @property
    def visit_counts(self) -> Counter:
        return Counter(self.vertices[:-1])

    def __len__(self) -> int:
        return len(self.vertices) - 1


def _require_factor(R: OrientedGraph, factor: OneFactor) -> None:
    problems = check_one_factor(R, factor)
    if problems:
        raise GraphError(f"not a 1-factor: {problems[0]}")


def _shifted_walk(R, cycle_of, pred, x: int, y: int, max_cycles: int) -> ShiftedWalk | None:
    # BFS over the walk's current endpoint; S_1 = {x-}, S_{i+1} = (N+(S_i))-
    first = pred[x]
    parent: dict[int, tuple[int, int] | None] = {first: None}
    depth = {first: 1}
    queue = deque([first])
    while queue and y not in parent:
        e = queue.popleft()
        if depth[e] >= max_cycles:
            continue
        for a in R.out_neighbors(e):
            nxt = pred[a]
            if nxt not in parent:
                parent[nxt] = (e, a)
                depth[nxt] = depth[e] + 1
                queue.append(nxt)
    if y not in parent:
        return None
    entries = []
    e = y
    while parent[e] is not None:
        prev, a = parent[e]
        entries.append(a)
        e = prev
    entries.append(x)
    entries.reverse()
    return ShiftedWalk(tuple((a, cycle_of[a]) for a in entries))


def find_shifted_walk(
    R: OrientedGraph, factor: OneFactor, x: int, y: int, max_cycles: int | None = None
) -> ShiftedWalk | None:
    """Shifted walk from ``x`` to ``y`` traversing as few cycles as possible.

    Returns ``None`` if ``y`` cannot be reached within ``max_cycles`` traversals.
    """
    _require_factor(R, factor)
    cycle_of = {v: cyc for cyc in factor.cycles for v in cyc}
    return _shifted_walk(R, cycle_of, factor.predecessor(), x, y, max_cycles or R.n + 1)


def _visit_limits(spec: BlowUpSpec, max_visits: int | None) -> list[int]:
    if max_visits is None:
        return list(spec.cluster_sizes)
    return [max_visits] * spec.k


def build_balanced_closed_walk(
    R: OrientedGraph, factor: OneFactor, spec: BlowUpSpec, max_visits: int | None = None
) -> ClosedWalk:
    """Closed walk in ``R*`` that is balanced, covers ``R`` and meets each exceptional vertex once.

    Starting from vertex 0 it follows ``W(0, r-)``, ``r- r`` for each vertex
    ``r`` not yet covered (in increasing order), then ``W(cur, ui)``,
    ``ui vi wi`` for each exceptional ``vi``, and closes with ``W(cur, 0-)``,
    ``0- 0``. ``W`` denotes a shortest shifted walk. ``max_visits`` caps the
    visits per cluster; ``None`` caps each cluster at its size.
    """
    if spec.R != R or spec.factor != factor:
        raise GraphError("spec describes a different reduced graph or factor")
    _require_factor(R, factor)
    k = R.n
    cycle_of = {v: cyc for cyc in factor.cycles for v in cyc}
    pred = factor.predecessor()

    def W(x: int, y: int) -> list[int]:
        walk = _shifted_walk(R, cycle_of, pred, x, y, k + 1)
        if walk is None:
            raise WalkError(f"no shifted walk from {x} to {y}")
        return walk.vertices()

    def cost(x: int, y: int) -> int:
        walk = _shifted_walk(R, cycle_of, pred, x, y, k + 1)
        return walk.cycles_traversed if walk is not None else k + 2

    seq: list[int] = []
    cur = 0
    covered = set(cycle_of[0])
    for r in range(1, k):
        if r in covered:
            continue
        piece = W(cur, pred[r])
        seq.extend(piece)
        covered.update(piece)
        covered.update(cycle_of[r])
        cur = r

    for j, att in enumerate(spec.exceptional):
        u = min(sorted(att.in_), key=lambda c: cost(cur, c))
        w = min(sorted(att.out), key=lambda c: cost(c, pred[0]))
        seq.extend(W(cur, u))
        seq.append(k + j)
        cur = w

    seq.extend(W(cur, pred[0]))
    seq.append(0)
    walk = ClosedWalk(tuple(seq))

    limits = _visit_limits(spec, max_visits)
    counts = walk.visit_counts
    over = [i for i in range(k) if counts[i] > limits[i]]
    if over:
        raise WalkError(f"cluster {over[0]} visited {counts[over[0]]} times, limit {limits[over[0]]}")
    return walk


def check_closed_walk(spec: BlowUpSpec, walk: ClosedWalk, max_visits: int | None = None) -> list[str]:
    """Audit properties (a)-(d) plus edge validity; returns the violations."""
    problems = []
    seq = walk.vertices
    k = spec.k
    q = len(spec.exceptional)
    if len(seq) < 2 or seq[0] != seq[-1]:
        return ["walk is not closed"]
    r_star = spec.augmented()
    for u, v in zip(seq, seq[1:]):
        if not (0 <= u < k + q and 0 <= v < k + q) or not r_star.has_edge(u, v):
            problems.append(f"{u}->{v} is not an edge of R*")
    counts = Counter(seq[:-1])
    for cyc in spec.factor.cycles:
        if len({counts[v] for v in cyc}) != 1:
            problems.append(f"(a) unbalanced on cycle {list(cyc)}")
    limits = _visit_limits(spec, max_visits)
    for i in range(k):
        if not 1 <= counts[i] <= limits[i]:
            problems.append(f"(b) cluster {i} visited {counts[i]} times")
    for j in range(k, k + q):
        if counts[j] != 1:
            problems.append(f"(c) exceptional vertex {j} visited {counts[j]} times")
    length = len(seq) - 1
    spots = [i for i, v in enumerate(seq[:-1]) if v >= k]
    for a in range(len(spots)):
        for b in range(a + 1, len(spots)):
            gap = spots[b] - spots[a]
            if min(gap, length - gap) < 4:
                problems.append(f"(d) exceptional visits at positions {spots[a]} and {spots[b]} are too close")
    return problems


# --------------------------------------------------------------------------
# lifting


def _winding_labels(spec: BlowUpSpec, walk: ClosedWalk) -> list[int]:
    """Reduced-vertex labels of the lifted cycle, one per blow-up vertex."""
    k = spec.k
    seq = list(walk.vertices[:-1])
    length = len(seq)
    counts = Counter(seq)
    succ = spec.factor.successor()

    def run_at(i: int, cyc: tuple[int, ...]) -> bool:
        v = seq[i]
        for step in range(len(cyc)):
            if seq[(i + step) % length] != v:
                return False
            v = succ[v]
        return True

    runs: dict[int, tuple[int, ...]] = {}
    for cyc in spec.factor.cycles:
        members = set(cyc)
        start = next((i for i in range(length) if seq[i] in members and run_at(i, cyc)), None)
        if start is None:
            raise WalkError(f"walk never goes once round cycle {list(cyc)}")
        runs[start] = cyc

    first = min(runs)
    seq = seq[first:] + seq[:first]
    runs = {(i - first) % length: cyc for i, cyc in runs.items()}

    labels: list[int] = []
    i = 0
    while i < length:
        if i in runs:
            cyc = runs[i]
            m = spec.cluster_sizes[cyc[0]]
            v = seq[i]
            for _ in range((m - counts[v] + 1) * len(cyc)):
                labels.append(v)
                v = succ[v]
            i += len(cyc)
        else:
            labels.append(seq[i])
            i += 1
    if any(v >= k + len(spec.exceptional) for v in labels):
        raise WalkError("walk mentions a vertex outside R*")
    return labels


def _assign_complete(spec: BlowUpSpec, labels: list[int], blown: BlowUp) -> list[int]:
    k = spec.k
    order: list[int | None] = [None] * len(labels)
    free = [list(c) for c in blown.clusters]
    for i, v in enumerate(labels):
        if v >= k:
            order[i] = blown.exceptional[v - k]
    # images next to exceptional vertices first, then everything else
    near = {(i + d) % len(labels) for i, v in enumerate(labels) if v >= k for d in (-1, 1)}
    for i in sorted(near) + [i for i in range(len(labels)) if i not in near]:
        if order[i] is None:
            order[i] = free[labels[i]].pop(0)
    return order  # type: ignore[return-value]


def _assign_search(spec: BlowUpSpec, labels: list[int], blown: BlowUp, max_nodes: int, restarts: int = 20) -> list[int]:
    k = spec.k
    g = blown.graph
    L = len(labels)
    outs = g.out_masks
    ins = g.in_masks
    cluster_mask = [sum(1 << u for u in c) for c in blown.clusters]
    nodes = 0

    def pool(i: int) -> int:
        v = labels[i]
        return 1 << blown.exceptional[v - k] if v >= k else cluster_mask[v]

    def attempt(rng: random.Random, limit: int) -> list[int] | None:
        # depth-first with forward checking; candidate order is shuffled per restart
        nonlocal nodes
        order = [-1] * L
        used = 0
        spent = 0

        def options(i: int) -> int:
            cands = pool(i) & ~used
            if i > 0:
                cands &= outs[order[i - 1]]
            if i == L - 1:
                cands &= ins[order[0]]
            return cands

        def place(i: int) -> bool:
            nonlocal used, spent, nodes
            if i == L:
                return True
            spent += 1
            nodes += 1
            if spent > limit:
                raise _RestartSearch
            cands = list(bits(options(i)))
            rng.shuffle(cands)
            for u in cands:
                order[i] = u
                used |= 1 << u
                if i + 1 == L or options(i + 1):
                    if place(i + 1):
                        return True
                used &= ~(1 << u)
            order[i] = -1
            return False

        try:
            found = place(0)
        except _RestartSearch:
            return None
        if not found:
            raise WalkError("this walk has no embedding in the min-degree blow-up")
        return order

    rng = random.Random(0)
    per_attempt = max(1, max_nodes // restarts)
    for _ in range(restarts):
        order = attempt(rng, per_attempt)
        if order is not None:
            return order
    raise LiftBudgetExceeded(f"embedding gave up after {nodes} nodes in {restarts} restarts")


def lift_walk_to_hamilton(
    spec: BlowUpSpec, walk: ClosedWalk, blown: BlowUp, max_nodes: int = 1_000_000
) -> tuple[int, ...]:
    """Turn a walk satisfying (a)-(d) into a Hamilton cycle of the blow-up.

    For each factor cycle ``C`` with clusters of size ``m`` visited ``m_C``
    times, the first traversal of ``C`` is replaced by a path winding round
    ``C``'s clusters ``m - m_C + 1`` times; every visit then gets a distinct
    cluster vertex. Clusters on one factor cycle must have equal sizes.
    Complete pairs always succeed; min-degree pairs are embedded by
    backtracking limited to ``max_nodes``.
    """
    for cyc in spec.factor.cycles:
        if len({spec.cluster_sizes[v] for v in cyc}) != 1:
            raise WalkError(f"clusters on factor cycle {list(cyc)} differ in size")
    problems = check_closed_walk(spec, walk)
    if problems:
        raise WalkError(f"walk cannot be lifted: {problems[0]}")
    labels = _winding_labels(spec, walk)
    if spec.pair_mode.kind == "complete":
        order = _assign_complete(spec, labels, blown)
    else:
        order = _assign_search(spec, labels, blown, max_nodes)
    if not is_hamilton_cycle(blown.graph, order):
        raise WalkError("lifted sequence is not a Hamilton cycle of the blow-up")
    return tuple(order)


# --------------------------------------------------------------------------
# random liftable specs


def _random_factor(k: int, rng: random.Random) -> OneFactor:
    perm = list(range(k))
    rng.shuffle(perm)
    lengths = []
    left = k
    while left:
        if left < 6:
            lengths.append(left)
            break
        size = rng.randint(3, left - 3)
        lengths.append(size)
        left -= size
    cycles, i = [], 0
    for size in lengths:
        cycles.append(tuple(perm[i:i + size]))
        i += size
    return OneFactor(tuple(cycles))


def random_liftable_spec(
    seed: int | str,
    max_clusters: int = 8,
    max_size: int = 5,
    max_exceptional: int = 2,
    density: float = 0.7,
    pair_mode: PairMode = PairMode(),
    attempts: int = 1000,
) -> tuple[BlowUpSpec, ClosedWalk]:
    """Sample a BlowUpSpec for which the walk construction fits in the clusters.

    A factor is drawn first, the remaining pairs of R are oriented at random
    with probability ``density``, and exceptional vertices get random disjoint
    attachments. Samples whose walk needs more than ``max_size`` visits of
    some cluster are redrawn; cluster sizes are then drawn per factor cycle
    between the cycle's visit count and ``max_size``.
    """
    rng = random.Random(seed)
    for _ in range(attempts):
        k = rng.randint(3, max_clusters)
        factor = _random_factor(k, rng)
        succ = factor.successor()
        rows = [[succ[i]] for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                if succ[i] == j or succ[j] == i or rng.random() >= density:
                    continue
                if rng.random() < 0.5:
                    rows[i].append(j)
                else:
                    rows[j].append(i)
        R = OrientedGraph(k, rows)
        exceptional = []
        for _ in range(rng.randint(0, max_exceptional)):
            pool = list(range(k))
            rng.shuffle(pool)
            n_out = rng.randint(1, max(1, min(2, k - 1)))
            out = frozenset(pool[:n_out])
            n_in = rng.randint(1, max(1, min(2, k - n_out)))
            exceptional.append(Attachment(out, frozenset(pool[n_out:n_out + n_in])))
        draft = BlowUpSpec(R, factor, (max_size,) * k, pair_mode, tuple(exceptional))
        try:
            walk = build_balanced_closed_walk(R, factor, draft)
        except WalkError:
            continue
        counts = walk.visit_counts
        sizes = [0] * k
        for cyc in factor.cycles:
            m = rng.randint(counts[cyc[0]], max_size)
            for v in cyc:
                sizes[v] = m
        return dataclasses.replace(draft, cluster_sizes=tuple(sizes)), walk
    raise WalkError(f"no liftable spec found in {attempts} attempts")


def lifted_cluster_counts(blown: BlowUp, order: Sequence[int]) -> list[int]:
    """How many vertices of the lifted cycle fall in each cluster."""
    owner = {u: i for i, c in enumerate(blown.clusters) for u in c}
    tally = Counter(owner[u] for u in order if u in owner)
    return [tally[i] for i in range(len(blown.clusters))]
