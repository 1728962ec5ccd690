"""Deterministic constructions: circle tournaments, the extremal family,
bipartite tournaments between B and D, blow-ups of reduced graphs, and a
seeded sampler of oriented graphs with a prescribed minimum semi-degree."""

from __future__ import annotations

import dataclasses
import math
import random
from typing import NamedTuple

from .core import FourPartition, GraphError, OrientedGraph, semi_degree_report
from .factor import OneFactor, check_one_factor

# (|A|, |B|, |C|, |D|) as affine functions of k, keyed by n mod 8.
# Residue 7 is the row n = 8k - 1.
SIZE_TABLE: dict[int, tuple[tuple[int, int], ...]] = {
    7: ((2, -1), (2, 1), (2, -1), (2, 0)),
    0: ((2, 0), (2, 1), (2, -1), (2, 0)),
    1: ((2, 0), (2, 1), (2, 0), (2, 0)),
    2: ((2, 0), (2, 2), (2, -1), (2, 1)),
    3: ((2, 0), (2, 2), (2, 0), (2, 1)),
    4: ((2, 1), (2, 2), (2, 0), (2, 1)),
    5: ((2, 1), (2, 2), (2, 1), (2, 1)),
    6: ((2, 2), (2, 2), (2, 1), (2, 1)),
}
CASE1_RESIDUES = frozenset({7, 0, 1})
# Row 8k+4 at k=0 leaves C empty and the result has δ⁰ = 1, one too many.
# Moving the single A vertex to C restores δ⁰ = 0.
SMALL_OVERRIDES = {4: (0, 2, 1, 1)}


def threshold(n: int) -> int:
    """``⌈(3n-4)/8⌉``, the semi-degree that forces a Hamilton cycle."""
    return -((4 - 3 * n) // 8)


def circle_out(i: int, s: int) -> list[int]:
    """Out-neighbours of ``i`` in the circle tournament on ``s`` vertices."""
    out = [(i + d) % s for d in range(1, (s - 1) // 2 + 1)]
    if s % 2 == 0 and s > 0:
        j = (i + s // 2) % s
        if i < j:
            out.append(j)
    return out


def circle_tournament(s: int) -> OrientedGraph:
    """Tournament with ``i -> j`` iff ``j - i mod s`` lies in ``1..(s-1)/2``.

    For even ``s`` the antipodal pair ``{i, i + s/2}`` is directed from the
    smaller id, so every vertex has ``|out - in| <= 1``.
    """
    if s < 1:
        raise GraphError("a circle tournament needs at least one vertex")
    return OrientedGraph(s, [circle_out(i, s) for i in range(s)])


class BipartiteTournament(NamedTuple):
    graph: OrientedGraph
    B: list[int]
    D: list[int]


def _case1_out(k: int) -> tuple[list[list[int]], list[list[int]]]:
    """Blow-up of a 4-cycle B1 -> D1 -> B2 -> D2 -> B1; indices are local."""
    b1, b2 = range(0, k + 1), range(k + 1, 2 * k + 1)
    d1, d2 = range(0, k), range(k, 2 * k)
    b_out = [list(d1) for _ in b1] + [list(d2) for _ in b2]
    d_out = [list(b2) for _ in d1] + [list(b1) for _ in d2]
    return b_out, d_out


def _case2_out(k: int) -> tuple[list[list[int]], list[list[int]]]:
    """B labelled 1..2k+2, D = Z/(2k+1); ``N+(b) ∩ D`` is the segment from (k+1)b."""
    nd = 2 * k + 1
    b_out = [sorted({((k + 1) * b + t) % nd for t in range(k + 1)}) for b in range(1, 2 * k + 3)]
    d_out: list[list[int]] = [[] for _ in range(nd)]
    for bi, row in enumerate(b_out):
        hit = set(row)
        for d in range(nd):
            if d not in hit:
                d_out[d].append(bi)
    return b_out, d_out


def _assemble_bipartite(b_out, d_out) -> BipartiteTournament:
    nb = len(b_out)
    B = list(range(nb))
    D = list(range(nb, nb + len(d_out)))
    rows = [[nb + d for d in row] for row in b_out] + [list(row) for row in d_out]
    return BipartiteTournament(OrientedGraph(len(rows), rows), B, D)


def bipartite_tournament_case1(k: int) -> BipartiteTournament:
    """|B| = 2k+1, |D| = 2k; every b has k out- and k in-neighbours in D."""
    if k < 1:
        raise GraphError("case 1 bipartite tournament needs k >= 1")
    return _assemble_bipartite(*_case1_out(k))


def bipartite_tournament_case2(k: int) -> BipartiteTournament:
    """|B| = 2k+2, |D| = 2k+1; every b has k+1 out- and k in-neighbours in D.

    B vertex ``i`` carries label ``i + 1``; D vertex ``j`` is residue ``j``.
    """
    if k < 0:
        raise GraphError("case 2 bipartite tournament needs k >= 0")
    return _assemble_bipartite(*_case2_out(k))


@dataclasses.dataclass(frozen=True)
class ExtremalWitness:
    graph: OrientedGraph
    part: FourPartition
    k: int
    residue: int
    sizes: tuple[int, int, int, int]
    target_delta0: int


def table_row(n: int) -> tuple[int, int, tuple[int, int, int, int]]:
    """``(k, n mod 8, (|A|, |B|, |C|, |D|))`` for ``n``.

    Follows the size table except at ``n = 4`` (see ``SMALL_OVERRIDES``).
    """
    residue = n % 8
    k = (n + 1) // 8 if residue == 7 else n // 8
    sizes = SMALL_OVERRIDES.get(n) or tuple(a * k + b for a, b in SIZE_TABLE[residue])
    return k, residue, sizes  # type: ignore[return-value]


def build_extremal(n: int) -> ExtremalWitness:
    """Oriented graph on ``n`` vertices with ``δ⁰ = ⌈(3n-4)/8⌉ - 1`` and no 1-factor.

    Parts are laid out as consecutive id blocks A, B, C, D. A and C span
    circle tournaments, B and D a bipartite tournament, and all edges
    A->B, B->C, C->D, D->A are present.
    """
    if n < 3:
        raise GraphError(f"the extremal construction needs n >= 3, got {n}")
    k, residue, sizes = table_row(n)
    na, nb, nc, nd = sizes
    oa, ob, oc, od = 0, na, na + nb, na + nb + nc
    if residue in CASE1_RESIDUES:
        b_out, d_out = _case1_out(k)
    else:
        b_out, d_out = _case2_out(k)

    block_b = list(range(ob, ob + nb))
    block_c = list(range(oc, oc + nc))
    block_d = list(range(od, od + nd))
    block_a = list(range(oa, oa + na))
    rows: list[list[int]] = []
    for i in range(na):
        rows.append([oa + j for j in circle_out(i, na)] + block_b)
    for i in range(nb):
        rows.append(block_c + [od + d for d in b_out[i]])
    for i in range(nc):
        rows.append([oc + j for j in circle_out(i, nc)] + block_d)
    for i in range(nd):
        rows.append(block_a + [ob + b for b in d_out[i]])

    graph = OrientedGraph(n, rows)
    part = FourPartition.from_sizes(sizes)
    return ExtremalWitness(graph, part, k, residue, sizes, threshold(n) - 1)


def augment_extremal(witness: ExtremalWitness, rng: random.Random, p: float = 0.5) -> OrientedGraph:
    """Add a random subset of A->C edges and a random tournament's edges inside D.

    These additions never create a 1-factor.
    """
    A = witness.part.members("A")
    C = witness.part.members("C")
    D = witness.part.members("D")
    extra = [(a, c) for a in A for c in C if rng.random() < p]
    for i, u in enumerate(D):
        for v in D[i + 1:]:
            if rng.random() < p:
                extra.append((u, v) if rng.random() < 0.5 else (v, u))
    return witness.graph.with_edges(add=extra)


# --------------------------------------------------------------------------
# blow-ups


@dataclasses.dataclass(frozen=True)
class PairMode:
    """How reduced edges are realised: ``complete`` or ``mindeg``.

    In ``mindeg`` mode pairs on factor edges are random bipartite graphs in
    which every vertex keeps at least ``(d - eps) * |cluster|`` neighbours on
    the far side; other reduced edges get random pairs of density ``d``.
    """

    kind: str = "complete"
    d: float = 0.5
    eps: float = 0.1

    def __post_init__(self):
        if self.kind not in ("complete", "mindeg"):
            raise GraphError(f"unknown pair mode {self.kind!r}")
        if self.kind == "mindeg" and not (0 < self.eps < self.d <= 1):
            raise GraphError("mindeg mode needs 0 < eps < d <= 1")


@dataclasses.dataclass(frozen=True)
class Attachment:
    """Clusters an exceptional vertex sends edges to (``out``) and receives from (``in_``)."""

    out: frozenset[int]
    in_: frozenset[int]


@dataclasses.dataclass(frozen=True)
class BlowUpSpec:
    R: OrientedGraph
    factor: OneFactor
    cluster_sizes: tuple[int, ...]
    pair_mode: PairMode = PairMode()
    exceptional: tuple[Attachment, ...] = ()

    def __post_init__(self):
        problems = check_one_factor(self.R, self.factor)
        if problems:
            raise GraphError(f"factor is not a 1-factor of R: {problems[0]}")
        if len(self.cluster_sizes) != self.R.n or any(s < 1 for s in self.cluster_sizes):
            raise GraphError("need one positive cluster size per reduced vertex")
        for idx, att in enumerate(self.exceptional):
            if not att.out or not att.in_:
                raise GraphError(f"exceptional vertex {idx} needs an in- and an out-attachment")
            if any(not 0 <= c < self.R.n for c in att.out | att.in_):
                raise GraphError(f"exceptional vertex {idx} attaches to a missing cluster")
            if att.out & att.in_:
                raise GraphError(f"exceptional vertex {idx} would form a digon with a cluster")

    @property
    def k(self) -> int:
        return self.R.n

    def augmented(self) -> OrientedGraph:
        """``R*``: R plus one vertex ``k + j`` per exceptional vertex."""
        k = self.k
        rows = [list(self.R.out_neighbors(i)) for i in range(k)]
        for j, att in enumerate(self.exceptional):
            for i in att.in_:
                rows[i].append(k + j)
            rows.append(sorted(att.out))
        return OrientedGraph(k + len(self.exceptional), rows)


class BlowUp(NamedTuple):
    graph: OrientedGraph
    clusters: tuple[tuple[int, ...], ...]
    exceptional: tuple[int, ...]


def _mindeg_pair(size_i: int, size_j: int, d: float, eps: float, rng: random.Random) -> set[tuple[int, int]]:
    need_out = math.ceil((d - eps) * size_j)
    need_in = math.ceil((d - eps) * size_i)
    pairs = {(a, b) for a in range(size_i) for b in range(size_j) if rng.random() < d}
    for a in range(size_i):
        have = [b for b in range(size_j) if (a, b) in pairs]
        missing = [b for b in range(size_j) if (a, b) not in pairs]
        rng.shuffle(missing)
        pairs.update((a, b) for b in missing[: max(0, need_out - len(have))])
    for b in range(size_j):
        have = [a for a in range(size_i) if (a, b) in pairs]
        missing = [a for a in range(size_i) if (a, b) not in pairs]
        rng.shuffle(missing)
        pairs.update((a, b) for a in missing[: max(0, need_in - len(have))])
    return pairs


def blow_up(spec: BlowUpSpec, seed: int | None = None) -> BlowUp:
    """Replace reduced vertex ``i`` by an independent cluster of ``cluster_sizes[i]`` vertices.

    Cluster ``i`` occupies a contiguous block of ids in order; exceptional
    vertices come last and are joined completely to their attachment clusters.
    ``mindeg`` mode needs ``seed``.
    """
    mode = spec.pair_mode
    if mode.kind == "mindeg" and seed is None:
        raise GraphError("mindeg blow-up is random and needs a seed")
    rng = random.Random(seed)
    clusters = []
    offset = 0
    for size in spec.cluster_sizes:
        clusters.append(tuple(range(offset, offset + size)))
        offset += size
    exceptional = tuple(range(offset, offset + len(spec.exceptional)))
    n = offset + len(exceptional)
    rows: list[list[int]] = [[] for _ in range(n)]
    factor_edges = set(spec.factor.successor().items())

    for i, j in spec.R.edges():
        ci, cj = clusters[i], clusters[j]
        if mode.kind == "complete":
            for u in ci:
                rows[u].extend(cj)
        elif (i, j) in factor_edges:
            for a, b in sorted(_mindeg_pair(len(ci), len(cj), mode.d, mode.eps, rng)):
                rows[ci[a]].append(cj[b])
        else:
            for u in ci:
                rows[u].extend(w for w in cj if rng.random() < mode.d)

    for x, att in zip(exceptional, spec.exceptional):
        for i in sorted(att.out):
            rows[x].extend(clusters[i])
        for i in sorted(att.in_):
            for u in clusters[i]:
                rows[u].append(x)

    return BlowUp(OrientedGraph(n, rows), tuple(clusters), exceptional)


def blowup_spec_from_json(obj: dict) -> BlowUpSpec:
    """Parse the BlowUpSpec JSON document.

    Schema::

        {
          "R": {"n": k, "edges": [[i, j], ...]},
          "factor": [[i, j, ...], ...],
          "cluster_sizes": [m_0, ..., m_{k-1}],
          "pair_mode": {"kind": "complete"} | {"kind": "mindeg", "d": 0.6, "eps": 0.1},
          "exceptional": [{"out": [i, ...], "in": [j, ...]}, ...]
        }

    ``pair_mode`` and ``exceptional`` are optional.
    """
    R = OrientedGraph.from_edges(obj["R"]["n"], [tuple(e) for e in obj["R"]["edges"]])
    mode = PairMode(**obj.get("pair_mode", {"kind": "complete"}))
    exceptional = tuple(
        Attachment(frozenset(e["out"]), frozenset(e["in"])) for e in obj.get("exceptional", [])
    )
    return BlowUpSpec(R, OneFactor.of(obj["factor"]), tuple(obj["cluster_sizes"]), mode, exceptional)


def blowup_spec_to_json(spec: BlowUpSpec) -> dict:
    mode = {"kind": spec.pair_mode.kind}
    if spec.pair_mode.kind == "mindeg":
        mode.update(d=spec.pair_mode.d, eps=spec.pair_mode.eps)
    return {
        "R": {"n": spec.R.n, "edges": [list(e) for e in spec.R.edges()]},
        "factor": [list(c) for c in spec.factor.cycles],
        "cluster_sizes": list(spec.cluster_sizes),
        "pair_mode": mode,
        "exceptional": [{"out": sorted(a.out), "in": sorted(a.in_)} for a in spec.exceptional],
    }


# --------------------------------------------------------------------------
# random oriented graphs

MAX_REPAIR_ROUNDS = 1000


def random_oriented(n: int, delta0_min: int, seed: int | str) -> OrientedGraph:
    """Seeded oriented graph on ``n`` vertices with ``δ⁰ >= delta0_min``.

    Each pair is present independently with a probability chosen so that the
    expected semi-degree clears the target, oriented by a fair coin. Deficient
    vertices are then repaired one at a time: join a non-neighbour if one
    exists, otherwise reverse an incident edge, preferring reversals that
    leave the other endpoint above the target. Gives up after
    ``MAX_REPAIR_ROUNDS`` sweeps.
    """
    if n < 1:
        raise GraphError("need at least one vertex")
    if delta0_min < 0 or delta0_min > (n - 1) // 2:
        raise GraphError(
            f"no oriented graph on {n} vertices has minimum semi-degree {delta0_min} "
            f"(maximum is {(n - 1) // 2})"
        )
    rng = random.Random(seed)
    out = [set() for _ in range(n)]
    ins = [set() for _ in range(n)]
    p = 1.0 if n < 3 else min(1.0, (2 * delta0_min + 2 * math.sqrt(n)) / (n - 1))

    def add(u: int, v: int) -> None:
        out[u].add(v)
        ins[v].add(u)

    def drop(u: int, v: int) -> None:
        out[u].discard(v)
        ins[v].discard(u)

    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                add(u, v) if rng.random() < 0.5 else add(v, u)

    t = delta0_min
    for _ in range(MAX_REPAIR_ROUNDS):
        deficient = [v for v in range(n) if len(out[v]) < t or len(ins[v]) < t]
        if not deficient:
            return OrientedGraph(n, out)
        rng.shuffle(deficient)
        for v in deficient:
            while len(out[v]) < t:
                free = [w for w in range(n) if w != v and w not in out[v] and w not in ins[v]]
                if free:
                    hungry = [w for w in free if len(ins[w]) < t]
                    w = rng.choice(hungry or free)
                    add(v, w)
                    continue
                safe = [w for w in ins[v] if len(out[w]) > t] if len(ins[v]) > t else []
                w = rng.choice(safe or sorted(ins[v]))
                drop(w, v)
                add(v, w)
                if not safe:
                    break
            while len(ins[v]) < t:
                free = [w for w in range(n) if w != v and w not in out[v] and w not in ins[v]]
                if free:
                    hungry = [w for w in free if len(out[w]) < t]
                    w = rng.choice(hungry or free)
                    add(w, v)
                    continue
                safe = [w for w in out[v] if len(ins[w]) > t] if len(out[v]) > t else []
                w = rng.choice(safe or sorted(out[v]))
                drop(v, w)
                add(w, v)
                if not safe:
                    break
    raise GraphError(
        f"could not reach minimum semi-degree {delta0_min} on {n} vertices "
        f"within {MAX_REPAIR_ROUNDS} repair rounds"
    )


def rotational_tournament(n: int) -> OrientedGraph:
    """Regular tournament on odd ``n`` (the circle tournament)."""
    if n % 2 == 0:
        raise GraphError("rotational tournaments are regular only for odd n")
    return circle_tournament(n)


def directed_cycle(n: int) -> OrientedGraph:
    if n < 3:
        raise GraphError("an oriented cycle needs at least 3 vertices")
    return OrientedGraph(n, [[(i + 1) % n] for i in range(n)])


def check_extremal_witness(w: ExtremalWitness) -> list[str]:
    """Independent structural audit of a witness; returns the violations."""
    problems = []
    g, part = w.graph, w.part
    na, nb, nc, nd = part.sizes()
    if (na, nb, nc, nd) != w.sizes or sum(w.sizes) != g.n:
        problems.append("partition sizes disagree with the recorded sizes")
    if nb != nd + 1:
        problems.append("|B| != |D| + 1")
    allowed_cross = {("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("B", "D"), ("D", "B")}
    cls = part.class_of
    for u, v in g.edges():
        pair = (cls[u], cls[v])
        if pair[0] == pair[1] and pair[0] in "AC":
            continue
        if pair not in allowed_cross:
            problems.append(f"edge {u}->{v} joins {pair[0]} to {pair[1]}")
    for x, y in (("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")):
        for u in part.members(x):
            if not all(g.has_edge(u, v) for v in part.members(y)):
                problems.append(f"missing some {x}->{y} edge at {u}")
    for label in "AC":
        members = part.members(label)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                if g.has_edge(u, v) == g.has_edge(v, u):
                    problems.append(f"{label} is not a tournament at {u},{v}")
    for b in part.members("B"):
        for d in part.members("D"):
            if g.has_edge(b, d) == g.has_edge(d, b):
                problems.append(f"B-D pair {b},{d} is not oriented exactly once")
    if semi_degree_report(g).delta0 != w.target_delta0:
        problems.append("minimum semi-degree differs from the target")
    return problems
