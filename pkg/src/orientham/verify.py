"""Checks around the semi-degree threshold ``⌈(3n-4)/8⌉``.

* sharpness of the extremal family (one below threshold, no 1-factor, and no
  B-vertex reaching another B-vertex once D is deleted);
* the threshold and Häggkvist's ``δ* > (3n-3)/2`` condition for a given graph;
* subsets in the middle size range that fail to expand;
* a seeded empirical scan of random graphs at the threshold.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import random
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .core import Digraph, GraphError, bits, semi_degree_report, strongly_connected_components
from .factor import find_one_factor
from .generators import build_extremal, random_oriented, threshold
from .hamilton import SearchBudget, Status, find_hamilton_cycle
from .io import to_edge_list

log = logging.getLogger(__name__)

EXACT_EXPANSION_MAX_K = 24


@dataclasses.dataclass(frozen=True)
class SharpnessReport:
    n: int
    expected_delta0: int
    actual_delta0: int
    has_one_factor: bool
    bb_reachability_violations: int

    @property
    def verdict(self) -> bool:
        return (
            self.actual_delta0 == self.expected_delta0
            and not self.has_one_factor
            and self.bb_reachability_violations == 0
        )

    def as_dict(self) -> dict:
        return {**dataclasses.asdict(self), "verdict": self.verdict}


def reachability_violations(graph: Digraph, sources: Iterable[int], removed: Iterable[int]) -> int:
    """Ordered pairs ``(b, b')`` of distinct sources with ``b`` reaching ``b'`` in ``G - removed``."""
    sub, keep = graph.without_vertices(removed)
    local = {v: i for i, v in enumerate(keep)}
    src = [local[b] for b in sources]
    src_mask = 0
    for b in src:
        src_mask |= 1 << b

    comps = strongly_connected_components(sub)
    comp_of = [0] * sub.n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    # Tarjan emits sinks first, so successors are finished before predecessors
    reach = [0] * len(comps)
    for ci, comp in enumerate(comps):
        acc = 0
        for v in comp:
            acc |= 1 << v
            for w in sub.out_neighbors(v):
                cw = comp_of[w]
                if cw != ci:
                    acc |= reach[cw]
        reach[ci] = acc
    return sum((reach[comp_of[b]] & src_mask & ~(1 << b)).bit_count() for b in src)


def check_extremal_sharpness(n: int) -> SharpnessReport:
    if n < 3:
        raise GraphError(f"sharpness is only claimed for n >= 3, got {n}")
    w = build_extremal(n)
    actual = semi_degree_report(w.graph).delta0
    has_factor = find_one_factor(w.graph) is not None
    violations = reachability_violations(w.graph, w.part.members("B"), w.part.members("D"))
    return SharpnessReport(n, threshold(n) - 1, actual, has_factor, violations)


def sharpness_sweep(n_lo: int, n_hi: int) -> list[SharpnessReport]:
    return [check_extremal_sharpness(n) for n in range(n_lo, n_hi + 1)]


@dataclasses.dataclass(frozen=True)
class ConditionFlags:
    n: int
    kko: bool
    haggkvist_star: bool


def check_degree_conditions(graph: Digraph) -> ConditionFlags:
    """``δ⁰ >= ⌈(3n-4)/8⌉`` and ``δ* > (3n-3)/2``."""
    n = graph.n
    if n < 3:
        raise GraphError("degree conditions are stated for n >= 3")
    rep = semi_degree_report(graph)
    return ConditionFlags(n, rep.delta0 >= threshold(n), 2 * rep.delta_star > 3 * n - 3)


# --------------------------------------------------------------------------
# expansion


@dataclasses.dataclass(frozen=True)
class ExpansionResult:
    """``subset`` is a witness or ``None``; ``gap`` is ``|N+(S)| - |S|`` of the best set seen."""

    subset: frozenset[int] | None
    exact: bool
    gap: int | None

    @property
    def found(self) -> bool:
        return self.subset is not None


def size_window(k: int) -> range:
    """Integers strictly between ``k/3`` and ``2k/3``."""
    return range(k // 3 + 1, (2 * k - 1) // 3 + 1)


def _exact_nonexpanding(R: Digraph, c: float) -> ExpansionResult:
    k = R.n
    window = size_window(k)
    if not window:
        return ExpansionResult(None, True, None)
    nb = np.zeros(1 << k, dtype=np.uint32)
    for i, out in enumerate(R.out_masks):
        lo = 1 << i
        nb[lo:2 * lo] = nb[:lo] | np.uint32(out)
    masks = np.arange(1 << k, dtype=np.uint32)
    size = np.bitwise_count(masks).astype(np.int16)
    del masks
    gap = np.bitwise_count(nb).astype(np.int16) - size
    del nb
    in_window = (size >= window.start) & (size < window.stop)
    gap = np.where(in_window, gap, np.int16(np.iinfo(np.int16).max))
    best = int(np.argmin(gap))
    best_gap = int(gap[best])
    if best_gap < 2 * c * k:
        return ExpansionResult(frozenset(bits(best)), True, best_gap)
    return ExpansionResult(None, True, best_gap)


def _local_search_nonexpanding(R: Digraph, c: float, seed: int | str, restarts: int, steps: int) -> ExpansionResult:
    k = R.n
    window = size_window(k)
    if not window:
        return ExpansionResult(None, False, None)
    rng = random.Random(seed)
    outs = R.out_masks
    full = (1 << k) - 1

    def nbhd(s: int) -> int:
        acc = 0
        for v in bits(s):
            acc |= outs[v]
        return acc

    def gap_of(s: int) -> int:
        return nbhd(s).bit_count() - s.bit_count()

    def closure(target: int) -> int:
        """Every vertex whose out-neighbourhood lies inside ``target``."""
        return sum(1 << v for v in range(k) if outs[v] & ~target & full == 0)

    best_set = 0
    best_gap = math.inf
    for _ in range(restarts):
        cur = sum(1 << v for v in rng.sample(range(k), rng.choice(window)))
        cur_gap = gap_of(cur)
        for _ in range(steps):
            moves = [cur ^ (1 << v) for v in range(k)]
            target = nbhd(cur)
            moves.extend(closure(target & ~(1 << t)) for t in bits(target))
            moves.append(closure(target))
            scored = [(gap_of(m), m) for m in moves if m.bit_count() in window]
            if not scored:
                break
            move_gap, move = min(scored)
            if move_gap >= cur_gap:
                break
            cur_gap, cur = move_gap, move
        if cur_gap < best_gap:
            best_gap, best_set = cur_gap, cur
        if best_gap < 2 * c * k:
            break
    hit = best_gap < 2 * c * k
    return ExpansionResult(frozenset(bits(best_set)) if hit else None, False, int(best_gap))


def find_nonexpanding_set(
    R: Digraph, c: float, seed: int | str | None = None, restarts: int = 200, steps: int = 200
) -> ExpansionResult:
    """A set ``S`` with ``k/3 < |S| < 2k/3`` and ``|N+(S)| < |S| + 2ck``.

    Exact enumeration for ``k <= 24`` (returns the most deficient such set,
    lowest bitmask on ties). Larger graphs fall back to seeded local search,
    whose result has ``exact=False``; a ``None`` subset then only means none
    was found.
    """
    if R.n < 3:
        raise GraphError("expansion check needs at least 3 vertices")
    if not 0 < c < 1:
        raise GraphError("c must lie strictly between 0 and 1")
    if R.n <= EXACT_EXPANSION_MAX_K:
        return _exact_nonexpanding(R, c)
    if seed is None:
        raise GraphError(f"k = {R.n} > {EXACT_EXPANSION_MAX_K} needs the seeded heuristic: pass a seed")
    return _local_search_nonexpanding(R, c, seed, restarts, steps)


# --------------------------------------------------------------------------
# theorem scan


@dataclasses.dataclass
class ScanRow:
    n: int
    threshold: int
    found: int = 0
    none: int = 0
    unknown: int = 0
    flagged: list[str] = dataclasses.field(default_factory=list)


@dataclasses.dataclass
class ScanReport:
    seed: int
    samples_per_n: int
    rows: list[ScanRow]

    @property
    def total_none(self) -> int:
        return sum(r.none for r in self.rows)

    @property
    def total_unknown(self) -> int:
        return sum(r.unknown for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples_per_n": self.samples_per_n,
            "rows": [dataclasses.asdict(r) for r in self.rows],
        }


def sample_seed(seed: int, n: int, index: int) -> str:
    """Per-sample seed; depends only on (seed, n, index), never on scheduling."""
    return f"{seed}:{n}:{index}"


def _scan_one_n(n: int, samples: int, seed: int, max_nodes: int) -> tuple[int, int, list[tuple[int, str, str]]]:
    t = threshold(n)
    tally = {Status.FOUND: 0, Status.NONE: 0, Status.UNKNOWN: 0}
    notable = []
    for index in range(samples):
        graph = random_oriented(n, t, sample_seed(seed, n, index))
        status = find_hamilton_cycle(graph, SearchBudget(max_nodes)).status
        tally[status] += 1
        if status is not Status.FOUND:
            notable.append((index, status.value, to_edge_list(graph)))
    return tally[Status.FOUND], tally[Status.UNKNOWN], notable


def theorem_scan(
    n_lo: int,
    n_hi: int,
    samples_per_n: int,
    seed: int,
    max_nodes: int = 10_000_000,
    artifact_dir: str | Path | None = None,
    workers: int = 1,
) -> ScanReport:
    """Draw graphs at the threshold and tally FOUND / NONE / UNKNOWN per ``n``.

    NONE results are written as flagged edge-list files under ``artifact_dir``
    (when given) and listed in the report. They are observations about small
    ``n``, not failures.
    """
    if n_lo < 3:
        raise GraphError("scan range must start at n >= 3")
    ns = list(range(n_lo, n_hi + 1))
    for n in ns:
        # the sampler needs the threshold to be attainable by an oriented graph
        assert threshold(n) <= (n - 1) // 2, n
    if samples_per_n <= 0:
        return ScanReport(seed, samples_per_n, [])

    jobs = [(n, samples_per_n, seed, max_nodes) for n in ns]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_one_n, *zip(*jobs)))
    else:
        results = [_scan_one_n(*job) for job in jobs]

    rows = []
    for n, (found, unknown, notable) in zip(ns, results):
        row = ScanRow(n, threshold(n), found=found, unknown=unknown)
        for index, status, text in notable:
            if status != Status.NONE.value:
                continue
            row.none += 1
            name = f"scan-n{n}-seed{seed}-i{index}-NONE.el"
            if artifact_dir is not None:
                path = Path(artifact_dir)
                path.mkdir(parents=True, exist_ok=True)
                (path / name).write_text(text)
            row.flagged.append(name)
            log.warning("flagged: n=%d sample %d has no Hamilton cycle (%s)", n, index, name)
        rows.append(row)
    return ScanReport(seed, samples_per_n, rows)
