import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orientham.core import GraphError, semi_degree_report
from orientham.factor import OneFactor, find_one_factor
from orientham.generators import (
    Attachment,
    BlowUpSpec,
    PairMode,
    augment_extremal,
    bipartite_tournament_case1,
    bipartite_tournament_case2,
    blow_up,
    blowup_spec_from_json,
    blowup_spec_to_json,
    build_extremal,
    check_extremal_witness,
    circle_tournament,
    directed_cycle,
    random_oriented,
    rotational_tournament,
    table_row,
    threshold,
)
from orientham.hamilton import find_hamilton_cycle
from orientham.core import OrientedGraph

# n-form, then (|A|, |B|, |C|, |D|) as (coefficient of k, constant)
ROWS = {
    "8k-1": ((2, -1), (2, 1), (2, -1), (2, 0)),
    "8k": ((2, 0), (2, 1), (2, -1), (2, 0)),
    "8k+1": ((2, 0), (2, 1), (2, 0), (2, 0)),
    "8k+2": ((2, 0), (2, 2), (2, -1), (2, 1)),
    "8k+3": ((2, 0), (2, 2), (2, 0), (2, 1)),
    "8k+4": ((2, 1), (2, 2), (2, 0), (2, 1)),
    "8k+5": ((2, 1), (2, 2), (2, 1), (2, 1)),
    "8k+6": ((2, 2), (2, 2), (2, 1), (2, 1)),
}


def _n_of(form, k):
    return 8 * k + (int(form[2:]) if len(form) > 2 else 0)


@pytest.mark.parametrize("form", list(ROWS))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_table_sizes(form, k):
    n = _n_of(form, k)
    expected = tuple(a * k + b for a, b in ROWS[form])
    w = build_extremal(n)
    assert w.part.sizes() == expected == w.sizes
    assert sum(expected) == n


def test_threshold_values():
    assert [threshold(n) for n in (3, 4, 7, 8, 11, 16)] == [1, 1, 3, 3, 4, 6]


def test_circle_tournament_5():
    g = circle_tournament(5)
    assert g.is_tournament()
    assert all(set(g.out_neighbors(i)) == {(i + 1) % 5, (i + 2) % 5} for i in range(5))


def test_circle_tournament_small_and_even():
    assert circle_tournament(1).m == 0
    g = circle_tournament(4)
    assert g.is_tournament()
    assert g.has_edge(0, 2) and g.has_edge(1, 3)
    degs = [len(g.out_neighbors(i)) for i in range(4)]
    assert sorted(degs) == [1, 1, 2, 2]


@pytest.mark.parametrize("s", range(1, 16))
def test_circle_tournament_near_regular(s):
    g = circle_tournament(s)
    assert g.is_tournament()
    assert all(abs(g.out_degree(v) - g.in_degree(v)) <= 1 for v in range(s))


def test_rotational_requires_odd():
    with pytest.raises(GraphError):
        rotational_tournament(6)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_bipartite_case1(k):
    bt = bipartite_tournament_case1(k)
    assert (len(bt.B), len(bt.D)) == (2 * k + 1, 2 * k)
    g = bt.graph
    for b in bt.B:
        assert len(g.out_neighbors(b)) + len(g.in_neighbors(b)) == 2 * k
    for b in bt.B:
        for d in bt.D:
            assert g.has_edge(b, d) != g.has_edge(d, b)
    # each b meets D in at least k in each direction
    assert all(min(g.out_degree(b), g.in_degree(b)) >= k for b in bt.B)


@pytest.mark.parametrize("k", [0, 1, 2, 4])
def test_bipartite_case2_degrees(k):
    bt = bipartite_tournament_case2(k)
    g = bt.graph
    assert (len(bt.B), len(bt.D)) == (2 * k + 2, 2 * k + 1)
    assert all(g.out_degree(b) == k + 1 and g.in_degree(b) == k for b in bt.B)
    assert all(g.out_degree(d) + g.in_degree(d) == 2 * k + 2 for d in bt.D)
    assert all(min(g.out_degree(d), g.in_degree(d)) >= k for d in bt.D)


def test_bipartite_case2_k1_labels():
    bt = bipartite_tournament_case2(1)
    g = bt.graph
    label = {b: i + 1 for i, b in enumerate(bt.B)}
    res = {d: i for i, d in enumerate(bt.D)}
    b2 = next(b for b in bt.B if label[b] == 2)
    assert {res[d] for d in g.out_neighbors(b2)} == {1, 2}
    d1 = next(d for d in bt.D if res[d] == 1)
    assert {label[b] for b in g.out_neighbors(d1)} == {1, 4}
    d0 = next(d for d in bt.D if res[d] == 0)
    assert {label[b] for b in g.out_neighbors(d0)} == {2}
    assert {label[b] for b in g.in_neighbors(d0)} == {1, 3, 4}


@pytest.mark.parametrize("n", [7, 8, 11, 14])
def test_extremal_examples(n):
    w = build_extremal(n)
    assert semi_degree_report(w.graph).delta0 == threshold(n) - 1
    assert find_one_factor(w.graph) is None
    assert check_extremal_witness(w) == []


def test_extremal_7_sizes():
    assert table_row(7) == (1, 7, (1, 3, 1, 2))
    assert build_extremal(11).sizes == (2, 4, 2, 3)


def test_extremal_small_n():
    with pytest.raises(GraphError):
        build_extremal(2)
    for n in range(3, 7):
        w = build_extremal(n)
        assert semi_degree_report(w.graph).delta0 == threshold(n) - 1
        assert check_extremal_witness(w) == []


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 2000))
def test_extremal_semi_degree_property(n):
    w = build_extremal(n)
    assert semi_degree_report(w.graph).delta0 == threshold(n) - 1
    assert w.graph.is_digon_free()


@pytest.mark.parametrize("n", [7, 8, 9, 10, 11])
def test_augmentation_keeps_non_hamiltonian(n):
    w = build_extremal(n)
    rng = random.Random(n)
    for _ in range(5):
        g = augment_extremal(w, rng)
        assert g.is_digon_free()
        assert find_one_factor(g) is None
        assert find_hamilton_cycle(g).status.value == "NONE"


def test_blow_up_directed_four_cycle_unit_sizes():
    spec = BlowUpSpec(directed_cycle(4), OneFactor.of([[0, 1, 2, 3]]), (1, 1, 1, 1))
    bu = blow_up(spec)
    assert set(bu.graph.edges()) == set(directed_cycle(4).edges())


def test_blow_up_triangle_size_two():
    spec = BlowUpSpec(directed_cycle(3), OneFactor.of([[0, 1, 2]]), (2, 2, 2))
    bu = blow_up(spec)
    assert bu.graph.n == 6 and bu.graph.m == 12
    assert bu.clusters == ((0, 1), (2, 3), (4, 5))
    assert find_hamilton_cycle(bu.graph).found


def test_blow_up_exceptional_vertices_last():
    R = OrientedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    spec = BlowUpSpec(R, OneFactor.of([[0, 1, 2, 3]]), (2, 2, 2, 2), exceptional=(Attachment(frozenset({2}), frozenset({0})),))
    bu = blow_up(spec)
    x = bu.exceptional[0]
    assert x == 8
    assert set(bu.graph.out_neighbors(x)) == set(bu.clusters[2])
    assert set(bu.graph.in_neighbors(x)) == set(bu.clusters[0])


def test_blow_up_spec_validation():
    with pytest.raises(GraphError):
        BlowUpSpec(directed_cycle(3), OneFactor.of([[0, 1, 2]]), (1, 0, 1))
    with pytest.raises(GraphError):
        BlowUpSpec(directed_cycle(3), OneFactor.of([[0, 2, 1]]), (1, 1, 1))
    with pytest.raises(GraphError):
        BlowUpSpec(
            directed_cycle(3), OneFactor.of([[0, 1, 2]]), (1, 1, 1),
            exceptional=(Attachment(frozenset({1}), frozenset({1})),),
        )


def test_blow_up_mindeg_needs_seed_and_keeps_degrees():
    spec = BlowUpSpec(circle_tournament(5), OneFactor.of([[0, 1, 2, 3, 4]]), (6,) * 5, PairMode("mindeg", 0.6, 0.1))
    with pytest.raises(GraphError):
        blow_up(spec)
    a = blow_up(spec, seed=3)
    assert a.graph == blow_up(spec, seed=3).graph
    for i in range(5):
        nxt = set(a.clusters[(i + 1) % 5])
        for u in a.clusters[i]:
            assert len(nxt & set(a.graph.out_neighbors(u))) >= 3


def test_blowup_spec_json_round_trip():
    R = OrientedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    spec = BlowUpSpec(
        R, OneFactor.of([[0, 1, 2, 3]]), (2, 2, 3, 3), PairMode("mindeg", 0.7, 0.2),
        (Attachment(frozenset({2}), frozenset({0})),),
    )
    assert blowup_spec_from_json(blowup_spec_to_json(spec)) == spec


@pytest.mark.parametrize("n,t", [(8, 2), (12, 4), (20, 7), (30, 10), (11, 5)])
def test_random_oriented_meets_target(n, t):
    g = random_oriented(n, t, seed=f"x{n}")
    assert g.n == n and g.is_digon_free()
    assert semi_degree_report(g).delta0 >= t
    assert g == random_oriented(n, t, seed=f"x{n}")


def test_random_oriented_impossible_target():
    with pytest.raises(GraphError):
        random_oriented(10, 5, seed=1)
