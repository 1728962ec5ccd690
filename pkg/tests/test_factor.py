import random

import pytest
from hypothesis import given, settings

from conftest import digraphs
from oracles import has_cycle_cover, hamilton_cycles, out_neighbourhood, random_digraph
from orientham.core import Digraph
from orientham.factor import (
    OneFactor,
    check_one_factor,
    find_one_factor,
    hall_violator,
    maximum_matching,
    solve_one_factor,
)
from orientham.generators import build_extremal, circle_tournament, directed_cycle


def _violator_ok(graph, s):
    edges = set(graph.edges())
    return bool(s) and len(out_neighbourhood(edges, s)) < len(s)


def test_directed_cycle_is_its_own_factor():
    f = find_one_factor(directed_cycle(5))
    assert f is not None and len(f.cycles) == 1 and sorted(f.cycles[0]) == list(range(5))
    assert hall_violator(directed_cycle(5)) is None


def test_two_triangles():
    g = Digraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
    f = find_one_factor(g)
    assert check_one_factor(g, f) == []
    assert sorted(map(sorted, f.cycles)) == [[0, 1, 2], [3, 4, 5]]


def test_source_vertex_gives_violator():
    g = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 1)])
    factor, violator = solve_one_factor(g)
    assert factor is None and _violator_ok(g, violator)


def test_digon_factor_allowed_in_digraph():
    g = Digraph.from_edges(2, [(0, 1), (1, 0)])
    f = find_one_factor(g)
    assert f is not None and check_one_factor(g, f) == []


@pytest.mark.parametrize("n", [7, 8, 11, 14, 40])
def test_extremal_has_no_factor(n):
    g = build_extremal(n).graph
    factor, violator = solve_one_factor(g)
    assert factor is None and _violator_ok(g, violator)


def test_check_one_factor_reports_problems():
    g = circle_tournament(5)
    assert check_one_factor(g, OneFactor.of([[0, 1, 2, 3, 4]])) == []
    assert check_one_factor(g, OneFactor.of([[0, 1, 2, 3]]))
    assert check_one_factor(g, OneFactor.of([[0, 4, 3, 2, 1]]))
    assert check_one_factor(directed_cycle(3), OneFactor.of([[0, 1, 2]])) == []


def test_maximum_matching_size_matches_factor_existence():
    g = circle_tournament(7)
    match = maximum_matching(g)
    assert all(m != -1 for m in match)


def test_duality_random_corpus():
    rng = random.Random(11)
    for trial in range(1000):
        n = rng.randint(1, 30)
        p = rng.choice([0.05, 0.1, 0.2, 0.4])
        g = Digraph.from_edges(*random_digraph(n, p, rng, oriented=trial % 2 == 0))
        factor, violator = solve_one_factor(g)
        assert (factor is None) != (violator is None)
        if factor is not None:
            assert check_one_factor(g, factor) == []
        else:
            assert _violator_ok(g, violator)


def test_cycle_cover_brute_force():
    rng = random.Random(12)
    for _ in range(200):
        n = rng.randint(1, 8)
        g = Digraph.from_edges(*random_digraph(n, rng.choice([0.15, 0.25, 0.4]), rng))
        assert (find_one_factor(g) is not None) == has_cycle_cover(g.n, set(g.edges()))


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=7))
def test_hamiltonian_implies_factor(g):
    if hamilton_cycles(g.n, set(g.edges())):
        assert find_one_factor(g) is not None
