import random
from fractions import Fraction

import pytest

from _sampling import concrete_moves, lasso_ok, lasso_results, random_run, sandwich_gaps, ticks_count_time, well_formed
from tasim.fixtures import a1, a3
from tasim.regions import (
    EnlargedState,
    RegionGraph,
    check_well_formed,
    region_count_bound,
    region_of,
    region_successors,
    representative,
)
from tasim.timed import ModelError, make_automaton


def _loop(guard=("x", "==", 1), reset=("x",), cmax=1, inv=()):
    return make_automaton(["x"], cmax, [("l", {"a"}, list(inv))],
                          [("l", "l", [guard], list(reset))], [("l", {"x": 0})])


def test_region_of_examples():
    a = make_automaton(["x"], 2, [("a", {"a"}, [])], [("a", "a", [], [])], [("a", {"x": 0})])
    r = region_of(EnlargedState("a", {"x": 0}, 0, 0), a)
    assert r.ints == (0,) and r.classes == (("x", "z"),)
    r = region_of(EnlargedState("a", {"x": Fraction(3, 2)}, Fraction(1, 2), 0), a)
    assert r.ints == (1,) and r.classes == ((), ("x", "z"))
    r = region_of(EnlargedState("a", {"x": 5}, 0, 0), a, strict=False)
    assert r.ints == (3,) and all("x" not in c for c in r.classes)
    with pytest.raises(ModelError):
        region_of(EnlargedState("a", {"x": 5}, 0, 0), a)


def test_successor_examples():
    loop = _loop()
    zero = RegionGraph(loop).nodes[0]
    assert [s.ticks for s in region_successors(zero, loop)] == [1]
    instant = _loop(("x", "==", 0), reset=())
    assert [s.ticks for s in region_successors(zero, instant)] == [0]
    a = a1()
    start = RegionGraph(a).nodes[0]
    assert [(s.loc, s.ticks) for s in region_successors(start, a)] == [("b", 10)]


def test_graph_examples():
    g = RegionGraph(_loop())
    assert sorted(set(g.ticks)) == [0, 1] and len(g) == 2
    g = RegionGraph(a3())
    assert all(g.ticks[i] == 1 for i in range(len(g)) if i not in g.initial)
    assert check_well_formed(a1()) and check_well_formed(_loop())
    stuck = _loop(("x", "<=", 0), reset=(), inv=[("x", "<=", 0)])
    assert not check_well_formed(stuck)


SAMPLE = well_formed(40)


def test_bound_and_ticks():
    for a, g in SAMPLE:
        assert len(g) <= region_count_bound(a)
        assert max(g.ticks) <= a.cmax


def test_representative_round_trip():
    for a, g in SAMPLE:
        for r in g.nodes:
            assert region_of(representative(r, a), a) == r


def test_bisimulation_soundness():
    # every region transition has a concrete witness from the representative
    for a, g in SAMPLE[:20]:
        for i, r in enumerate(g.nodes):
            s = representative(r, a)
            reached = set(region_of(t, a) for _, _, t in concrete_moves(a, s))
            for j in g.succ[i]:
                assert g.nodes[j] in reached


def test_concrete_runs_are_covered_and_ticks_count_time():
    rng = random.Random(3)
    for a, g in SAMPLE:
        run = random_run(a, rng, 12)
        for (s, _), (t, _) in zip(run, run[1:]):
            assert region_of(t, a) in region_successors(region_of(s, a), a)
        assert ticks_count_time(a, run)


def test_integer_time_sandwich():
    assert sandwich_gaps(SAMPLE, 200, 11) <= 1


def test_lassos_diverge_iff_ticks():
    """Repeat sampled region cycles concretely: time grows without bound iff the cycle
    carries a tick, and stays below one unit otherwise."""
    res = lasso_results(SAMPLE, 100, 5)
    assert len(res) == 100
    assert all(lasso_ok(t, e) for t, e in res)
    assert {t == 0 for t, _ in res} == {True, False}
