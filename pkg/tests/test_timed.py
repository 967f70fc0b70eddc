from fractions import Fraction

import pytest

from tasim.fixtures import AUTOMATA, a1, a2, a5, a6
from tasim.graphs import INF
from tasim.timed import (
    ModelError,
    StepError,
    check_automaton,
    discrete_step,
    make_automaton,
    run_trace,
    scale_automaton,
    trace_distance,
    validate_automaton,
)


def _one_loc(guard, inv=(), cmax=10):
    return make_automaton(["x"], cmax, [("a", {"a"}, list(inv)), ("b", {"b"}, [])],
                          [("a", "b", [guard], ["x"])], [("a", {"x": 0})])


def test_fixtures_validate():
    for name, f in AUTOMATA.items():
        assert validate_automaton(f()) == [], name


def test_validation_errors():
    assert any("non-integer" in d for d in validate_automaton(_one_loc(("x", "==", 10.5))))
    assert any("unknown clock" in d for d in validate_automaton(_one_loc(("y", "==", 1))))
    assert any("outside" in d for d in validate_automaton(_one_loc(("x", "==", 11))))
    bad = make_automaton(["x"], 10, [("a", {"a"}, [])], [("a", "z9", [], [])], [("a", {})])
    assert any("z9" in d for d in validate_automaton(bad))
    with pytest.raises(ModelError) as err:
        check_automaton(bad)
    assert err.value.diagnostics
    start = make_automaton(["x"], 10, [("a", {"a"}, [("x", "<=", 2)])], [("a", "a", [], [])],
                           [("a", {"x": 3})])
    assert any("invariant" in d for d in validate_automaton(start))


def test_scaling():
    a = _one_loc(("x", "==", 10))
    assert scale_automaton(a, 1) == a
    b = scale_automaton(a, 2)
    assert b.edges[0].guard == (("x", "==", 20),)
    assert scale_automaton(a, 4).cmax == 40
    with pytest.raises(ValueError):
        scale_automaton(a, 0)


def test_discrete_step():
    a = a1()
    loc, val = discrete_step(a, ("a", {"x": 0}), 10, a.edges[0])
    assert loc == "b" and val == {"x": 0}
    loc, val = discrete_step(a, ("b", {"x": 0}), 0, a.edges[1])
    assert (loc, val) == ("c", {"x": 0})
    inv = _one_loc(("x", ">=", 0), inv=[("x", "<=", 10)])
    with pytest.raises(StepError):
        discrete_step(inv, ("a", {"x": 0}), 11, inv.edges[0])
    with pytest.raises(StepError):
        discrete_step(a, ("a", {"x": 0}), 3, a.edges[0])


def test_scaling_commutes_with_steps():
    a = a2()
    for alpha in (2, 3):
        b = scale_automaton(a, alpha)
        for edge_a, edge_b, d in ((a.edges[0], b.edges[0], 1), (a.edges[1], b.edges[1], 9)):
            src = edge_a.src
            la, va = discrete_step(a, (src, {"x": 0}), d, edge_a)
            lb, vb = discrete_step(b, (src, {"x": 0}), d * alpha, edge_b)
            assert la == lb and {x: v * alpha for x, v in va.items()} == vb


def _trace(a, durations):
    state = a.initial_states()[0]
    steps = []
    loc = state[0]
    for d in durations:
        e = next(e for e in a.outgoing(loc) if all(c == d or op != "==" for _, op, c in e.guard)
                 and (e.src != e.dst or e.src == loc))
        steps.append((d, e))
        loc = e.dst
    return run_trace(a, state, steps)


def test_reconstructed_traces():
    t1 = _trace(a1(), [10, 0, 5, 5, 5, 5, 5, 5])
    t2 = _trace(a2(), [1, 9, 5, 5, 5, 5, 5, 5])
    assert trace_distance(t1, t2, "maxdiff", 8) == 9
    assert trace_distance(t1, t2, "limmaxdiff", 8) == 0
    for m in ("maxdiff", "limmaxdiff", "limavg"):
        assert trace_distance(t1, t1, m, 8) == 0


def test_periodic_limavg():
    t5 = _trace(a5(), [10, 0, 5] * 4)
    t6 = _trace(a6(), [1, 9, 5] * 4)
    for h in (3, 6, 9, 12):
        assert trace_distance(t5, t6, "limavg", h) == 3
    assert trace_distance(t5, t6, "limmaxdiff", 12) == 9


def test_mismatch_and_horizon():
    t1 = [(frozenset("a"), 1), (frozenset("b"), 1)]
    t2 = [(frozenset("b"), 1), (frozenset("b"), 1)]
    assert trace_distance(t1, t2, "maxdiff", 2) == INF
    with pytest.raises(ValueError):
        trace_distance(t1, t2, "maxdiff", 3)


def _random_traces(rng, n, obs):
    return [(frozenset(o), Fraction(rng.randint(0, 8), 2)) for o in obs]


def test_metric_axioms():
    import random
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 8)
        obs = [rng.choice("ab") for _ in range(n)]
        t = [_random_traces(rng, n, obs) for _ in range(3)]
        for m in ("maxdiff", "limavg"):
            d = lambda x, y: trace_distance(x, y, m, n)
            assert d(t[0], t[0]) == 0
            assert d(t[0], t[1]) + d(t[1], t[2]) >= d(t[0], t[2])
