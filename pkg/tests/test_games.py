from fractions import Fraction

import pytest

from tasim.games import (
    GameError,
    GameGraph,
    attractor,
    cycle_mean,
    max_mpc_strategy,
    reachable_cycle_mean,
    solve_cobuchi_disjunction,
    solve_max_mpc,
    solve_mean_payoff,
    solve_mpc,
)
from tasim.generate import random_game
from tasim.graphs import INF, is_nontrivial, sccs
from tasim.oracle import OracleLimit, evaluate_fixed, oracle_enumerate


def test_graph_validation():
    with pytest.raises(GameError):
        GameGraph([1, 2], [(0, 1, 0)])  # state 1 has no successor
    with pytest.raises(GameError):
        GameGraph([3], [(0, 0, 0)])
    with pytest.raises(GameError):
        GameGraph([1], [(0, 4, 0)])
    g = GameGraph([1, 2], [(0, 1, -4), (1, 0, 2)])
    assert g.W == 4 and g.n == 2


def test_attractor_examples():
    chain = GameGraph([1, 1, 1], [(0, 1, 0), (1, 2, 0), (2, 2, 0)])
    assert attractor(chain, 1, {2}) == {0, 1, 2}
    escape = GameGraph([2, 1, 1], [(0, 1, 0), (0, 2, 0), (1, 1, 0), (2, 2, 0)])
    assert 0 not in attractor(escape, 1, {1})
    assert attractor(escape, 1, set()) == set()


def test_attractor_monotone_idempotent():
    for seed in range(50):
        g = random_game(seed)
        t = {0}
        a = attractor(g, 1, t)
        assert attractor(g, 1, a) == a
        assert a <= attractor(g, 1, t | {g.n - 1})


def test_cobuchi_examples():
    g = GameGraph([1, 2], [(0, 1, 0), (1, 0, 0)], cobuchiA={0, 1}, cobuchiB=set())
    assert solve_cobuchi_disjunction(g).win1 == {0, 1}
    # q0 chooses between a loop in C1\C2 and one in C2\C1
    g = GameGraph([1, 1, 1], [(0, 1, 0), (0, 2, 0), (1, 1, 0), (2, 2, 0)],
                  cobuchiA={0, 1}, cobuchiB={0, 2})
    assert 0 in solve_cobuchi_disjunction(g).win1
    # player 2 alternates a non-C1 state and a non-C2 state
    g = GameGraph([2, 2], [(0, 1, 0), (1, 0, 0)], cobuchiA={1}, cobuchiB={0})
    assert solve_cobuchi_disjunction(g).win1 == frozenset()
    with pytest.raises(GameError):
        solve_cobuchi_disjunction(GameGraph([1], [(0, 0, 0)], cobuchiA={0}))


def _random_two_sets(seed):
    import random
    g = random_game(seed)
    rng = random.Random(seed + 10 ** 6)
    return g.with_cobuchi(g.cobuchiA, [v for v in range(g.n) if rng.random() < 0.5])


@pytest.mark.parametrize("seed", range(150))
def test_cobuchi_strategies_are_winning(seed):
    g = _random_two_sets(seed)
    win1, s1, s2 = solve_cobuchi_disjunction(g)
    C1, C2 = g.cobuchiA, g.cobuchiB
    # closed under s1, and every strongly connected set inside win1 sits in C1 or C2
    succ = [[] for _ in range(g.n)]
    for v in win1:
        nxt = [s1[v]] if g.owners[v] == 1 else g.successors(v)
        assert all(u in win1 for u in nxt)
        succ[v] = nxt
    _, comps = sccs(g.n, succ)
    for comp in comps:
        if comp[0] in win1 and is_nontrivial(comp, succ):
            assert set(comp) <= C1 or set(comp) <= C2
    # player 2 with one bit: every lasso from a losing state visits both complements
    lose = set(range(g.n)) - win1
    for v in lose:
        if g.owners[v] == 2:
            assert s2[(v, 0)] in lose and s2[(v, 1)] in lose
    # brute force over player-1 memoryless strategies on small games
    if g.n <= 6:
        import itertools
        p1 = [v for v in range(g.n) if g.owners[v] == 1]
        best = set()
        for combo in itertools.product(*[g.successors(v) for v in p1]):
            fixed = dict(zip(p1, combo))
            sc = [[fixed[v]] if v in fixed else g.successors(v) for v in range(g.n)]
            comp_of, cs = sccs(g.n, sc)
            badc = set(i for i, c in enumerate(cs)
                       if is_nontrivial(c, sc) and not (set(c) <= C1 or set(c) <= C2))
            from tasim.graphs import reachable
            for q in range(g.n):
                if not any(comp_of[u] in badc for u in reachable(sc, [q])):
                    best.add(q)
        assert best == set(win1)


def test_cycle_mean_examples():
    g = GameGraph([1], [(0, 0, 0)])
    assert cycle_mean(g) == [((0,), 0)]
    g = GameGraph([1] * 4, [(0, 1, -9), (1, 2, 4), (2, 3, 4), (3, 0, 1)])
    assert cycle_mean(g, "max")[0][1] == 0
    g = GameGraph([1, 1, 1], [(0, 1, 0), (0, 2, 0), (1, 1, 0), (2, 2, 1)])
    assert reachable_cycle_mean(g, 0, "max") == 1
    assert reachable_cycle_mean(g, 0, "min") == 0


def test_mean_payoff_examples():
    assert solve_mean_payoff(GameGraph([1], [(0, 0, 5)])) == {0: 5}
    edges = [(0, 1, 0), (0, 2, 0), (1, 1, 2), (2, 2, 3)]
    assert solve_mean_payoff(GameGraph([1, 1, 1], edges))[0] == 2
    assert solve_mean_payoff(GameGraph([2, 1, 1], edges))[0] == 3
    assert solve_mean_payoff(GameGraph([1, 1, 1], edges), "player1-max")[0] == 3


@pytest.mark.parametrize("seed", range(100))
def test_mean_payoff_bounds_and_fixed_graphs(seed):
    g = random_game(seed)
    vals = solve_mean_payoff(g)
    assert all(-g.W <= v <= g.W for v in vals.values())
    # one-player graph: extreme reachable cycle mean
    solo = GameGraph([2] * g.n, g.edges)
    v = solve_mean_payoff(solo)
    assert all(v[q] == reachable_cycle_mean(solo, q, "max") for q in range(g.n))
    solo = GameGraph([1] * g.n, g.edges)
    v = solve_mean_payoff(solo)
    assert all(v[q] == reachable_cycle_mean(solo, q, "min") for q in range(g.n))


def test_mpc_examples():
    edges = [(0, 1, 0), (0, 2, 0), (1, 1, 5), (2, 2, 1)]
    g = GameGraph([1, 1, 1], edges, cobuchiA={0, 1, 2})
    assert set(solve_mpc(g).values()) == {0}
    g = GameGraph([1, 1, 1], edges, cobuchiA={1})
    assert solve_mpc(g)[0] == 0
    assert oracle_enumerate(g, "mp:cobuchi")[0] == 0
    g = GameGraph([1, 1, 1], edges, cobuchiA=set())
    assert solve_mpc(g) == solve_mean_payoff(g)


def test_mpc_needs_memory_below_zero():
    # looping k times at -5 inside C and then one excursion through the non-C state
    # drives the average towards -5; every memoryless choice scores 0
    g = GameGraph([1, 2], [(0, 0, -5), (0, 1, 100), (1, 0, 100)], cobuchiA={0})
    assert solve_mpc(g) == {0: -5, 1: -5}
    assert oracle_enumerate(g, "mp:cobuchi") == {0: 0, 1: 0}


def test_max_mpc_examples():
    edges = [(0, 1, 0), (0, 2, 0), (1, 1, 5), (2, 2, 1)]
    g = GameGraph([1, 1, 1], edges, cobuchiA={0, 1, 2})
    assert set(solve_max_mpc(g).values()) == {INF}
    g = GameGraph([1, 1, 1], edges, cobuchiA=set())
    assert solve_max_mpc(g) == solve_mean_payoff(g, "player1-max")
    g = GameGraph([1, 2, 1, 1], [(0, 1, 0), (1, 2, 0), (1, 3, 0), (2, 2, -1), (3, 3, 2), (3, 2, 0)],
                  cobuchiA={2})
    assert solve_max_mpc(g) == {0: INF, 1: INF, 2: INF, 3: INF}


def test_duality_with_empty_c():
    for seed in range(100):
        g = random_game(seed).with_cobuchi(set())
        assert solve_mpc(g) == solve_mean_payoff(g)
        assert solve_max_mpc(g) == solve_mean_payoff(g, "player1-max")


@pytest.mark.parametrize("seed", range(120))
def test_max_mpc_oracle_and_strategy(seed):
    g = random_game(seed, n_range=(2, 8))
    vals = solve_max_mpc(g)
    assert vals == oracle_enumerate(g, "maxmp:cobuchi")
    s = max_mpc_strategy(g)
    choice = {q: g.successors(q).index(t) for q, t in s.items()}
    assert set(choice) == {q for q in range(g.n) if g.owners[q] == 1}
    assert evaluate_fixed(g, choice, "maxmp") == vals


@pytest.mark.parametrize("seed", range(120))
def test_mpc_against_memoryless_oracle(seed):
    g = random_game(seed, n_range=(2, 8))
    vals = solve_mpc(g)
    ref = oracle_enumerate(g, "mp:cobuchi")
    for q in range(g.n):
        # memory only ever helps player 1, and only below zero
        assert vals[q] <= ref[q]
        if vals[q] != ref[q]:
            assert vals[q] < 0


def test_oracle_limits():
    g = random_game(1, n=12)
    with pytest.raises(OracleLimit):
        oracle_enumerate(g, "mp:cobuchi")
    with pytest.raises(ValueError):
        oracle_enumerate(random_game(1, n=3), "bogus")


def test_single_player_oracle_is_direct_evaluation():
    # P2 forced cycle 0 -> 1 -> 0 with weights 3, -1: mean 1
    g = GameGraph([2, 2], [(0, 1, 3), (1, 0, -1)], cobuchiA=set())
    assert oracle_enumerate(g, "mp") == {0: Fraction(1), 1: Fraction(1)}
