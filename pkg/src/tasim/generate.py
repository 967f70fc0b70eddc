"""Random game graphs for property tests and oracle comparisons."""

import random

from .games import GameGraph


def random_game(seed, n=None, max_weight=3, cobuchi_prob=0.4, n_range=(2, 7)):
    """Random turn-based game. Out-degree 1, 2 or 3 (probabilities .5/.35/.15),
    no parallel edges, integer weights in [-max_weight, max_weight]."""
    rng = random.Random(seed)
    if n is None:
        n = rng.randint(*n_range)
    owners = [rng.choice((1, 2)) for _ in range(n)]
    edges = []
    for v in range(n):
        d = rng.choices((1, 2, 3), weights=(50, 35, 15))[0]
        for t in rng.sample(range(n), min(d, n)):
            edges.append((v, t, rng.randint(-max_weight, max_weight)))
    C = [v for v in range(n) if rng.random() < cobuchi_prob]
    return GameGraph(owners, edges, cobuchiA=C)


def random_automaton(seed, n_locs=None, cmax=None, obs=("a", "b")):
    """Small one-clock automaton with random guards, invariants and resets. Not
    necessarily well-formed; filter with regions.check_well_formed."""
    from .timed import make_automaton

    rng = random.Random(seed)
    n = n_locs or rng.randint(1, 3)
    cmax = cmax or rng.randint(1, 3)
    names = [f"l{i}" for i in range(n)]
    locations = []
    for name in names:
        inv = [("x", "<=", rng.randint(1, cmax))] if rng.random() < 0.4 else []
        locations.append((name, {rng.choice(obs)}, inv))
    edges = []
    for src in names:
        for _ in range(rng.randint(1, 2)):
            op = rng.choice(("<", "<=", "==", ">=", ">"))
            c = rng.randint(0 if op != "<" else 1, cmax)
            reset = ["x"] if rng.random() < 0.6 else []
            edges.append((src, rng.choice(names), [("x", op, c)], reset))
    init_loc = names[0]
    return make_automaton(["x"], cmax, locations, edges, [(init_loc, {"x": 0})])
