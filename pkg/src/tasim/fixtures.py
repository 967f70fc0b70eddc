"""Reconstructed example models: small game graphs and timed automata whose
expected values are known from the literature or by hand."""

from .games import GameGraph


def g0_game():
    """q0 -(-10)-> q1 -(+8)-> q2 <-(0)-> q3; player 1 everywhere, C empty."""
    return GameGraph([1] * 4, [(0, 1, -10), (1, 2, 8), (2, 3, 0), (3, 2, 0)], cobuchiA=set())


def g1_game():
    """Cycle q0 -> q1 -> q2 -> q0 with weights -1, +2, -1."""
    return GameGraph([1] * 3, [(0, 1, -1), (1, 2, 2), (2, 0, -1)], cobuchiA=set())


def debit_sum_game(right=True):
    """State a (0) with a left loop b1 b2 b3 (-9, +4, +4, +1) and, optionally, a right
    loop b4 b5 b6 (-5, +2, +2, +1). All states belong to player 1."""
    edges = [(0, 1, -9), (1, 2, 4), (2, 3, 4), (3, 0, 1)]
    n = 4
    if right:
        edges += [(0, 4, -5), (4, 5, 2), (5, 6, 2), (6, 0, 1)]
        n = 7
    return GameGraph([1] * n, edges, cobuchiA=set())


# ---------------------------------------------------------------- timed automata

def _chain(durations, reset_last, cyclic, cmax, locs="abc", extra=()):
    """Automaton visiting `locs` in order, each edge guarded by x == duration.
    An edge resets x unless its duration is 0 (then x keeps its value)."""
    from .timed import make_automaton

    names = list(locs)
    locations = [(n, {n}, []) for n in names]
    edges = []
    for i, d in enumerate(durations):
        src = names[i]
        dst = names[(i + 1) % len(names)] if cyclic else names[min(i + 1, len(names) - 1)]
        reset = ["x"] if d > 0 else []
        edges.append((src, dst, [("x", "==", d)], reset))
    if reset_last is not None:
        edges.append((names[-1], names[-1], [("x", "==", reset_last)], ["x"]))
    edges.extend(extra)
    return make_automaton(["x"], cmax, locations, edges, [(names[0], {"x": 0})])


def a1():
    """a -> b at x = 10 (reset), b -> c at once, then c loops every 5 time units."""
    return _chain([10, 0], 5, False, 10)


def a2():
    """a -> b at x = 1 (reset), b -> c at x = 9 (reset), then c loops every 5."""
    return _chain([1, 9], 5, False, 10)


def a3():
    """a and b alternate every time unit."""
    return _chain([1, 1], None, True, 1, locs="ab")


def a4():
    """a and b alternate every 2 time units."""
    return _chain([2, 2], None, True, 2, locs="ab")


def a5():
    """Cycle a -> b -> c -> a with durations 10, 0, 5."""
    return _chain([10, 0, 5], None, True, 10)


def a6():
    """Cycle a -> b -> c -> a with durations 1, 9, 5."""
    return _chain([1, 9, 5], None, True, 10)


def a1_zeno():
    """a1 plus a zero-time self-loop at b (guard x = 0, no reset)."""
    return _chain([10, 0], 5, False, 10, extra=[("b", "b", [("x", "==", 0)], [])])


def a2_zeno():
    """a2 plus a zero-time self-loop at b, so the spec side can stall with it."""
    return _chain([1, 9], 5, False, 10, extra=[("b", "b", [("x", "==", 0)], [])])


AUTOMATA = {"a1": a1, "a2": a2, "a3": a3, "a4": a4, "a5": a5, "a6": a6,
            "a1_zeno": a1_zeno, "a2_zeno": a2_zeno}
