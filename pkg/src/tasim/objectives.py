"""Debit-level and difference-level objectives, reduced to coBüchi and mean-payoff games
on products that track the running sum of weights."""

from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .games import NEG_INF, GameError, GameGraph, _cobuchi_disjunction, _max_wins, mp_cobuchi_core
from .graphs import INF, LimitExceeded, is_nontrivial, karp_cycle_mean, sccs

LevelSequence = namedtuple("LevelSequence", "EL DL AbsEL")

# product sizes (nodes) beyond which solving is refused; average products are solved
# by strategy iteration and get slow much earlier than the coBüchi-only products
PRODUCT_LIMIT = 100_000
AVERAGE_LIMIT = 5_000

NAMES = ("maxdl", "limmaxdl", "mp", "maxmp", "avdl", "maxdiff", "evmaxdiff", "avdiff")


class ObjectiveSpec(namedtuple("ObjectiveSpec", "name cobuchi")):
    """Parsed objective string such as "avdl" or "maxdiff:cobuchi"."""

    @classmethod
    def parse(cls, text):
        name, sep, suffix = text.strip().lower().partition(":")
        if name not in NAMES or (sep and suffix != "cobuchi"):
            raise ValueError(f"unknown objective {text!r}")
        return cls(name, bool(sep))

    def __str__(self):
        return self.name + (":cobuchi" if self.cobuchi else "")


def prefix_levels(play, g):
    """EL, DL and |EL| after each prefix of a finite play (EL of the empty prefix is 0)."""
    el = [0]
    for s, t in zip(play, play[1:]):
        w = next((w for u, w in g.succ(s) if u == t), None)
        if w is None:
            raise GameError(f"{s}->{t} is not an edge")
        el.append(el[-1] + w)
    return LevelSequence(el, [max(0, -x) for x in el], [abs(x) for x in el])


def bound_of(g):
    """|Q|·W, the largest finite value any of these objectives can take."""
    return g.n * g.W


# ------------------------------------------------------------------ products

class TrackedSumProduct:
    """Product game over nodes (base state, tag). Tags are ints (sums) or markers
    for absorbing overflow nodes; `base[i]` is the base state of node i."""

    def __init__(self, g, roots, step, good=None, penalty=None, limit=None):
        limit = PRODUCT_LIMIT if limit is None else limit
        index = {}
        nodes = []
        todo = []
        for r in roots:
            if r not in index:
                index[r] = len(nodes)
                nodes.append(r)
                todo.append(r)
        raw = []
        while todo:
            node = todo.pop()
            for nxt, w in step(node):
                if nxt not in index:
                    if len(nodes) >= limit:
                        raise LimitExceeded(f"sum-tracking product exceeds {limit} nodes")
                    index[nxt] = len(nodes)
                    nodes.append(nxt)
                    todo.append(nxt)
                raw.append((index[node], index[nxt], w))
        raw.sort(key=lambda e: e[0])  # keep base edge order per source
        self.nodes = nodes
        self.index = index
        self.base = [nd[0] for nd in nodes]
        C = g.cobuchiA or frozenset()
        lifted = [i for i, nd in enumerate(nodes) if nd[0] in C]
        goods = None if good is None else [i for i, nd in enumerate(nodes) if good(nd)]
        if penalty is not None:
            raw = [(s, t, penalty(nodes[s])) for s, t, _ in raw]
        self.game = GameGraph([g.owners[nd[0]] for nd in nodes], raw, lifted, goods)

    def __len__(self):
        return len(self.nodes)


def build_tracked_sum_product(g, bound, overflow_policy="sink", roots=None):
    """Sum-tracking product with sums in [-bound, bound].

    overflow_policy: "sink" routes crossings to absorbing nodes (q, "low") / (q, "high")
    that keep following the base graph; "clamp" clips the sum at the bounds.
    """
    if bound < g.W:
        raise ValueError("bound must be at least W")
    if overflow_policy not in ("sink", "clamp"):
        raise ValueError(f"unknown overflow policy {overflow_policy!r}")

    def step(node):
        q, l = node
        for t, w in g.succ(q):
            if isinstance(l, str):
                yield (t, l), w
                continue
            m = l + w
            if m > bound:
                yield ((t, "high") if overflow_policy == "sink" else (t, bound)), w
            elif m < -bound:
                yield ((t, "low") if overflow_policy == "sink" else (t, -bound)), w
            else:
                yield (t, m), w

    if roots is None:
        roots = [(q, 0) for q in range(g.n)]
    return TrackedSumProduct(g, roots, step)


def _c_of(g):
    if g.cobuchiA is None:
        raise GameError("objective needs the coBüchi set (use an empty set to disable it)")
    return g


def _wins(p):
    won, _, _ = _cobuchi_disjunction(p.game, p.game.cobuchiA, p.game.cobuchiB)
    return won


def _pick(states, n):
    return range(n) if states is None else states


# ------------------------------------------------------------------ maxDLC

def _credit_product(g, B, low_floor=None):
    """Nodes (q, c): c is the remaining credit. Without `low_floor` a negative credit
    enters the sticky (q, "bad") copy; otherwise it is clipped at -low_floor."""
    def step(node):
        q, c = node
        for t, w in g.succ(q):
            if c == "bad":
                yield (t, "bad"), w
                continue
            d = c + w
            if low_floor is None and d < 0:
                yield (t, "bad"), w
            else:
                lo = 0 if low_floor is None else -low_floor
                yield (t, max(lo, min(d, B))), w

    roots = [(q, c) for q in range(g.n) for c in range(B + 1)]
    if low_floor is None:
        good = lambda nd: nd[1] != "bad"
    else:
        good = lambda nd: nd[1] >= 0
    return TrackedSumProduct(g, roots, step, good=good)


def _least_credit(p, g, B, states):
    won = _wins(p)
    res = {}
    for q in _pick(states, g.n):
        res[q] = next((Fraction(c) for c in range(B + 1) if p.index[(q, c)] in won), INF)
    return res


def solve_maxdlc(g, states=None):
    """Opt(maxDLC): least initial credit with which player 1 keeps the debit level
    within it forever, unless the play ends up inside C."""
    g = _c_of(g)
    B = bound_of(g)
    return _least_credit(_credit_product(g, B), g, B, states)


def solve_limmaxdlc(g, states=None):
    """Opt(LimMaxDLC): least D such that the debit eventually stays at most D,
    unless the play ends up inside C. Sums are clipped at the top at |Q|·W and at
    the bottom at -(2|Q|·W+1)."""
    g = _c_of(g)
    B = bound_of(g)
    return _least_credit(_credit_product(g, B, low_floor=2 * B + 1), g, B, states)


# ------------------------------------------------------------------ averages

def _drifting(g, signs):
    """States where player 2 forces, for one of `signs`, a positive mean of sign*w while
    leaving C infinitely often. The sum then diverges linearly, so every average
    objective is infinite there. Positive cycle means are at least 1/|Q|."""
    out = _out_lists_of(g)
    found = set()
    for sign in signs:
        row = [[(t, sign * w) for t, w in r] for r in out]
        found |= _max_wins(g.owners, row, set(g.cobuchiA), 1, set(range(g.n)), Fraction(1, g.n))
    return found


def _out_lists_of(g):
    return [[(g.edges[k][1], g.edges[k][2]) for k in g.out[v]] for v in range(g.n)]


def _average(g, penalty, states, signs):
    g = _c_of(g)
    B = bound_of(g)
    K = 2 * B + 1
    targets = list(_pick(states, g.n))
    res = {}
    drift = _drifting(g, signs)
    for q in targets:
        if q in drift:
            res[q] = INF
    targets = [q for q in targets if q not in drift]
    if not targets:
        return res

    def step(node):
        q, l = node
        for t, w in g.succ(q):
            yield (t, max(-K, min(K, l + w))), w

    p = TrackedSumProduct(g, [(q, 0) for q in targets], step, penalty=penalty,
                          limit=AVERAGE_LIMIT)
    vals, _ = mp_cobuchi_core(len(p), p.game.owners, _out_lists_of(p.game), p.game.cobuchiA,
                              minimizer=1)
    for q in targets:
        v = vals[p.index[(q, 0)]]
        v = Fraction(0) if v == NEG_INF or v < 0 else v
        res[q] = INF if v > B else v
    return res


def solve_avdlc(g, states=None):
    """Opt(AvDLC): long-run average debit level, 0 for plays ending up inside C."""
    return _average(g, lambda nd: max(-nd[1], 0), states, (-1,))


# ------------------------------------------------------------------ differences

def _band_product(g, D, eventual, roots):
    """Two-sided threshold |sum| <= D, from the start (sticky violation) or eventually
    (sums clipped at +-(D + |Q|·W + 1))."""
    cap = D + bound_of(g) + 1

    def step(node):
        q, l = node
        for t, w in g.succ(q):
            if l == "bad":
                yield (t, "bad"), w
                continue
            m = l + w
            if not eventual and abs(m) > D:
                yield (t, "bad"), w
            else:
                yield (t, max(-cap, min(cap, m))), w

    if eventual:
        good = lambda nd: abs(nd[1]) <= D
    else:
        good = lambda nd: nd[1] != "bad"
    return TrackedSumProduct(g, roots, step, good=good)


def _least_band(g, eventual, states):
    B = bound_of(g)
    targets = list(_pick(states, g.n))
    roots = [(q, 0) for q in targets]
    cache = {}

    def winners(D):
        if D not in cache:
            p = _band_product(g, D, eventual, roots)
            won = _wins(p)
            cache[D] = set(q for q in targets if p.index[(q, 0)] in won)
        return cache[D]

    drift = _drifting(g, (1, -1))
    res = {q: INF for q in targets if q in drift}
    # gallop upward, so small finite values never build the widest product
    lo, D = 0, 0
    open_ = [q for q in targets if q not in res]
    while open_:
        won = winners(D)
        for q in [q for q in open_ if q in won]:
            a, b = lo, D
            while a < b:
                mid = (a + b) // 2
                if q in winners(mid):
                    b = mid
                else:
                    a = mid + 1
            res[q] = Fraction(a)
        open_ = [q for q in open_ if q not in won]
        if D >= B:
            break
        lo, D = D + 1, min(B, 2 * D + 1)
    for q in open_:
        res[q] = INF
    return res


def solve_diff(g, mode, states=None):
    """Opt of maxDiffLC ("max"), EvMaxDiffLC ("evmax") or AvDiffLC ("avg"): the debit
    objectives with |sum| in place of the debit."""
    g = _c_of(g)
    if mode == "max":
        return _least_band(g, False, states)
    if mode == "evmax":
        return _least_band(g, True, states)
    if mode == "avg":
        return _average(g, lambda nd: abs(nd[1]), states, (1, -1))
    raise ValueError(f"unknown diff mode {mode!r}")


# ------------------------------------------------------------------ strategies

@dataclass
class Witness:
    """Finite-memory player-1 strategy for a difference objective. The memory is the
    running sum of weights (the tick difference in simulation games),
    tracked the way the solving product tracks it: clipped at +-clip, or replaced by
    "bad" once it leaves [-bound, bound] when `bound` is set (max mode). `moves` maps
    (game state label, memory) to the chosen successor label; play starts at the
    label `start` with memory 0."""

    mode: str
    start: tuple
    moves: dict
    clip: Optional[int] = None
    bound: Optional[int] = None

    def update(self, m, w):
        if m == "bad":
            return m
        m += w
        if self.bound is not None and abs(m) > self.bound:
            return "bad"
        if self.clip is not None:
            m = max(-self.clip, min(self.clip, m))
        return m


def evaluate_witness(wit, game, labels):
    """Worst case, over all player-2 behaviours, of the objective when player 1
    follows `wit` from its start state (labels[i] names game state i). Plain
    graph analysis of the strategy-fixed product, independent of the solvers.
    Raises ValueError when the witness has no move for a reachable state."""
    pos = {lab: i for i, lab in enumerate(labels)}
    root = (pos[wit.start], 0)
    index = {root: 0}
    nodes = [root]
    succ = [[]]
    todo = [root]
    while todo:
        node = todo.pop()
        v, m = node
        if game.owners[v] == 1:
            key = (labels[v], m)
            if key not in wit.moves:
                raise ValueError(f"witness has no move at {key!r}")
            t = pos[wit.moves[key]]
            w = next(w for u, w in game.succ(v) if u == t)
            nxt = [(t, wit.update(m, w))]
        else:
            nxt = [(u, wit.update(m, w)) for u, w in game.succ(v)]
        i = index[node]
        for nd in nxt:
            if nd not in index:
                index[nd] = len(nodes)
                nodes.append(nd)
                succ.append([])
                todo.append(nd)
            succ[i].append(index[nd])
    C = game.cobuchiA
    _, comps = sccs(len(nodes), succ)
    # components in which the refined side can cycle forever while leaving C
    live = [c for c in comps if is_nontrivial(c, succ) and any(nodes[v][0] not in C for v in c)]
    size = lambda v: INF if nodes[v][1] == "bad" else abs(nodes[v][1])
    if wit.mode == "evmax":
        return max((size(v) for c in live for v in c), default=Fraction(0))
    if wit.mode == "avg":
        best = Fraction(0)
        for c in live:
            cs = set(c)
            edges = [(v, u, size(v)) for v in c for u in succ[v] if u in cs]
            best = max(best, karp_cycle_mean(c, edges, "max"))
        return best
    # max: every node from which such a component is still reachable counts
    pred = [[] for _ in nodes]
    for v, ss in enumerate(succ):
        for u in ss:
            pred[u].append(v)
    seen = set(v for c in live for v in c)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for u in pred[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return max((size(v) for v in seen), default=Fraction(0))


def _collect(labels, p, strat, root):
    """Product strategy restricted to nodes reachable from root, keyed by labels."""
    g = p.game
    seen = {root}
    todo = [root]
    out = {}
    while todo:
        v = todo.pop()
        if g.owners[v] == 1:
            nxt = [strat[v]]
            q, m = p.nodes[v]
            out[(labels[q], m)] = labels[p.nodes[strat[v]][0]]
        else:
            nxt = g.successors(v)
        for u in nxt:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return out


def diff_witness(g, mode, start, target, labels=None):
    """Player-1 strategy from state `start` achieving at most `target` (the solved
    value there) for diff mode "max", "evmax" or "avg". Re-evaluated with
    evaluate_witness before it is returned."""
    g = _c_of(g)
    labels = list(range(g.n)) if labels is None else labels
    if target == INF:
        raise ValueError("no witness for an infinite value")
    if mode in ("max", "evmax"):
        D = int(target)
        p = _band_product(g, D, mode == "evmax", [(start, 0)])
        won, s1, _ = _cobuchi_disjunction(p.game, p.game.cobuchiA, p.game.cobuchiB)
        root = p.index[(start, 0)]
        if root not in won:
            raise RuntimeError("witness start is not winning")
        strat = {v: p.game.edges[k][1] for v, k in s1.items()}
        if mode == "max":
            wit = Witness(mode, labels[start], {}, bound=D)
        else:
            wit = Witness(mode, labels[start], {}, clip=D + bound_of(g) + 1)
    elif mode == "avg":
        K = 2 * bound_of(g) + 1

        def step(node):
            q, l = node
            for t, w in g.succ(q):
                yield (t, max(-K, min(K, l + w))), w

        p = TrackedSumProduct(g, [(start, 0)], step, penalty=lambda nd: abs(nd[1]),
                              limit=AVERAGE_LIMIT)
        out = _out_lists_of(p.game)
        _, local = mp_cobuchi_core(len(p), p.game.owners, out, p.game.cobuchiA, 1, strategy=True)
        root = p.index[(start, 0)]
        strat = {v: out[v][k][0] for v, k in local.items()}
        wit = Witness(mode, labels[start], {}, clip=K)
    else:
        raise ValueError(f"unknown diff mode {mode!r}")
    wit.moves = _collect(labels, p, strat, root)
    if evaluate_witness(wit, g, labels) > target:
        raise RuntimeError("witness strategy failed re-evaluation")
    return wit


# ------------------------------------------------------------------ dispatch

def solve(g, objective, states=None):
    """Solve an ObjectiveSpec (or its string form). Without ":cobuchi" the coBüchi
    set is ignored."""
    from .games import solve_max_mpc, solve_mean_payoff, solve_mpc

    spec = objective if isinstance(objective, ObjectiveSpec) else ObjectiveSpec.parse(objective)
    if spec.cobuchi:
        if g.cobuchiA is None:
            raise GameError(f"{spec} needs a coBüchi set")
    else:
        g = g.with_cobuchi(set(), g.cobuchiB)
    name = spec.name
    if name == "mp":
        vals = solve_mpc(g) if spec.cobuchi else solve_mean_payoff(g)
    elif name == "maxmp":
        vals = solve_max_mpc(g) if spec.cobuchi else solve_mean_payoff(g, "player1-max")
    elif name == "maxdl":
        vals = solve_maxdlc(g, states)
    elif name == "limmaxdl":
        vals = solve_limmaxdlc(g, states)
    elif name == "avdl":
        vals = solve_avdlc(g, states)
    else:
        vals = solve_diff(g, {"maxdiff": "max", "evmaxdiff": "evmax", "avdiff": "avg"}[name], states)
    if states is not None:
        vals = {q: vals[q] for q in states}
    return vals
