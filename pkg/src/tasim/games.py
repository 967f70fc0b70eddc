"""Turn-based two-player game graphs and the exact solver primitives.

Player 1 minimizes in the ordinary games and maximizes in the supremal ones.
Values are exact: ``fractions.Fraction`` for finite values, ``INF`` (float
infinity) for the infinite ones.
"""

from collections import namedtuple
from fractions import Fraction

from .graphs import INF, is_nontrivial, karp_cycle_mean, reachable, sccs

NEG_INF = -INF


class GameError(ValueError):
    pass


class GameGraph:
    """Immutable game graph. Edges are (src, dst, weight) in insertion order."""

    def __init__(self, owners, edges, cobuchiA=None, cobuchiB=None, names=None):
        self.owners = tuple(int(o) for o in owners)
        n = len(self.owners)
        for i, o in enumerate(self.owners):
            if o not in (1, 2):
                raise GameError(f"state {i}: owner must be 1 or 2, got {o}")
        es = []
        for s, t, w in edges:
            if not (0 <= s < n and 0 <= t < n):
                raise GameError(f"edge {s}->{t} references an unknown state")
            es.append((int(s), int(t), w))
        self.edges = tuple(es)
        out = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        for k, (s, t, _) in enumerate(es):
            out[s].append(k)
            inc[t].append(k)
        for v in range(n):
            if not out[v]:
                raise GameError(f"state {v} has no outgoing edge")
        self.out = tuple(tuple(x) for x in out)
        self.inc = tuple(tuple(x) for x in inc)
        self.cobuchiA = None if cobuchiA is None else frozenset(cobuchiA)
        self.cobuchiB = None if cobuchiB is None else frozenset(cobuchiB)
        self.names = None if names is None else tuple(names)
        self.W = max((abs(w) for _, _, w in es), default=0)

    @property
    def n(self):
        return len(self.owners)

    def succ(self, v):
        return [(self.edges[k][1], self.edges[k][2]) for k in self.out[v]]

    def successors(self, v):
        return [self.edges[k][1] for k in self.out[v]]

    def with_cobuchi(self, cobuchiA, cobuchiB=None):
        return GameGraph(self.owners, self.edges, cobuchiA, cobuchiB, self.names)

    def with_weights(self, fn):
        return GameGraph(self.owners, [(s, t, fn(w)) for s, t, w in self.edges],
                         self.cobuchiA, self.cobuchiB, self.names)

    def fix_strategy(self, strategy, player=1):
        """Strategy-fixed graph: `player`'s states keep only the chosen successor."""
        keep = []
        for s, t, w in self.edges:
            if self.owners[s] == player and s in strategy and strategy[s] != t:
                continue
            keep.append((s, t, w))
        return GameGraph(self.owners, keep, self.cobuchiA, self.cobuchiB, self.names)

    def __repr__(self):
        return f"GameGraph(n={self.n}, edges={len(self.edges)}, W={self.W})"


CobuchiResult = namedtuple("CobuchiResult", "win1 s1 s2")


def _edge_strategy_to_succ(g, strat):
    return {v: g.edges[k][1] for v, k in strat.items()}


def _attractor(g, player, target, arena=None):
    """Attractor restricted to `arena` (edges leaving the arena are ignored).
    Returns (set, {state: edge index}) for states of `player` added by the fixpoint."""
    inside = (lambda v: True) if arena is None else arena.__contains__
    attr = set(v for v in target if inside(v))
    strat = {}
    count = {}
    todo = list(attr)
    while todo:
        t = todo.pop()
        for k in g.inc[t]:
            s = g.edges[k][0]
            if s in attr or not inside(s):
                continue
            if g.owners[s] == player:
                attr.add(s)
                strat[s] = k
                todo.append(s)
            else:
                c = count.get(s)
                if c is None:
                    c = sum(1 for kk in g.out[s] if inside(g.edges[kk][1]))
                c -= 1
                count[s] = c
                if c == 0:
                    attr.add(s)
                    todo.append(s)
    return attr, strat


def attractor(g, player, target):
    """States from which `player` can force a visit to `target`."""
    return _attractor(g, player, set(target))[0]


def _cobuchi_disjunction(g, C1, C2):
    n = g.n
    bad = [set(v for v in range(n) if v not in C1), set(v for v in range(n) if v not in C2)]
    won = set()
    s1 = {}
    arena = set(range(n))
    progress = True
    while progress and arena:
        progress = False
        for i in (0, 1):
            z, _ = _attractor(g, 2, bad[i] & arena, arena)
            x = arena - z
            if not x:
                continue
            for v in sorted(x):
                if g.owners[v] == 1:
                    ks = [k for k in g.out[v] if g.edges[k][1] in x]
                    s1[v] = min(ks, key=lambda k: (g.edges[k][1], k))
            new, strat = _attractor(g, 1, won | x)
            for v, k in strat.items():
                if v not in won and v not in x:
                    s1[v] = k
            won = new
            arena = set(range(n)) - won
            progress = True
            break
    # player 2 on the remaining arena: one bit of memory, chasing bad[bit]
    s2 = {}
    if arena:
        chase = []
        for i in (0, 1):
            z, strat = _attractor(g, 2, bad[i] & arena, arena)
            chase.append(strat)
        for v in sorted(arena):
            if g.owners[v] != 2:
                continue
            for bit in (0, 1):
                goal = bit
                if v in bad[bit]:
                    goal = 1 - bit
                k = chase[goal].get(v)
                if k is None:
                    ks = [k for k in g.out[v] if g.edges[k][1] in arena]
                    k = min(ks, key=lambda k: (g.edges[k][1], k))
                s2[(v, bit)] = k
    return won, s1, s2


def solve_cobuchi_disjunction(g):
    """Player 1 wins Inf(play) within cobuchiA or Inf(play) within cobuchiB.

    Returns (win1, s1, s2): s1 maps player-1 states of win1 to a successor, s2 maps
    (player-2 state, bit) to a successor, where the bit names the Büchi set currently chased.
    """
    if g.cobuchiA is None or g.cobuchiB is None:
        raise GameError("both coBüchi sets must be given")
    won, s1, s2 = _cobuchi_disjunction(g, g.cobuchiA, g.cobuchiB)
    return CobuchiResult(frozenset(won), _edge_strategy_to_succ(g, s1),
                         {key: g.edges[k][1] for key, k in s2.items()})


# ---------------------------------------------------------------- cycle means

def cycle_mean(g, mode="max"):
    """Exact extreme cycle mean of every non-trivial SCC. Returns [(states, mean)]."""
    succ = [g.successors(v) for v in range(g.n)]
    comp_of, comps = sccs(g.n, succ)
    res = []
    for ci, comp in enumerate(comps):
        if not is_nontrivial(comp, succ):
            continue
        es = [(s, t, w) for s, t, w in g.edges if comp_of[s] == ci and comp_of[t] == ci]
        res.append((tuple(comp), karp_cycle_mean(comp, es, mode)))
    return res


def reachable_cycle_mean(g, state, mode="max"):
    """Extreme mean over the cycles reachable from `state`."""
    succ = [g.successors(v) for v in range(g.n)]
    reach = reachable(succ, [state])
    vals = [m for comp, m in cycle_mean(g, mode) if comp[0] in reach]
    return max(vals) if mode == "max" else min(vals)


# ---------------------------------------------------------------- mean payoff

def _evaluate(n, nxt, wt, exact=True):
    """Gain and bias of a functional graph (every state has one successor). With
    `exact` off the arithmetic is in floats (used only to warm-start)."""
    val = [None] * n
    bias = [None] * n
    mark = [0] * n
    for s in range(n):
        if mark[s]:
            continue
        path = []
        v = s
        while mark[v] == 0:
            mark[v] = 1
            path.append(v)
            v = nxt[v]
        if mark[v] == 1:
            i = path.index(v)
            cyc = path[i:]
            total = 0
            for u in cyc:
                total += wt[u]
            gain = Fraction(total) / len(cyc) if exact else total / len(cyc)
            ref = min(cyc)
            k = cyc.index(ref)
            order = cyc[k:] + cyc[:k]
            bias[ref] = Fraction(0) if exact else 0.0
            for u in reversed(order[1:]):
                bias[u] = wt[u] - gain + bias[nxt[u]]
            for u in cyc:
                val[u] = gain
                mark[u] = 2
            path = path[:i]
        for u in reversed(path):
            t = nxt[u]
            val[u] = val[t]
            bias[u] = wt[u] - val[u] + bias[t]
            mark[u] = 2
    return val, bias


def _improve(states, out, choice, val, bias, better):
    changed = False
    for v in states:
        cur = (val[v], bias[v])
        best = None
        bk = None
        for k, (u, w) in enumerate(out[v]):
            key = (val[u], w - val[v] + bias[u])
            if better(key, cur) and (best is None or better(key, best)):
                best, bk = key, k
        if bk is not None:
            choice[v] = bk
            changed = True
    return changed


def _gt(a, b):
    return a > b


def _lt(a, b):
    return a < b


_EPS = 1e-7


def _fgt(a, b):
    return a[0] > b[0] + _EPS or (a[0] > b[0] - _EPS and a[1] > b[1] + _EPS)


def _flt(a, b):
    return _fgt(b, a)


def _iterate(n, out, choice, maxs, mins, exact, max_rounds):
    gt, lt = (_gt, _lt) if exact else (_fgt, _flt)
    rounds = 0
    while True:
        while True:
            rounds += 1
            if rounds > max_rounds:
                if not exact:
                    return None, None
                raise RuntimeError("mean-payoff strategy improvement did not converge")
            nxt = [out[v][choice[v]][0] for v in range(n)]
            wt = [out[v][choice[v]][1] for v in range(n)]
            val, bias = _evaluate(n, nxt, wt, exact)
            if not _improve(maxs, out, choice, val, bias, gt):
                break
        if not _improve(mins, out, choice, val, bias, lt):
            return val, bias


def mean_payoff_values(n, owner, out, minimizer=1, max_rounds=100000):
    """Plain mean-payoff game by nested strategy improvement.

    out[v] is a list of (dst, weight). Returns (values, choice) where choice[v] indexes
    out[v]; for the minimizer the choice is the lowest-index optimal successor.
    """
    mins = [v for v in range(n) if owner[v] == minimizer]
    maxs = [v for v in range(n) if owner[v] != minimizer]
    choice = [0] * n
    for v in range(n):
        choice[v] = min(range(len(out[v])), key=lambda k: (out[v][k][0], k))
    if n > 64:
        # float rounds get close cheaply; the exact rounds below then certify
        warm = list(choice)
        if _iterate(n, out, warm, maxs, mins, False, 2 * n + 50)[0] is not None:
            choice = warm
    val, bias = _iterate(n, out, choice, maxs, mins, True, max_rounds)
    for v in mins:
        tight = [k for k, (u, w) in enumerate(out[v])
                 if val[u] == val[v] and w - val[v] + bias[u] == bias[v]]
        choice[v] = min(tight, key=lambda k: (out[v][k][0], k))
    return val, choice


def _out_lists(g, weights=None):
    out = []
    for v in range(g.n):
        row = []
        for k in g.out[v]:
            s, t, w = g.edges[k]
            row.append((t, w if weights is None else weights[k]))
        out.append(row)
    return out


def solve_mean_payoff(g, optimizer="player1-min"):
    """Exact mean-payoff values; player 1 minimizes ('player1-min') or maximizes."""
    if optimizer not in ("player1-min", "player1-max"):
        raise GameError(f"unknown optimizer {optimizer!r}")
    minimizer = 1 if optimizer == "player1-min" else 2
    val, choice = mean_payoff_values(g.n, g.owners, _out_lists(g), minimizer)
    return {v: val[v] for v in range(g.n)}


def mean_payoff_strategies(g, optimizer="player1-min"):
    minimizer = 1 if optimizer == "player1-min" else 2
    out = _out_lists(g)
    val, choice = mean_payoff_values(g.n, g.owners, out, minimizer)
    return {v: out[v][choice[v]][0] for v in range(g.n)}


# ------------------------------------------- mean payoff with coBüchi disjunct

def _subgame(owner, out, states, minimizer):
    """Induced subgame on `states` (edges leaving it are dropped). Player 1 of the
    returned graph is the minimizer. Also returns the local out lists."""
    loc = sorted(states)
    idx = {v: i for i, v in enumerate(loc)}
    owners = [1 if owner[v] == minimizer else 2 for v in loc]
    edges = []
    rows = []
    back = []
    for v in loc:
        row = []
        bk = []
        for k, (u, w) in enumerate(out[v]):
            if u in idx:
                edges.append((idx[v], idx[u], w))
                row.append((idx[u], w))
                bk.append(k)
        rows.append(row)
        back.append(bk)
    return loc, GameGraph(owners, edges), rows, back


def _analyse(owner, out, C, minimizer, S, cache):
    """Subgame on S, the minimizer's coBüchi win there and, when that is empty, the
    plain mean-payoff values. None of this depends on the threshold, so it is
    memoized per state set."""
    key = frozenset(S)
    hit = cache.get(key) if cache is not None else None
    if hit is None:
        loc, g, rows, back = _subgame(owner, out, S, minimizer)
        lC = set(i for i, v in enumerate(loc) if v in C)
        won, s1, _ = _cobuchi_disjunction(g, lC, set())
        val = choice = None
        if not won:
            val, choice = mean_payoff_values(len(loc), [1 if o == 1 else 2 for o in g.owners], rows, 1)
        hit = (loc, g, back, won, s1, val, choice)
        if cache is not None:
            cache[key] = hit
    return hit


def _max_wins(owner, out, C, minimizer, states, nu, strat=None, cache=None):
    """States of the subgame where the maximizer ensures Inf(play) meets the
    complement of C and limsup average >= nu. The subgame must be a trap for the
    minimizer or have his exits removed. If `strat` is a dict, memoryless
    minimizer choices (state -> index into out[state]) for the removed states are
    written into it."""
    S = set(states)
    while S:
        loc, g, back, won, s1, val, choice = _analyse(owner, out, C, minimizer, S, cache)
        if won:
            if strat is not None:
                for i in won:
                    if g.owners[i] == 1:
                        strat[loc[i]] = back[i][s1[i] - g.out[i][0]]
            S -= set(loc[i] for i in won)
            continue
        low = set(i for i in range(len(loc)) if val[i] < nu)
        if not low:
            break
        attr, astrat = _attractor(g, 1, low)
        if strat is not None:
            for i in attr:
                if g.owners[i] != 1:
                    continue
                if i in low:
                    strat[loc[i]] = back[i][choice[i]]
                else:
                    strat[loc[i]] = back[i][astrat[i] - g.out[i][0]]
        S -= set(loc[i] for i in attr)
    return S


def _trap_split(owner, out, states, winners, minimizer):
    """Sanity: every state keeps a successor inside its part."""
    for part in (winners, states - winners):
        for v in part:
            if not any(u in part for u, _ in out[v]):
                raise RuntimeError("threshold split is not a trap decomposition")


def mp_cobuchi_core(n, owner, out, C, minimizer=1, strategy=False):
    """Value of  f = -inf if Inf(play) within C, else limsup of average weights,
    with `minimizer` minimizing and the other player maximizing.

    Values are found by a divide-and-conquer threshold search. The threshold game
    (maximizer wants a non-C state infinitely often and limsup average >= nu) is
    solved by peeling minimizer attractors of coBüchi wins and of low mean-payoff
    regions. Finite values are cycle means, so their denominators are at most n and
    two distinct candidates differ by at least 1/n^2.

    Returns (values, strat); strat maps minimizer states to an index into out[v]
    when `strategy` is set, else it is empty.
    """
    W = max((abs(w) for row in out for _, w in row), default=0)
    C = set(C)
    values = [None] * n
    everything = set(range(n))
    cache = {}
    fin = _max_wins(owner, out, C, minimizer, everything, Fraction(-W - 1), cache=cache)
    for v in everything - fin:
        values[v] = NEG_INF
    gap = Fraction(1, max(n, 1) ** 2)
    todo = [(fin, Fraction(-W), Fraction(W))] if fin else []
    while todo:
        part, lo, hi = todo.pop()
        _, _, _, won, _, val, _ = _analyse(owner, out, C, minimizer, part, cache)
        if not won and len(set(val)) == 1 and lo <= val[0] <= hi:
            # no coBüchi escape and one mean everywhere: that mean is the value
            for v in part:
                values[v] = val[0]
            continue
        if hi - lo < gap:
            x = ((lo + hi) / 2).limit_denominator(n)
            if not lo <= x <= hi:
                raise RuntimeError("no candidate value in the final interval")
            for v in part:
                values[v] = x
            continue
        mid = (lo + hi) / 2
        win = _max_wins(owner, out, C, minimizer, part, mid, cache=cache)
        _trap_split(owner, out, part, win, minimizer)
        if win:
            todo.append((win, mid, hi))
        if part - win:
            todo.append((part - win, lo, mid))
    strat = {}
    if strategy:
        delta = gap / 2
        for x in sorted(set(v for v in values if v != NEG_INF)):
            s = {}
            _max_wins(owner, out, C, minimizer, everything, x + delta, s, cache)
            for v in range(n):
                if values[v] == x and owner[v] == minimizer:
                    strat[v] = s[v]
        s = {}
        _max_wins(owner, out, C, minimizer, everything, Fraction(-W - 1), s, cache)
        for v in range(n):
            if values[v] == NEG_INF and owner[v] == minimizer:
                strat[v] = s[v]
    return values, strat


def _sides(g, negate=False):
    out = []
    for v in range(g.n):
        row = []
        for k in g.out[v]:
            s, t, w = g.edges[k]
            row.append((t, -w if negate else w))
        out.append(row)
    return out


def solve_mpc(g):
    """Opt(MPC): player 1 minimizes; plays with Inf inside C score 0, others the
    limsup average. Values can be negative; then they are infima that player 1
    approaches with growing memory (see the decisions ledger)."""
    if g.cobuchiA is None:
        raise GameError("solve_mpc needs the coBüchi set")
    C = set(g.cobuchiA)
    core, _ = mp_cobuchi_core(g.n, g.owners, _sides(g), C, minimizer=1)
    # player 1 insisting on Büchi(not C) while driving the average down
    dual, _ = mp_cobuchi_core(g.n, g.owners, _sides(g, negate=True), C, minimizer=2)
    res = {}
    for v in range(g.n):
        neg_branch = -dual[v]
        if neg_branch < 0:
            res[v] = neg_branch
        else:
            c = core[v]
            res[v] = Fraction(0) if c == NEG_INF or c < 0 else c
    return res


def solve_max_mpc(g):
    """maxOpt(maxMPC): player 1 maximizes; coBüchi plays score +inf, others the liminf average."""
    if g.cobuchiA is None:
        raise GameError("solve_max_mpc needs the coBüchi set")
    core, _ = mp_cobuchi_core(g.n, g.owners, _sides(g, negate=True), set(g.cobuchiA), 1)
    return {v: (INF if core[v] == NEG_INF else -core[v]) for v in range(g.n)}


def max_mpc_strategy(g):
    core, strat = mp_cobuchi_core(g.n, g.owners, _sides(g, negate=True), set(g.cobuchiA), 1,
                                  strategy=True)
    return {v: g.edges[g.out[v][k]][1] for v, k in strat.items()}
