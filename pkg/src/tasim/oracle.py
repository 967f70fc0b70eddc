"""Reference values by brute force over player-1 memoryless strategies.

For each strategy the remaining one-player graph is analysed directly (SCCs,
exact cycle means, shortest/longest paths).  This shares nothing with the
product constructions used by the real solvers, which is the point.
"""

import itertools
from fractions import Fraction

from .graphs import INF, LimitExceeded, is_nontrivial, karp_cycle_mean, reachable, sccs, shortest_paths


class OracleLimit(LimitExceeded):
    pass


OBJECTIVES = ("maxdl", "limmaxdl", "mp", "maxmp", "avdl", "maxdiff", "evmaxdiff", "avdiff")


class _View:
    """One-player graph left after fixing player 1's choices."""

    def __init__(self, n, edges, C):
        self.n = n
        self.edges = edges
        self.C = C
        self.succ = [[] for _ in range(n)]
        for s, t, _ in edges:
            self.succ[s].append(t)
        self.comp_of, self.comps = sccs(n, self.succ)
        self.nontriv = [is_nontrivial(c, self.succ) for c in self.comps]
        self.acc = [self.nontriv[i] and any(v not in C for v in c)
                    for i, c in enumerate(self.comps)]
        self._reach = {}

    def reach(self, q):
        r = self._reach.get(q)
        if r is None:
            r = self._reach[q] = reachable(self.succ, [q])
        return r

    def comp_edges(self, ci):
        co = self.comp_of
        return [(s, t, w) for s, t, w in self.edges if co[s] == ci and co[t] == ci]

    def coreach(self, targets):
        pred = [[] for _ in range(self.n)]
        for s, t, _ in self.edges:
            pred[t].append(s)
        return reachable(pred, targets)

    def all_c_cycle_from(self, q):
        sub = [[u for u in self.succ[v] if u in self.C] if v in self.C else []
               for v in range(self.n)]
        _, comps = sccs(self.n, sub)
        r = self.reach(q)
        return any(c[0] in r and is_nontrivial(c, sub) for c in comps)


def _mean_family(view, q, supremal):
    r = view.reach(q)
    if not supremal:
        best = Fraction(0) if view.all_c_cycle_from(q) else None
        for ci, comp in enumerate(view.comps):
            if view.acc[ci] and comp[0] in r:
                m = karp_cycle_mean(comp, view.comp_edges(ci), "max")
                if best is None or m > best:
                    best = m
        return best
    best = INF
    for ci, comp in enumerate(view.comps):
        if view.acc[ci] and comp[0] in r:
            m = karp_cycle_mean(comp, view.comp_edges(ci), "min")
            if m < best:
                best = m
    return best


def _comp_potential(view, ci):
    """(has_negative_cycle, has_nonzero_cycle, potential, tight_edges) for one SCC."""
    comp = view.comps[ci]
    es = view.comp_edges(ci)
    src = ("src",)
    dist, bad = shortest_paths(len(comp) + 1, es + [(src, v, 0) for v in comp], [src])
    if bad:
        return True, True, None, None
    tight = [(s, t, w) for s, t, w in es if dist[s] + w == dist[t]]
    nonzero = len(tight) != len(es)
    return False, nonzero, dist, tight


def _targets(view, ci):
    """Zero-weight strongly connected pieces of an accepting SCC that contain a non-C state."""
    neg, nonzero, pot, tight = _comp_potential(view, ci)
    if neg:
        return None
    comp = view.comps[ci]
    local = {v: i for i, v in enumerate(comp)}
    succ = [[] for _ in comp]
    for s, t, _ in tight:
        succ[local[s]].append(local[t])
    _, parts = sccs(len(comp), succ)
    res = []
    for part in parts:
        if not is_nontrivial(part, succ):
            continue
        states = [comp[i] for i in part]
        if any(v not in view.C for v in states):
            es = [(s, t, w) for s, t, w in tight if s in states and t in states]
            res.append((states, es))
    return res


def _path_extremes(view, q, allowed):
    """Min and max path weight from q to every allowed vertex (no cycles of the wrong sign)."""
    dmin, bad1 = shortest_paths(view.n, view.edges, [q], allowed)
    neg = [(s, t, -w) for s, t, w in view.edges]
    dneg, bad2 = shortest_paths(view.n, neg, [q], allowed)
    dmax = {v: -d for v, d in dneg.items()}
    return dmin, dmax, bad1 | bad2


def _debit_family(view, q, kind):
    r = view.reach(q)
    acc_comps = [ci for ci, comp in enumerate(view.comps) if view.acc[ci] and comp[0] in r]
    if not acc_comps:
        return Fraction(0)
    if kind == "maxdl":
        heads = [v for ci in acc_comps for v in view.comps[ci]]
        zone = view.coreach(heads) & r
        dmin, bad = shortest_paths(view.n, view.edges, [q], zone)
        if bad:
            return INF
        return Fraction(max(0, -min(dmin.values())))
    if kind == "maxdiff":
        heads = [v for ci in acc_comps for v in view.comps[ci]]
        zone = view.coreach(heads) & r
        for ci, comp in enumerate(view.comps):
            if comp[0] in zone and view.nontriv[ci] and _comp_potential(view, ci)[1]:
                return INF
        dmin, dmax, _ = _path_extremes(view, q, zone)
        return Fraction(max(max(-d for d in dmin.values()), max(dmax.values())))
    # eventual / average kinds look at where the play settles
    best = Fraction(0)
    debit = kind in ("limmaxdl", "avdl")
    settle = []
    for ci in acc_comps:
        if debit:
            ts = _targets(view, ci)
            if ts is None:
                return INF
            settle.extend(ts)
        else:
            neg, nonzero, _, tight = _comp_potential(view, ci)
            if nonzero:
                return INF
            settle.append((view.comps[ci], view.comp_edges(ci)))
    if not settle:
        return best
    for states, es in settle:
        zone = view.coreach(states) & r
        for ci, comp in enumerate(view.comps):
            if comp[0] not in zone or not view.nontriv[ci]:
                continue
            neg, nonzero, _, _ = _comp_potential(view, ci)
            if neg or (nonzero and not debit):
                return INF
        dmin, dmax, _ = _path_extremes(view, q, zone)
        if kind == "limmaxdl":
            best = max(best, Fraction(max(0, -min(dmin[v] for v in states))))
        elif kind == "avdl":
            pen = {v: max(0, -dmin[v]) for v in states}
            m = karp_cycle_mean(states, [(s, t, pen[s]) for s, t, _ in es], "max")
            best = max(best, m)
        elif kind == "evmaxdiff":
            best = max(best, Fraction(max(max(-dmin[v], dmax[v]) for v in states)))
        else:  # avdiff
            for d in (dmin, dmax):
                pen = {v: abs(d[v]) for v in states}
                m = karp_cycle_mean(states, [(s, t, pen[s]) for s, t, _ in es], "max")
                best = max(best, m)
    return best


def evaluate_fixed(g, strategy, objective, cobuchi=True, states=None):
    """Exact value of `objective` on the graph where player 1 plays `strategy`
    (state -> edge index into g.out[state]); player 2 responds optimally."""
    C = set(g.cobuchiA or ()) if cobuchi else set()
    edges = []
    for v in range(g.n):
        ks = g.out[v]
        if g.owners[v] == 1 and v in strategy:
            ks = [ks[strategy[v]]]
        for k in ks:
            edges.append(g.edges[k])
    view = _View(g.n, edges, C)
    res = {}
    for q in (range(g.n) if states is None else states):
        if objective in ("mp", "maxmp"):
            res[q] = _mean_family(view, q, objective == "maxmp")
        else:
            res[q] = _debit_family(view, q, objective)
    return res


def oracle_enumerate(g, objective, limit=10, cobuchi=None, max_strategies=200000):
    """Exact values by enumerating player-1 memoryless strategies.

    `objective` is an ObjectiveSpec string ("avdl", "maxdl:cobuchi", ...).
    """
    name, _, suffix = objective.partition(":")
    if name not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if cobuchi is None:
        cobuchi = suffix == "cobuchi"
    if g.n > limit:
        raise OracleLimit(f"oracle refuses games with more than {limit} states (got {g.n})")
    if cobuchi and name == "mp" and g.cobuchiA is None:
        raise ValueError("objective needs a coBüchi set")
    p1 = [v for v in range(g.n) if g.owners[v] == 1]
    ranges = [range(len(g.out[v])) for v in p1]
    total = 1
    for r in ranges:
        total *= len(r)
    if total > max_strategies:
        raise OracleLimit(f"{total} player-1 strategies exceed the limit {max_strategies}")
    supremal = name == "maxmp"
    best = {}
    for combo in itertools.product(*ranges):
        strat = dict(zip(p1, combo))
        vals = evaluate_fixed(g, strat, name, cobuchi)
        for q, v in vals.items():
            if q not in best:
                best[q] = v
            elif supremal:
                best[q] = max(best[q], v)
            else:
                best[q] = min(best[q], v)
    return {q: best[q] for q in range(g.n)}
