"""Tick-weighted simulation games between two timed automata and the distance
pipeline built on them."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .games import GameGraph, _attractor
from .graphs import INF
from .objectives import Witness, diff_witness, solve_diff
from .regions import RegionGraph, check_well_formed
from .timed import ModelError, check_automaton, scale_automaton

METRICS = {"maxdiff": "max", "limmaxdiff": "evmax", "limavg": "avg"}

SINK = ("sink",)
WIN = ("win",)


class SimGame:
    """Game G(rr, rs). Player-2 states ("2", r, s) let the refined side move; player-1
    states ("1", r', s) let the spec side answer with a successor of matching
    observation, earning ticks(r') - ticks(s'). Unanswerable states lead to the
    sink (+1 self-loop, outside C); states where the refined side is stuck lead to
    an absorbing state inside C."""

    def __init__(self, rr, rs, zeno_check=True):
        self.rr, self.rs = rr, rs
        self.labels = []
        self.index = {}
        owners = []
        edges = []
        todo = []

        def add(lab):
            i = self.index.get(lab)
            if i is None:
                i = self.index[lab] = len(self.labels)
                self.labels.append(lab)
                owners.append(2 if lab[0] == "2" or lab == WIN else 1)
                todo.append(i)
            return i

        self.initial = {}
        for r0 in rr.initial:
            for s0 in rs.initial:
                if rr.obs[r0] == rs.obs[s0]:
                    self.initial[(r0, s0)] = add(("2", r0, s0))
        while todo:
            i = todo.pop(0)
            lab = self.labels[i]
            if lab in (SINK, WIN):
                edges.append((i, i, 1 if lab == SINK else 0))
                continue
            side, r, s = lab
            if side == "2":
                nxt = [(add(("1", r2, s)), 0) for r2 in rr.succ[r]] or [(add(WIN), 0)]
            else:
                nxt = [(add(("2", r, s2)), rr.ticks[r] - rs.ticks[s2])
                       for s2 in rs.succ[s] if rs.obs[s2] == rr.obs[r]] or [(add(SINK), 0)]
            edges.extend((i, j, w) for j, w in nxt)
        C = set()
        for i, lab in enumerate(self.labels):
            if lab == WIN or (zeno_check and lab != SINK and rr.ticks[lab[1]] == 0):
                C.add(i)
        self.game = GameGraph(owners, edges, cobuchiA=C)
        self.sink = self.index.get(SINK)
        self._trimmed = None
        self._values = {}

    def __len__(self):
        return len(self.labels)

    def trimmed(self):
        """Drop states from which player 2 forces the sink (their value is infinite for
        every objective) and states unreachable from the initial ones. Returns
        (game, labels, lost) with `lost` the forced-sink states in original numbering."""
        if self._trimmed is None:
            self._trimmed = self._trim()
        return self._trimmed

    def _trim(self):
        g = self.game
        lost = _attractor(g, 2, {self.sink})[0] if self.sink is not None else set()
        keep = []
        seen = set()
        todo = [i for i in sorted(set(self.initial.values())) if i not in lost]
        seen.update(todo)
        while todo:
            v = todo.pop()
            keep.append(v)
            for u in g.successors(v):
                if u not in lost and u not in seen:
                    seen.add(u)
                    todo.append(u)
        keep.sort()
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v], w) for u, v, w in g.edges if u in pos and v in pos]
        C = {pos[v] for v in g.cobuchiA if v in pos}
        sub = GameGraph([g.owners[v] for v in keep], edges, cobuchiA=C)
        return sub, [self.labels[v] for v in keep], lost


def build_sim_game(rr, rs, zeno_check=True):
    return SimGame(rr, rs, zeno_check)


@dataclass
class DistanceResult:
    metric: str
    alpha: int
    value: object  # Fraction or INF
    game_value: object = None
    witness: Optional["Witness"] = None

    @property
    def error_bound(self):
        return Fraction(1, self.alpha)

    @property
    def finite(self):
        return self.value != INF


def _alphabet(a):
    return frozenset().union(*(loc.obs for loc in a.locations))


def prepare(ar, as_, alpha, zeno_check=True):
    """Validate, scale and build both region graphs and the simulation game."""
    check_automaton(ar)
    check_automaton(as_)
    if _alphabet(ar) != _alphabet(as_):
        raise ModelError(["the automata have different observation alphabets"])
    sr, ss = scale_automaton(ar, alpha), scale_automaton(as_, alpha)
    rr, rs = RegionGraph(sr), RegionGraph(ss)
    for name, a, g in (("refined", sr, rr), ("spec", ss, rs)):
        if not check_well_formed(a, g):
            raise ModelError([f"{name} automaton has no time-divergent run from some initial state"])
    return SimGame(rr, rs, zeno_check)


def _combine(sg, per_state):
    """max over refined initial regions of min over matching spec initial regions."""
    worst = Fraction(0)
    for r0 in sg.rr.initial:
        opts = [per_state[i] for (r, s), i in sg.initial.items() if r == r0]
        best = min(opts) if opts else INF
        worst = max(worst, best)
    return worst


def compute_distance(ar, as_, metric, alpha, zeno_check=True, witness=False):
    """Quantitative simulation distance of `as_` (spec) simulating `ar` (refined),
    within 1/alpha."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    sg = prepare(ar, as_, alpha, zeno_check)
    vals = _initial_values(sg, METRICS[metric])
    gv = _combine(sg, vals)
    res = DistanceResult(metric, alpha, INF if gv == INF else gv / alpha, gv)
    if witness and res.finite:
        res.witness = extract_witness(res, sg)
    return res


def _initial_values(sg, mode):
    """Game value at each initial state, solved on the trimmed game (memoized)."""
    if mode not in sg._values:
        sg._values[mode] = _solve_initial(sg, mode)
    return sg._values[mode]


def _solve_initial(sg, mode):
    sub, labels, lost = sg.trimmed()
    pos = {lab: i for i, lab in enumerate(labels)}
    starts = sorted(set(sg.initial.values()))
    live = [pos[sg.labels[i]] for i in starts if i not in lost]
    sol = solve_diff(sub, mode, states=live) if live else {}
    return {i: INF if i in lost else sol[pos[sg.labels[i]]] for i in starts}


# ------------------------------------------------------------------ witnesses

def _pick_start(sg, per_state):
    """The (refined, spec) initial pair whose value the result reports."""
    best = None
    for r0 in sg.rr.initial:
        opts = sorted((per_state[i], i) for (r, s), i in sg.initial.items() if r == r0)
        if opts and (best is None or opts[0][0] > best[0]):
            best = opts[0]
    return best[1]


def extract_witness(result, sg):
    """Spec-side strategy achieving at most the game value from the reported initial
    pair, re-evaluated with evaluate_witness before it is returned. Raises ValueError
    on an infinite result."""
    if not result.finite:
        raise ValueError("no witness for an infinite distance")
    mode = METRICS[result.metric]
    g, labels, lost = sg.trimmed()
    vals = _initial_values(sg, mode)
    first = _pick_start(sg, vals)
    return diff_witness(g, mode, labels.index(sg.labels[first]), vals[first], labels)


def check_simulation(ar, as_):
    """Qualitative untimed simulation: can the spec always answer with a matching
    observation (avoid the sink) from some matching initial state?"""
    sg = prepare(ar, as_, 1)
    if sg.sink is None:
        lost = set()
    else:
        lost, _ = _attractor(sg.game, 2, {sg.sink})
    for r0 in sg.rr.initial:
        if not any(i not in lost for (r, s), i in sg.initial.items() if r == r0):
            return False
    return True
