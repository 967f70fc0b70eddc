"""Timed automata: the syntactic model, validation, alpha-scaling, concrete steps and
finite-horizon trace metrics used as oracles."""

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .graphs import INF

OPS = ("<", "<=", "==", ">=", ">")


class ModelError(ValueError):
    """Invalid automaton. `diagnostics` lists every problem found."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class StepError(ValueError):
    pass


def holds(atom, val):
    """Evaluate one clock atom (clock, op, constant) on a concrete valuation."""
    x, op, c = atom
    v = val[x]
    if op == "<":
        return v < c
    if op == "<=":
        return v <= c
    if op == "==":
        return v == c
    if op == ">=":
        return v >= c
    return v > c


@dataclass(frozen=True)
class Location:
    name: str
    obs: frozenset = frozenset()
    inv: tuple = ()


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    guard: tuple = ()
    reset: frozenset = frozenset()


@dataclass(frozen=True)
class TimedAutomaton:
    clocks: tuple
    cmax: int
    locations: tuple
    edges: tuple
    init: tuple = field(default=())  # ((location name, ((clock, value), ...)), ...)

    def location(self, name):
        for loc in self.locations:
            if loc.name == name:
                return loc
        raise KeyError(name)

    def invariant(self, name):
        """Declared invariant plus the implicit x <= cmax for every clock."""
        return self.location(name).inv + tuple((x, "<=", self.cmax) for x in self.clocks)

    def initial_states(self):
        return [(loc, dict(val)) for loc, val in self.init]

    def outgoing(self, name):
        return [e for e in self.edges if e.src == name]


def make_automaton(clocks, cmax, locations, edges, init):
    """Convenience constructor from plain Python data.

    locations: [(name, obs iterable, [(clock, op, c), ...]), ...]
    edges: [(src, dst, [(clock, op, c), ...], reset iterable), ...]
    init: [(location, {clock: value}), ...]; missing clocks start at 0.
    """
    locs = tuple(Location(n, frozenset(o), tuple(tuple(a) for a in inv)) for n, o, inv in locations)
    es = tuple(Edge(s, d, tuple(tuple(a) for a in g), frozenset(r)) for s, d, g, r in edges)
    ini = []
    for loc, val in init:
        full = {x: val.get(x, 0) for x in clocks}
        full.update(val)
        ini.append((loc, tuple(sorted(full.items()))))
    return TimedAutomaton(tuple(clocks), cmax, locs, es, tuple(ini))


def validate_automaton(a):
    """List of human-readable problems; empty when the model is valid."""
    diags = []
    clocks = set(a.clocks)
    if len(clocks) != len(a.clocks):
        diags.append("duplicate clock names")
    if "z" in clocks:
        diags.append("clock name 'z' is reserved for the tick clock")
    if not isinstance(a.cmax, int) or isinstance(a.cmax, bool) or a.cmax < 1:
        diags.append(f"cmax must be a positive integer, got {a.cmax!r}")
    names = [loc.name for loc in a.locations]
    if len(set(names)) != len(names):
        diags.append("duplicate location names")
    known = set(names)

    def check_atoms(atoms, where):
        for atom in atoms:
            if len(atom) != 3:
                diags.append(f"{where}: malformed atom {atom!r}")
                continue
            x, op, c = atom
            if x not in clocks:
                diags.append(f"{where}: unknown clock {x!r}")
            if op not in OPS:
                diags.append(f"{where}: unknown comparison {op!r}")
            if not isinstance(c, int) or isinstance(c, bool):
                diags.append(f"{where}: non-integer constant {c!r}")
            elif c < 0 or (isinstance(a.cmax, int) and c > a.cmax):
                diags.append(f"{where}: constant {c} outside [0, cmax]")

    for loc in a.locations:
        check_atoms(loc.inv, f"location {loc.name!r} invariant")
    for i, e in enumerate(a.edges):
        where = f"edge {i} ({e.src}->{e.dst})"
        for end in (e.src, e.dst):
            if end not in known:
                diags.append(f"{where}: unknown location {end!r}")
        check_atoms(e.guard, f"{where} guard")
        for x in e.reset:
            if x not in clocks:
                diags.append(f"{where}: reset of unknown clock {x!r}")
    if not a.init:
        diags.append("no initial state")
    for loc, val in a.init:
        where = f"initial state at {loc!r}"
        if loc not in known:
            diags.append(f"{where}: unknown location")
            continue
        val = dict(val)
        if set(val) != clocks:
            diags.append(f"{where}: valuation must cover exactly the clocks")
            continue
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in val.values()):
            diags.append(f"{where}: valuations must be non-negative integers")
            continue
        if not diags and not all(holds(at, val) for at in a.invariant(loc)):
            diags.append(f"{where}: violates the location invariant")
    return diags


def check_automaton(a):
    diags = validate_automaton(a)
    if diags:
        raise ModelError(diags)
    return a


def scale_automaton(a, alpha):
    """Multiply every constant (guards, invariants, cmax, initial valuations) by alpha."""
    if not isinstance(alpha, int) or alpha < 1:
        raise ValueError(f"alpha must be a positive integer, got {alpha!r}")
    if alpha == 1:
        return a
    sc = lambda atoms: tuple((x, op, c * alpha) for x, op, c in atoms)
    locs = tuple(replace(loc, inv=sc(loc.inv)) for loc in a.locations)
    es = tuple(replace(e, guard=sc(e.guard)) for e in a.edges)
    ini = tuple((loc, tuple((x, v * alpha) for x, v in val)) for loc, val in a.init)
    return TimedAutomaton(a.clocks, a.cmax * alpha, locs, es, ini)


def discrete_step(a, state, delay, edge):
    """Let `delay` time units pass, then take `edge`. Returns the new (location, valuation)."""
    loc, val = state
    delay = Fraction(delay)
    if delay < 0:
        raise StepError("negative delay")
    if edge.src != loc:
        raise StepError(f"edge leaves {edge.src!r}, not {loc!r}")
    for x in edge.reset:
        if x not in a.clocks:
            raise StepError(f"reset of unknown clock {x!r}")
    later = {x: Fraction(v) + delay for x, v in val.items()}
    # invariants are convex, so both ends of the delay suffice
    inv = a.invariant(loc)
    if not all(holds(at, val) for at in inv) or not all(holds(at, later) for at in inv):
        raise StepError(f"invariant of {loc!r} violated during the delay")
    if not all(holds(at, later) for at in edge.guard):
        raise StepError("guard not satisfied")
    after = {x: (Fraction(0) if x in edge.reset else v) for x, v in later.items()}
    if not all(holds(at, after) for at in a.invariant(edge.dst)):
        raise StepError(f"invariant of {edge.dst!r} violated on entry")
    return edge.dst, after


# ------------------------------------------------------------------ traces

def run_trace(a, start, steps):
    """Timed trace of a concrete run: one (observation, delay) entry per transition,
    observing the target location."""
    state = (start[0], dict(start[1]))
    trace = []
    for delay, edge in steps:
        state = discrete_step(a, state, delay, edge)
        trace.append((a.location(state[0]).obs, Fraction(delay)))
    return trace


def mtimes(trace):
    t = Fraction(0)
    out = []
    for _, d in trace:
        t += d
        out.append(t)
    return out


def trace_distance(t1, t2, metric, horizon, window=None):
    """Prefix approximation of the trace metrics over indices 0..horizon-1.

    maxdiff: largest time discrepancy; limmaxdiff: largest discrepancy over the last
    `window` indices (default ceil(horizon/2)); limavg: average discrepancy. Any
    observation mismatch within the horizon gives INF.
    """
    if horizon > len(t1) or horizon > len(t2):
        raise ValueError("horizon exceeds trace length")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    for i in range(horizon):
        if t1[i][0] != t2[i][0]:
            return INF
    m1, m2 = mtimes(t1[:horizon]), mtimes(t2[:horizon])
    diffs = [abs(x - y) for x, y in zip(m1, m2)]
    if metric == "maxdiff":
        return max(diffs)
    if metric == "limmaxdiff":
        w = math.ceil(horizon / 2) if window is None else window
        return max(diffs[horizon - w:])
    if metric == "limavg":
        return Fraction(sum(diffs), horizon)
    raise ValueError(f"unknown metric {metric!r}")
