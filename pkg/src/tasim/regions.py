"""Regions of the enlarged automaton: clock regions extended with the tick clock z
(fraction of global time) and the tick tally of the generating transition.

A region is (loc, ints, classes, ticks):
  ints     integer part per clock, in automaton clock order; cmax + 1 marks a clock
           above the cap (no fractional information kept);
  classes  clocks (including "z") grouped by fractional part in increasing order;
           classes[0] holds the clocks with zero fraction and may be empty;
  ticks    integer time boundaries crossed by the transition that produced it.
"""

import math
from collections import namedtuple
from fractions import Fraction

from .graphs import is_nontrivial, reachable, sccs
from .timed import ModelError, holds

Z = "z"

Region = namedtuple("Region", "loc ints classes ticks")
EnlargedState = namedtuple("EnlargedState", "loc val z ticks")


def region_of(s, a, strict=True):
    """Canonical region of an enlarged state. With `strict` the state must satisfy
    the location invariant (including x <= cmax)."""
    loc, val, z, ticks = s
    z = Fraction(z)
    if not 0 <= z < 1:
        raise ValueError("z must lie in [0, 1)")
    if not 0 <= ticks <= a.cmax:
        raise ValueError("ticks must lie in [0, cmax]")
    if strict and not all(holds(at, val) for at in a.invariant(loc)):
        raise ModelError([f"valuation {dict(val)} violates the invariant of {loc!r}"])
    ints = []
    fracs = {Z: z}
    for x in a.clocks:
        v = Fraction(val[x])
        if v < 0:
            raise ValueError(f"clock {x} is negative")
        if v > a.cmax:
            ints.append(a.cmax + 1)
            continue
        n = math.floor(v)
        ints.append(n)
        fracs[x] = v - n
    order = sorted(set(fracs.values()))
    zero = tuple(sorted(x for x, f in fracs.items() if f == 0))
    pos = tuple(tuple(sorted(x for x, f in fracs.items() if f == q)) for q in order if q != 0)
    return Region(loc, tuple(ints), (zero,) + pos, ticks)


def representative(r, a):
    """A concrete enlarged state inside region r."""
    m = len(r.classes) - 1
    frac = {}
    for k, cls in enumerate(r.classes):
        for x in cls:
            frac[x] = Fraction(k, m + 1)
    val = {}
    for i, x in enumerate(a.clocks):
        if r.ints[i] > a.cmax:
            val[x] = Fraction(2 * a.cmax + 1, 2)
        else:
            val[x] = r.ints[i] + frac[x]
    return EnlargedState(r.loc, val, frac[Z], r.ticks)


def _atom_holds(atom, r, a):
    x, op, c = atom
    i = a.clocks.index(x)
    n = r.ints[i]
    if n > a.cmax:
        return op in (">", ">=")
    if x in r.classes[0]:
        return holds((x, op, c), {x: n})
    if op in ("<", "<="):
        return n + 1 <= c
    if op == "==":
        return False
    return n >= c


def satisfies(atoms, r, a):
    return all(_atom_holds(at, r, a) for at in atoms)


def _time_successor(ints, classes, cmax, clocks):
    """Next region along a delay. Returns (ints, classes, wrapped)."""
    zero, rest = classes[0], classes[1:]
    if zero:
        ints = list(ints)
        keep = []
        for x in zero:
            if x != Z and ints[clocks.index(x)] == cmax:
                ints[clocks.index(x)] = cmax + 1
            else:
                keep.append(x)
        moved = (tuple(keep),) if keep else ()
        return tuple(ints), ((),) + moved + rest, False
    last = rest[-1]
    ints = list(ints)
    wrapped = False
    for x in last:
        if x == Z:
            wrapped = True
        else:
            ints[clocks.index(x)] += 1
    return tuple(ints), (last,) + rest[:-1], wrapped


def _reset(ints, classes, reset, clocks):
    if not reset:
        return ints, classes
    ints = list(ints)
    for x in reset:
        ints[clocks.index(x)] = 0
    zero = tuple(sorted(set(classes[0]) | set(reset)))
    rest = tuple(c for c in (tuple(x for x in cls if x not in reset) for cls in classes[1:]) if c)
    return tuple(ints), (zero,) + rest


def delay_chain(r, a):
    """Regions visited while time passes from r, with the tick tally so far, as long
    as the invariant of r's location holds."""
    inv = a.invariant(r.loc)
    ints, classes, tally = r.ints, r.classes, 0
    out = []
    while tally <= a.cmax and satisfies(inv, Region(r.loc, ints, classes, 0), a):
        out.append((ints, classes, tally))
        ints, classes, wrapped = _time_successor(ints, classes, a.cmax, a.clocks)
        tally += wrapped
    return out


def region_successors(r, a):
    """Regions reachable by one transition: a delay followed by one discrete edge.
    The successor's ticks is the number of z wraps during the delay."""
    res = set()
    edges = a.outgoing(r.loc)
    for ints, classes, tally in delay_chain(r, a):
        here = Region(r.loc, ints, classes, tally)
        for e in edges:
            if not satisfies(e.guard, here, a):
                continue
            ni, nc = _reset(ints, classes, e.reset, a.clocks)
            nxt = Region(e.dst, ni, nc, tally)
            if satisfies(a.invariant(e.dst), nxt, a):
                res.add(nxt)
    return sorted(res, key=_key)


def _key(r):
    return (r.loc, r.ints, r.classes, r.ticks)


class RegionGraph:
    """Reachable enlarged region graph. Node i has region nodes[i], successor list
    succ[i], observation obs[i] and tick count ticks[i]."""

    def __init__(self, a):
        self.automaton = a
        self.nodes = []
        self.index = {}
        self.succ = []
        self.initial = []
        todo = []
        for loc, val in a.initial_states():
            r = region_of(EnlargedState(loc, val, 0, 0), a)
            self.initial.append(self._add(r, todo))
        while todo:
            i = todo.pop(0)
            self.succ[i] = [self._add(s, todo) for s in region_successors(self.nodes[i], a)]
        self.obs = [a.location(r.loc).obs for r in self.nodes]
        self.ticks = [r.ticks for r in self.nodes]

    def _add(self, r, todo):
        i = self.index.get(r)
        if i is None:
            i = self.index[r] = len(self.nodes)
            self.nodes.append(r)
            self.succ.append([])
            todo.append(i)
        return i

    def __len__(self):
        return len(self.nodes)

    def lines(self):
        """Stable text dump: one line per node, then the edge list."""
        out = []
        for i, r in enumerate(self.nodes):
            ints = ",".join(f"{x}={'>' + str(self.automaton.cmax) if n > self.automaton.cmax else n}"
                            for x, n in zip(self.automaton.clocks, r.ints))
            cls = " < ".join("{" + ",".join(c) + "}" for c in r.classes)
            out.append(f"node {i}: loc={r.loc} ints[{ints}] frac[{cls}] ticks={r.ticks}")
        for i, ss in enumerate(self.succ):
            for j in ss:
                out.append(f"edge {i} -> {j}")
        return out


def build_enlarged_region_graph(a):
    return RegionGraph(a)


def region_count_bound(a):
    """|L| * prod(c_x + 1) * |C+z|! * 4^|C+z| * (cmax + 1), with c_x = cmax."""
    k = len(a.clocks) + 1
    return (len(a.locations) * (a.cmax + 1) ** len(a.clocks) * math.factorial(k)
            * 4 ** k * (a.cmax + 1))


def check_well_formed(a, graph=None):
    """True iff every initial region reaches a cycle through a node with ticks >= 1,
    i.e. a time-divergent run exists from every initial state."""
    g = graph or RegionGraph(a)
    comp_of, comps = sccs(len(g), g.succ)
    good = set()
    for comp in comps:
        if is_nontrivial(comp, g.succ) and any(g.ticks[v] >= 1 for v in comp):
            good.update(comp)
    return all(good & reachable(g.succ, [i]) for i in g.initial)


def enlarged_step(a, s, delay, edge):
    """Concrete transition of the enlarged automaton: z advances modulo 1 and ticks
    counts how often it wrapped."""
    from .timed import discrete_step

    loc, val = discrete_step(a, (s.loc, s.val), delay, edge)
    t = Fraction(s.z) + Fraction(delay)
    ticks = math.floor(t)
    return EnlargedState(loc, val, t - ticks, ticks)
