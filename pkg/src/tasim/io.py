"""JSON model files (automata and games) and result formatting."""

import json
from fractions import Fraction

from .games import GameError, GameGraph
from .graphs import INF
from .timed import OPS, ModelError, check_automaton, make_automaton

INT64 = (-(2 ** 63), 2 ** 63 - 1)


class ParseError(ValueError):
    """Malformed input file. `diagnostics` name the offending line or field."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError([f"line {e.lineno}, column {e.colno}: {e.msg}"]) from None


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


class _Checker:
    """Collects shape errors with a field path, e.g. locations[1].obs."""

    def __init__(self):
        self.errors = []

    def need(self, obj, key, kind, where):
        if not isinstance(obj, dict) or key not in obj:
            self.errors.append(f"{where}: missing field {key!r}")
            return None
        val = obj[key]
        ok = _is_int(val) if kind is int else isinstance(val, kind)
        if not ok:
            self.errors.append(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
            return None
        return val

    def atoms(self, items, where):
        out = []
        for i, at in enumerate(items):
            if not (isinstance(at, list) and len(at) == 3 and isinstance(at[0], str)
                    and isinstance(at[1], str) and _is_int(at[2])):
                self.errors.append(f"{where}[{i}]: expected [clock, op, int]")
                continue
            if at[1] not in OPS:
                self.errors.append(f"{where}[{i}]: unknown comparison {at[1]!r}")
                continue
            out.append(tuple(at))
        return out

    def done(self):
        if self.errors:
            raise ParseError(self.errors)


# ------------------------------------------------------------------ automata

def parse_automaton(text):
    """TimedAutomaton from automaton JSON. Shape problems raise ParseError, semantic
    ones (unknown clocks, bad constants, ...) raise ModelError."""
    doc = _load(text)
    ck = _Checker()
    if not isinstance(doc, dict):
        raise ParseError(["top level: expected an object"])
    clocks = ck.need(doc, "clocks", list, "automaton") or []
    if not all(isinstance(c, str) for c in clocks):
        ck.errors.append("automaton.clocks: expected a list of strings")
    cmax = ck.need(doc, "cmax", int, "automaton")
    locations = []
    for i, loc in enumerate(ck.need(doc, "locations", list, "automaton") or []):
        where = f"locations[{i}]"
        name = ck.need(loc, "name", str, where)
        obs = ck.need(loc, "obs", list, where) or []
        if not all(isinstance(o, str) for o in obs):
            ck.errors.append(f"{where}.obs: expected a list of strings")
        inv = ck.atoms(loc.get("inv", []) if isinstance(loc, dict) else [], f"{where}.inv")
        locations.append((name, obs, inv))
    edges = []
    for i, e in enumerate(ck.need(doc, "edges", list, "automaton") or []):
        where = f"edges[{i}]"
        src = ck.need(e, "from", str, where)
        dst = ck.need(e, "to", str, where)
        guard = ck.atoms(e.get("guard", []) if isinstance(e, dict) else [], f"{where}.guard")
        reset = e.get("reset", []) if isinstance(e, dict) else []
        if not (isinstance(reset, list) and all(isinstance(x, str) for x in reset)):
            ck.errors.append(f"{where}.reset: expected a list of clock names")
            reset = []
        edges.append((src, dst, guard, reset))
    init = []
    for i, s in enumerate(ck.need(doc, "init", list, "automaton") or []):
        where = f"init[{i}]"
        loc = ck.need(s, "loc", str, where)
        val = ck.need(s, "val", dict, where) or {}
        init.append((loc, val))
    ck.done()
    if len(set(clocks)) != len(clocks):
        raise ModelError(["duplicate clock names"])
    for loc, val in init:
        extra = set(val) - set(clocks)
        if extra:
            raise ModelError([f"initial state at {loc!r}: unknown clocks {sorted(extra)}"])
    return check_automaton(make_automaton(clocks, cmax, locations, edges, init))


def dump_automaton(a):
    doc = {
        "clocks": list(a.clocks),
        "cmax": a.cmax,
        "locations": [{"name": loc.name, "obs": sorted(loc.obs), "inv": [list(at) for at in loc.inv]}
                      for loc in a.locations],
        "edges": [{"from": e.src, "to": e.dst, "guard": [list(at) for at in e.guard],
                   "reset": sorted(e.reset)} for e in a.edges],
        "init": [{"loc": loc, "val": dict(val)} for loc, val in a.init],
    }
    return json.dumps(doc, indent=2) + "\n"


# ------------------------------------------------------------------ games

def parse_game(text):
    """GameGraph from game JSON. Ids must be dense from 0 (in any order)."""
    doc = _load(text)
    ck = _Checker()
    if not isinstance(doc, dict):
        raise ParseError(["top level: expected an object"])
    states = []
    for i, st in enumerate(ck.need(doc, "states", list, "game") or []):
        where = f"states[{i}]"
        sid = ck.need(st, "id", int, where)
        owner = ck.need(st, "owner", int, where)
        c = st.get("c", False) if isinstance(st, dict) else False
        c2 = st.get("c2", False) if isinstance(st, dict) else False
        if not isinstance(c, bool) or not isinstance(c2, bool):
            ck.errors.append(f"{where}: c and c2 must be booleans")
        states.append((sid, owner, c, c2))
    edges = []
    for i, e in enumerate(ck.need(doc, "edges", list, "game") or []):
        where = f"edges[{i}]"
        edges.append((ck.need(e, "from", int, where), ck.need(e, "to", int, where),
                      ck.need(e, "w", int, where)))
    ck.done()
    diags = []
    ids = [s[0] for s in states]
    seen = set()
    for sid in ids:
        if sid in seen:
            diags.append(f"duplicate state id {sid}")
        seen.add(sid)
    if not diags and sorted(ids) != list(range(len(ids))):
        diags.append("state ids must be dense from 0")
    for i, (s, t, w) in enumerate(edges):
        if s not in seen or t not in seen:
            diags.append(f"edges[{i}]: dangling edge {s}->{t}")
        if not INT64[0] <= w <= INT64[1]:
            diags.append(f"edges[{i}]: weight {w} overflows a 64-bit integer")
    sources = set(s for s, _, _ in edges)
    for sid in sorted(seen - sources):
        diags.append(f"state {sid} has no outgoing edge")
    if diags:
        raise GameError("; ".join(diags))
    states.sort()
    C = [s[0] for s in states if s[2]]
    C2 = [s[0] for s in states if s[3]]
    return GameGraph([s[1] for s in states], edges, cobuchiA=C, cobuchiB=C2 or None)


def dump_game(g):
    C = g.cobuchiA or frozenset()
    C2 = g.cobuchiB or frozenset()
    doc = {
        "states": [{"id": v, "owner": g.owners[v], "c": v in C, "c2": v in C2} for v in range(g.n)],
        "edges": [{"from": s, "to": t, "w": w} for s, t, w in g.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


# ------------------------------------------------------------------ results

def exact(v):
    """Exact text of a value: "inf" or "p/q"."""
    if v == INF:
        return "inf"
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def human(v):
    """Readable value: "inf", "3" or "9/4 (= 2.25)"."""
    if v == INF:
        return "inf"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v} (= {float(v):.6g})"


def label_text(lab):
    """Readable simulation-game state: region indices of the scaled automata, as in
    the output of `tasim regions`."""
    if lab[0] in ("1", "2"):
        return f"p{lab[0]}:r{lab[1]}:s{lab[2]}"
    return lab[0]


def witness_json(w):
    return {
        "mode": w.mode,
        "start": label_text(w.start),
        "moves": [{"state": label_text(lab), "memory": m, "move": label_text(nxt)}
                  for (lab, m), nxt in sorted(w.moves.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))],
    }


def format_result(r, fmt="human", objective=None):
    """Text for a DistanceResult or for a per-state value map (from `solve`)."""
    if isinstance(r, dict):
        return _format_values(r, fmt, objective)
    if fmt == "json":
        doc = {"metric": r.metric, "alpha": r.alpha, "value": exact(r.value),
               "error_bound": exact(r.error_bound)}
        if r.witness is not None:
            doc["witness"] = witness_json(r.witness)
        return json.dumps(doc, separators=(",", ":"))
    lines = [f"metric: {r.metric}", f"alpha: {r.alpha}"]
    if r.finite:
        lines.append(f"value: {human(r.value)} ± {r.error_bound}")
    else:
        lines.append("value: inf")
    if r.witness is not None:
        w = witness_json(r.witness)
        lines.append(f"witness ({w['mode']}, memory = running tick difference), from {w['start']}:")
        for mv in w["moves"]:
            lines.append(f"  {mv['state']} [{mv['memory']}] -> {mv['move']}")
    return "\n".join(lines)


def _format_values(vals, fmt, objective):
    if fmt == "json":
        doc = {"objective": None if objective is None else str(objective),
               "values": {str(q): exact(v) for q, v in sorted(vals.items())}}
        return json.dumps(doc, separators=(",", ":"))
    head = [] if objective is None else [f"objective: {objective}"]
    return "\n".join(head + [f"state {q}: {human(v)}" for q, v in sorted(vals.items())])
