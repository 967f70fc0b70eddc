"""Small directed-graph helpers shared by the solvers (SCCs, reachability, cycle means)."""

from fractions import Fraction

INF = float("inf")


class LimitExceeded(RuntimeError):
    """An internal size limit was hit; the input is too large for this tool."""



def sccs(n, succ):
    """Iterative Tarjan. Returns (comp_of, comps) with comps in reverse topological order
    (every edge leaving a component points to a component listed earlier)."""
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    comp_of = [-1] * n
    comps = []
    stack = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                u = nbrs[i]
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    onstack[u] = True
                    work.append((u, 0))
                elif onstack[u] and index[u] < low[v]:
                    low[v] = index[u]
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        onstack[u] = False
                        comp_of[u] = len(comps)
                        comp.append(u)
                        if u == v:
                            break
                    comp.sort()
                    comps.append(comp)
    return comp_of, comps


def reachable(succ, sources):
    seen = set(sources)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for u in succ[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def is_nontrivial(comp, succ):
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in succ[v]


def karp_cycle_mean(nodes, edges, mode="max"):
    """Exact extreme cycle mean of a strongly connected subgraph.

    nodes: list of vertices; edges: list of (u, v, w) inside the subgraph.
    Returns a Fraction, or None when there is no cycle.
    """
    if not edges:
        return None
    sign = 1 if mode == "max" else -1
    pos = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    neg = None
    # D[k][v]: best weight of a walk with exactly k edges from nodes[0] to v
    D = [[neg] * n for _ in range(n + 1)]
    D[0][0] = 0
    inc = [(pos[u], pos[v], sign * w) for u, v, w in edges]
    for k in range(1, n + 1):
        prev, cur = D[k - 1], D[k]
        for a, b, w in inc:
            if prev[a] is not None:
                val = prev[a] + w
                if cur[b] is None or val > cur[b]:
                    cur[b] = val
    best = None
    for v in range(n):
        if D[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is None:
                continue
            m = Fraction(D[n][v] - D[k][v]) / (n - k)
            if worst is None or m < worst:
                worst = m
        if worst is not None and (best is None or worst > best):
            best = worst
    if best is None:
        return None
    return best if sign == 1 else -best


def shortest_paths(n, edges, sources, allowed=None):
    """Bellman-Ford from a set of sources (distance 0). Returns (dist, neg) where neg is the
    set of vertices whose distance is unbounded below. Vertices outside `allowed` are ignored."""
    dist = {}
    for s in sources:
        if allowed is None or s in allowed:
            dist[s] = 0
    es = [(u, v, w) for u, v, w in edges
          if allowed is None or (u in allowed and v in allowed)]
    for _ in range(n):
        changed = False
        for u, v, w in es:
            du = dist.get(u)
            if du is None:
                continue
            if v not in dist or du + w < dist[v]:
                dist[v] = du + w
                changed = True
        if not changed:
            return dist, set()
    # still relaxing: collect everything reachable from a relaxing edge
    bad = set()
    for u, v, w in es:
        du = dist.get(u)
        if du is not None and du + w < dist[v]:
            bad.add(v)
    succ = {}
    for u, v, _ in es:
        succ.setdefault(u, []).append(v)
    todo = list(bad)
    while todo:
        v = todo.pop()
        for u in succ.get(v, ()):
            if u not in bad:
                bad.add(u)
                todo.append(u)
    return dist, bad
