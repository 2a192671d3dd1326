"""Independent oracles and instance generators for the test suite.

Nothing here imports the chain or coloring internals: colorings are plain
dicts ``edge -> color`` (0 = uncolored) over an edge list of vertex pairs.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

from vizing_lab.coloring import PartialColoring
from vizing_lab.graph import Graph, build_graph
from vizing_lab.rng import SplitMix64

# ---------------------------------------------------------------------------
# literal evaluator of the chain flags
# ---------------------------------------------------------------------------


def oracle_shift(col: dict[int, int], P: tuple[int, ...]) -> dict[int, int]:
    out = dict(col)
    for i in range(len(P) - 1):
        out[P[i]] = col[P[i + 1]]
    out[P[-1]] = 0
    return out


def oracle_proper(edges: list[tuple[int, int]], col: dict[int, int]) -> bool:
    at = defaultdict(list)
    for e, (u, v) in enumerate(edges):
        if col[e]:
            at[u].append(col[e])
            at[v].append(col[e])
    return all(len(cs) == len(set(cs)) for cs in at.values())


def oracle_missing(edges, col, palette, x) -> set[int]:
    used = {col[e] for e, (u, v) in enumerate(edges) if x in (u, v) and col[e]}
    return set(range(1, palette + 1)) - used


def oracle_flags(edges, col, palette, P) -> tuple[bool, bool, bool, bool]:
    inj = len(set(P)) == len(P)
    shiftable = inj and len(P) >= 1 and col[P[0]] == 0 and all(col[h] != 0 for h in P[1:])
    if not shiftable:
        return inj, False, False, False
    cp = oracle_shift(col, P)
    proper = oracle_proper(edges, cp)
    if not proper:
        return True, True, False, False
    x, y = edges[P[-1]]
    aug = bool(oracle_missing(edges, cp, palette, x) & oracle_missing(edges, cp, palette, y))
    return True, True, True, aug


def oracle_alt_path(edges, col, x, alpha, beta) -> list[int]:
    """Walk from ``x`` taking the edge of the wanted color, alternating alpha, beta."""
    path, cur, want = [], x, alpha
    while True:
        nxt = [e for e, (u, v) in enumerate(edges) if cur in (u, v) and col[e] == want and e not in path]
        if not nxt:
            return path
        (e,) = nxt
        path.append(e)
        u, v = edges[e]
        cur = v if cur == u else u
        want = beta if want == alpha else alpha


def as_dict(c: PartialColoring) -> dict[int, int]:
    return dict(enumerate(c.colors))


# ---------------------------------------------------------------------------
# small graphs up to isomorphism
# ---------------------------------------------------------------------------


def _canon_connected(edges: list[tuple[int, int]]) -> tuple:
    verts = sorted({v for e in edges for v in e})
    deg = {v: 0 for v in verts}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    groups = defaultdict(list)
    for v in verts:
        groups[deg[v]].append(v)
    keys = sorted(groups)
    best = None
    for perms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [v for p in perms for v in p]
        lab = {v: i for i, v in enumerate(order)}
        form = tuple(sorted(tuple(sorted((lab[u], lab[v]))) for u, v in edges))
        if best is None or form < best:
            best = form
    return (tuple(deg[v] for v in sorted(verts, key=lambda v: -deg[v])), best)


def canonical_form(edges: list[tuple[int, int]]) -> tuple:
    adj = defaultdict(set)
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen: set[int] = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        stack, comp = [s], {s}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(_canon_connected([e for e in edges if e[0] in comp]))
    return tuple(sorted(comps))


def small_graphs(max_edges: int, max_degree: int | None = None) -> list[list[tuple[int, int]]]:
    """One representative per isomorphism class of graphs without isolated vertices."""
    levels = [[[]]]
    seen = {canonical_form([])}
    for _ in range(max_edges):
        nxt = []
        for edges in levels[-1]:
            n = 1 + max((v for e in edges for v in e), default=-1)
            present = set(edges)
            for u in range(n + 2):
                for v in range(u + 1, n + 2):
                    if v > n and u < n and v != n:
                        continue
                    if u >= n and (u, v) != (n, n + 1):
                        continue
                    if (u, v) in present:
                        continue
                    cand = edges + [(u, v)]
                    if max_degree is not None:
                        deg = defaultdict(int)
                        for a, b in cand:
                            deg[a] += 1
                            deg[b] += 1
                        if max(deg.values()) > max_degree:
                            continue
                    key = canonical_form(cand)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(cand)
        levels.append(nxt)
    return [g for level in levels for g in level]


def proper_partial_colorings(edges, palette: int, max_colored: int):
    m = len(edges)
    for k in range(max_colored + 1):
        for subset in itertools.combinations(range(m), k):
            for cols in itertools.product(range(1, palette + 1), repeat=k):
                col = {e: 0 for e in range(m)}
                col.update(zip(subset, cols))
                if oracle_proper(edges, col):
                    yield col


def all_chains(edges, max_len: int):
    """Every sequence of edges of length 1..max_len whose consecutive members meet."""
    m = len(edges)
    meets = [[set(edges[a]) & set(edges[b]) != set() for b in range(m)] for a in range(m)]
    frontier = [(e,) for e in range(m)]
    while frontier:
        yield from frontier
        if len(frontier[0]) == max_len:
            return
        frontier = [p + (b,) for p in frontier for b in range(m) if meets[p[-1]][b]]


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def random_regular_edges(n: int, d: int, seed: int) -> list[tuple[int, int]]:
    """Simple d-regular graph by the pairing model with restarts (SplitMix64)."""
    rng = SplitMix64(seed)
    while True:
        points = [v for v in range(n) for _ in range(d)]
        for i in range(len(points) - 1, 0, -1):
            j = rng.below(i + 1)
            points[i], points[j] = points[j], points[i]
        pairs = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            key = (min(u, v), max(u, v))
            if u == v or key in pairs:
                ok = False
                break
            pairs.add(key)
        if ok:
            return sorted(pairs)


def random_greedy_coloring(g: Graph, seed: int) -> PartialColoring:
    """Edges in a shuffled order, each given the least color free at both ends if any."""
    rng = SplitMix64(seed)
    order = list(range(g.m))
    for i in range(len(order) - 1, 0, -1):
        j = rng.below(i + 1)
        order[i], order[j] = order[j], order[i]
    c = PartialColoring(g)
    for e in order:
        u, v = g.edges[e]
        for col in range(1, c.palette + 1):
            if col not in c.at[u] and col not in c.at[v]:
                c.set_color(e, col)
                break
    return c


def regular_instance(n: int, d: int, seed: int) -> tuple[Graph, PartialColoring]:
    g = build_graph(random_regular_edges(n, d, seed), vertices=range(n))
    return g, random_greedy_coloring(g, seed)


def rel_close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300) or a == b


def line_distance(g: Graph, h: int, f: int) -> float:
    """Line-graph distance by BFS over edges (edges adjacent iff they share a vertex)."""
    if h == f:
        return 0
    dist = {h: 0}
    frontier = [h]
    while frontier:
        nxt = []
        for a in frontier:
            for v in g.edges[a]:
                for b in g.incidence[v]:
                    if b not in dist:
                        dist[b] = dist[a] + 1
                        if b == f:
                            return dist[b]
                        nxt.append(b)
        frontier = nxt
    return math.inf


def _edge_at(edges, col, v, color):
    hits = [e for e, (a, b) in enumerate(edges) if v in (a, b) and col[e] == color]
    return hits[0] if hits else None


def oracle_fan(edges, col, palette, x, e) -> list[int]:
    """Least-missing-color fan around ``x`` starting at ``e``, written from the clauses."""
    fan = [e]
    while True:
        leaf = [v for v in edges[fan[-1]] if v != x][0]
        want = min(oracle_missing(edges, col, palette, leaf))
        nxt = _edge_at(edges, col, x, want)
        if nxt is None or nxt in fan:
            return fan
        fan.append(nxt)


def oracle_conditional_fan(edges, col, palette, f, y, alpha, beta) -> tuple[list[int], bool]:
    """Conditional fan around ``y`` from ``f``; second value tells whether growth hit alpha or beta."""
    fan = [f]
    while True:
        leaf = [v for v in edges[fan[-1]] if v != y][0]
        miss = oracle_missing(edges, col, palette, leaf)
        if alpha in miss or beta in miss:
            return fan, True
        nxt = _edge_at(edges, col, y, min(miss))
        if nxt is None or nxt in fan:
            return fan, False
        fan.append(nxt)
