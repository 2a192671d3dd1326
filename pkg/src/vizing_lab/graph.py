"""Finite bounded-degree simple graphs.

Vertices and edges are dense integers.  Edge ids follow input order and every
iteration in the package derives from them, which makes all constructions
deterministic.  Vertex labels (arbitrary hashable tokens) are kept only for
I/O and fixtures.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .rng import SplitMix64

UNREACHABLE = math.inf
"""Distance between vertices in different components."""


class GraphError(ValueError):
    """Raised when an edge list does not describe a finite simple graph."""


@dataclass(frozen=True, eq=False)
class Graph:
    labels: tuple
    edges: tuple[tuple[int, int], ...]
    incidence: tuple[tuple[int, ...], ...]
    max_degree: int
    _label_index: dict = field(repr=False)
    _edge_index: dict = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(len(self.labels))

    def vid(self, label: Hashable) -> int:
        return self._label_index[label]

    def eid(self, u: int, v: int) -> int:
        """Edge id of ``{u, v}``; raises ``KeyError`` if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def neighbors(self, v: int) -> list[int]:
        return [self.other(e, v) for e in self.incidence[v]]

    def edge_labels(self, e: int) -> tuple:
        a, b = self.edges[e]
        return self.labels[a], self.labels[b]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form (``indptr``, ``indices``), neighbors in edge-id order."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v, inc in enumerate(self.incidence):
            indptr[v + 1] = indptr[v] + len(inc)
        indices = np.fromiter(
            (self.other(e, v) for v, inc in enumerate(self.incidence) for e in inc),
            dtype=np.int64,
            count=int(indptr[-1]),
        )
        return indptr, indices


def build_graph(edge_list: Iterable[Sequence[Hashable]], vertices: Iterable[Hashable] | None = None) -> Graph:
    """Build a simple graph; edge ids are assigned in input order.

    When ``vertices`` is given, every endpoint must be one of them (isolated
    vertices are declared this way); otherwise vertices are created in order of
    first appearance.
    """
    labels: list = []
    index: dict = {}
    closed = vertices is not None
    if closed:
        for lab in vertices:
            if lab in index:
                raise GraphError(f"duplicate vertex {lab!r}")
            index[lab] = len(labels)
            labels.append(lab)

    edges: list[tuple[int, int]] = []
    edge_index: dict[tuple[int, int], int] = {}
    for pos, pair in enumerate(edge_list):
        if len(pair) != 2:
            raise GraphError(f"edge #{pos} {pair!r}: expected a vertex pair")
        ends = []
        for lab in pair:
            if lab not in index:
                if closed:
                    raise GraphError(f"edge #{pos} {tuple(pair)!r}: unknown vertex {lab!r}")
                index[lab] = len(labels)
                labels.append(lab)
            ends.append(index[lab])
        u, v = ends
        if u == v:
            raise GraphError(f"edge #{pos} {tuple(pair)!r}: loop")
        key = (u, v) if u < v else (v, u)
        if key in edge_index:
            raise GraphError(f"edge #{pos} {tuple(pair)!r}: duplicate of edge #{edge_index[key]}")
        edge_index[key] = len(edges)
        edges.append(key)

    incidence: list[list[int]] = [[] for _ in labels]
    for e, (u, v) in enumerate(edges):
        incidence[u].append(e)
        incidence[v].append(e)
    return Graph(
        labels=tuple(labels),
        edges=tuple(edges),
        incidence=tuple(tuple(inc) for inc in incidence),
        max_degree=max((len(inc) for inc in incidence), default=0),
        _label_index=index,
        _edge_index=edge_index,
    )


# ---------------------------------------------------------------------------
# derived graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineGraphView:
    """Nodes are the base graph's edge ids; adjacency means sharing one vertex."""

    base: Graph
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def nodes(self) -> range:
        return range(self.base.m)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def to_graph(self) -> Graph:
        pairs = [(e, f) for e, nb in enumerate(self.adjacency) for f in nb if e < f]
        return build_graph(pairs, vertices=range(self.base.m))


def line_graph(g: Graph) -> LineGraphView:
    adjacency = []
    for e, (u, v) in enumerate(g.edges):
        nb = [f for f in g.incidence[u] if f != e]
        nb.extend(f for f in g.incidence[v] if f != e)
        adjacency.append(tuple(sorted(nb)))
    return LineGraphView(base=g, adjacency=tuple(adjacency))


def bfs_distances(g: Graph, source: int, limit: int | None = None) -> dict[int, int]:
    """Distances from ``source`` to every vertex within ``limit`` hops."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if limit is not None and d >= limit:
            continue
        for e in g.incidence[v]:
            w = g.other(e, v)
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def distance(g: Graph, u: int, v: int) -> float:
    if u == v:
        return 0
    return bfs_distances(g, u).get(v, UNREACHABLE)


def power_graph(g: Graph, k: int) -> Graph:
    """Same vertices; ``{x, y}`` is an edge iff ``dist(x, y) == k`` exactly."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    pairs = []
    for x in g.vertices():
        for y, d in bfs_distances(g, x, limit=k).items():
            if d == k and x < y:
                pairs.append((g.labels[x], g.labels[y]))
    return build_graph(pairs, vertices=g.labels)


def component_labels(g: Graph) -> list[int]:
    """Component index per vertex; components numbered by smallest vertex."""
    comp = [-1] * g.n
    count = 0
    for s in g.vertices():
        if comp[s] >= 0:
            continue
        comp[s] = count
        stack = [s]
        while stack:
            v = stack.pop()
            for e in g.incidence[v]:
                w = g.other(e, v)
                if comp[w] < 0:
                    comp[w] = count
                    stack.append(w)
        count += 1
    return comp


def component_of(g: Graph, x: int) -> frozenset[int]:
    return frozenset(bfs_distances(g, x))


def saturation(g: Graph, subset: Iterable[int]) -> frozenset[int]:
    """Union of the components meeting ``subset``."""
    out: set[int] = set()
    for x in subset:
        if x not in out:
            out |= component_of(g, x)
    return frozenset(out)


def greedy_proper_edge_coloring(g: Graph, palette_size: int) -> list[int]:
    """Color edges in id order with the least color free at both ends.

    Colors are ``1..palette_size``.  A palette of ``2*Delta - 1`` always
    suffices since an edge meets at most ``2*Delta - 2`` others.
    """
    need = max(2 * g.max_degree - 1, 1 if g.m else 0)
    if palette_size < need:
        raise ValueError(f"palette of {palette_size} colors is below 2*Delta-1 = {need}")
    used: list[set[int]] = [set() for _ in g.vertices()]
    colors = []
    for u, v in g.edges:
        busy = used[u] | used[v]
        col = 1
        while col in busy:
            col += 1
        colors.append(col)
        used[u].add(col)
        used[v].add(col)
    return colors


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def path4() -> Graph:
    """Path a-b-c-d with e1={a,b}, e2={b,c}, e3={c,d} (edge ids 0, 1, 2)."""
    return build_graph([("a", "b"), ("b", "c"), ("c", "d")])


def star3() -> Graph:
    """Center x with leaves v0, v1, v2; edge s_i = {x, v_i} has id i."""
    return build_graph([("x", "v0"), ("x", "v1"), ("x", "v2")])


def cycle(n: int) -> Graph:
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def cycle5() -> Graph:
    return cycle(5)


def k2w() -> tuple[Graph, dict[int, float]]:
    """Single edge {x, y} with vertex weights 1/11 and 10/11."""
    g = build_graph([("x", "y")])
    return g, {g.vid("x"): 1 / 11, g.vid("y"): 10 / 11}


def random_edge_list(n: int, max_degree: int, seed: int) -> list[tuple[int, int]]:
    """RAND(n, Delta, seed): ``n * Delta`` uniform pair draws from SplitMix64.

    Each draw takes ``u = next % n`` then ``v = next % n``; the pair is kept
    (as ``(min, max)``) unless it is a loop, a duplicate, or would push an
    endpoint past ``max_degree``.
    """
    rng = SplitMix64(seed)
    deg = [0] * n
    seen: set[tuple[int, int]] = set()
    out = []
    for _ in range(n * max_degree):
        u = rng.below(n)
        v = rng.below(n)
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        seen.add(key)
        deg[u] += 1
        deg[v] += 1
        out.append(key)
    return out


def random_graph(n: int, max_degree: int, seed: int) -> Graph:
    return build_graph(random_edge_list(n, max_degree, seed), vertices=range(n))


def disjoint_union(*graphs: Graph) -> Graph:
    """Vertices relabelled ``(i, label)`` for the i-th operand."""
    vertices = [(i, lab) for i, h in enumerate(graphs) for lab in h.labels]
    pairs = [((i, h.labels[u]), (i, h.labels[v])) for i, h in enumerate(graphs) for u, v in h.edges]
    return build_graph(pairs, vertices=vertices)


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    """Parse the edge-list format (see README): ``u v`` per line, ``#`` comments.

    A line with a single token declares an isolated vertex.
    """
    order: dict[str, None] = {}
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if len(toks) > 2:
            raise GraphError(f"{source}:{lineno}: expected 'u v', got {raw.strip()!r}")
        for t in toks:
            order.setdefault(t, None)
        if len(toks) == 2:
            pairs.append((lineno, toks[0], toks[1]))
    seen: dict[tuple[str, str], int] = {}
    for lineno, a, b in pairs:
        if a == b:
            raise GraphError(f"{source}:{lineno}: loop at vertex {a!r}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise GraphError(f"{source}:{lineno}: duplicate edge {a} {b} (first on line {seen[key]})")
        seen[key] = lineno
    return build_graph([(a, b) for _, a, b in pairs], vertices=list(order))


def read_edge_list(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), source=str(path))


def format_edge_list(g: Graph) -> str:
    lines = []
    covered = set()
    for u, v in g.edges:
        lines.append(f"{g.labels[u]} {g.labels[v]}\n")
        covered.update((u, v))
    lines.extend(f"{g.labels[v]}\n" for v in g.vertices() if v not in covered)
    return "".join(lines)
