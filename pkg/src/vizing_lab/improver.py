"""Weight-L improvement rounds and the full-coloring schedule.

A round finds, for every uncolored edge, the first enumerated 3-step chain
whose weight ``sum nu(f)/nu(e)`` is at most ``L``, keeps a sub-family of
chains whose start edges are far apart in the line graph, and augments them
all.  Rounds repeat until no uncolored edge has such a chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .chains import EnumerationStats, VizingChainRecord, iter_three_step_chains
from .cocycle import Cocycle, WeightedMeasure, bounded_equivalent_measure, lift_to_edge_measure
from .coloring import Chain, PartialColoring, augment_inplace, greedy_partial_coloring
from .graph import Graph, line_graph


def chain_weight(rho: Cocycle, e: int, W: Sequence[int]) -> float:
    """``sum_{f in W} rho(e, f)``."""
    return math.fsum(rho(e, f) for f in W)


class _Ratio:
    """``nu[h] / nu[e]`` as a lazily evaluated sequence."""

    __slots__ = ("w", "inv")

    def __init__(self, w: np.ndarray, e: int) -> None:
        self.w = w
        self.inv = 1.0 / w[e]

    def __getitem__(self, h: int) -> float:
        return self.w[h] * self.inv


class _ReadLog(list):
    """The per-vertex color tables of a coloring, logging which vertices are read."""

    def __init__(self, tables) -> None:
        super().__init__(tables)
        self.seen: set[int] = set()

    def __getitem__(self, v):
        self.seen.add(v)
        return list.__getitem__(self, v)


def find_light_chain(c: PartialColoring, e: int, nu: np.ndarray, L: float, stats: EnumerationStats | None = None) -> VizingChainRecord | None:
    """First enumerated chain at ``e`` of weight at most ``L``."""
    for rec in iter_three_step_chains(c, e, edge_cost=_Ratio(nu, e), max_cost=L, stats=stats):
        return rec
    return None


@dataclass
class ImprovementReport:
    L: float
    rounds: int = 0
    initial_uncolored: int = 0
    initial_uncolored_mass: float = 0.0
    final_uncolored_mass: float = 0.0
    recolored_mass: float = 0.0
    selected: list[int] = field(default_factory=list)
    searches: int = 0
    unverified: int = 0
    trace: list[str] = field(default_factory=list)
    applied: list[VizingChainRecord] = field(default_factory=list)
    log_L: float = math.nan
    """``log_{8D} L``, kept separately because the faithful schedule overflows ``L``."""

    @property
    def mass_budget(self) -> float:
        if self.initial_uncolored_mass == 0:
            return 0.0
        return self.L * self.initial_uncolored_mass


def vertex_adjacency(g: Graph) -> csr_matrix:
    indptr, indices = g.csr()
    return csr_matrix((np.ones(len(indices)), indices, indptr), shape=(g.n, g.n))


def select_far_apart(g: Graph, found: dict[int, VizingChainRecord], adj: csr_matrix | None = None) -> list[int]:
    """Greedy family in (length, edge id) order; starts ``e, e'`` keep distance ``>= 2 max(k, k') + 2``.

    Line distance between distinct edges is one more than the least vertex
    distance between their endpoints, so a candidate of length ``k`` is
    rejected when an endpoint lies within ``2k`` hops of a selected edge.
    """
    if adj is None:
        adj = vertex_adjacency(g)
    order = sorted(found, key=lambda e: (len(found[e]), e))
    reach = 2 * max((len(r) for r in found.values()), default=0)
    near: np.ndarray | None = None
    out = []
    for e in order:
        a, b = g.edges[e]
        if near is not None and min(near[a], near[b]) <= 2 * len(found[e]):
            continue
        out.append(e)
        d = dijkstra(adj, directed=False, indices=[a, b], unweighted=True, min_only=True, limit=reach + 0.5)
        near = d if near is None else np.minimum(near, d)
    return out


def selection_is_far_apart(g: Graph, found: dict[int, VizingChainRecord], chosen: Sequence[int]) -> bool:
    """Independent pairwise check of the far-apart rule by plain BFS."""
    from .graph import bfs_distances

    for i, e in enumerate(chosen):
        dist: dict[int, int] = {}
        for v in g.edges[e]:
            for w, d in bfs_distances(g, v).items():
                dist[w] = min(d, dist.get(w, d))
        for f in chosen[i + 1 :]:
            need = 2 * max(len(found[e]), len(found[f])) + 2
            gap = min(dist.get(v, math.inf) for v in g.edges[f]) + 1
            if gap < need:
                return False
    return True


def improve_to_weight(
    c: PartialColoring,
    nu: WeightedMeasure,
    L: float,
    trace: Callable[[str], None] | None = None,
    keep_chains: bool = False,
) -> tuple[PartialColoring, ImprovementReport]:
    """Augment weight-``L`` chains until none is left; ``c`` itself is not modified.

    Search results are cached together with the vertices whose color tables
    they read, and dropped once an augmentation touches one of them.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    g = c.graph
    w = nu.weights
    start = list(c.colors)
    out = c.copy()
    plain = out.at
    logged = _ReadLog(plain)
    uncolored = sorted(out.uncolored())
    rep = ImprovementReport(L=L, initial_uncolored=len(uncolored))
    rep.initial_uncolored_mass = math.fsum(w[e] for e in uncolored)
    stats = EnumerationStats()
    adj = vertex_adjacency(g)

    cache: dict[int, VizingChainRecord | None] = {}
    readers: dict[int, set[int]] = {}
    reads: dict[int, set[int]] = {}

    while uncolored:
        found: dict[int, VizingChainRecord] = {}
        for e in uncolored:
            if e not in cache:
                logged.seen = set()
                out.at = logged
                try:
                    cache[e] = find_light_chain(out, e, w, L, stats)
                finally:
                    out.at = plain
                rep.searches += 1
                reads[e] = logged.seen
                for v in logged.seen:
                    readers.setdefault(v, set()).add(e)
            if cache[e] is not None:
                found[e] = cache[e]
        if not found:
            break
        chosen = select_far_apart(g, found, adj)
        changed: set[int] = set()
        moved = 0.0
        for e in chosen:
            chain = found[e].chain
            for h in chain:
                changed.update(g.edges[h])
            moved += math.fsum(w[h] for h in chain)
            augment_inplace(out, chain)
            if keep_chains:
                rep.applied.append(found[e])
        stale = set()
        for v in changed:
            stale |= readers.pop(v, set())
        for e in stale:
            cache.pop(e, None)
            for v in reads.pop(e, ()):
                s = readers.get(v)
                if s is not None:
                    s.discard(e)
        done = set(chosen)
        for e in done:
            cache.pop(e, None)
        uncolored = [e for e in uncolored if e not in done]
        rep.rounds += 1
        rep.selected.append(len(chosen))
        line = (
            f"round={rep.rounds} L={L:g} uncolored={len(uncolored)} candidates={len(found)} "
            f"selected={len(chosen)} moved_mass={moved:.6e}"
        )
        rep.trace.append(line)
        if trace:
            trace(line)

    rep.unverified = stats.unverified
    rep.final_uncolored_mass = math.fsum(w[e] for e in uncolored)
    rep.recolored_mass = math.fsum(w[e] for e in range(g.m) if start[e] != out.colors[e])
    return out, rep


# ---------------------------------------------------------------------------
# schedules and the full pipeline
# ---------------------------------------------------------------------------


def desk_schedule(delta: int, start: float = 8.0) -> Iterator[tuple[float, float]]:
    """``L = 8, 16, 32, ...``; yields ``(L, log_{8D} L)``."""
    base = math.log(8 * max(delta, 1))
    L = start
    while True:
        yield L, math.log(L) / base
        L *= 2


def faithful_schedule(delta: int) -> Iterator[tuple[float, float]]:
    """``L_n = A (8D)^n`` with ``A`` the least value meeting ``log_{8D} A >= (8D)^20``.

    ``L`` overflows a double, so it is yielded as ``inf`` together with the
    exact ``log_{8D} L_n = (8D)^20 + n``.
    """
    base = 8 * max(delta, 1)
    n = 0
    while True:
        yield math.inf, float(base) ** 20 + n
        n += 1


@dataclass
class FullColoringReport:
    schedule: str
    stages: list[ImprovementReport]
    edge_measure: WeightedMeasure
    normalization: float
    worst_edge_ratio: float
    initial_uncolored: int

    @property
    def rounds(self) -> int:
        return sum(s.rounds for s in self.stages)


def full_coloring(
    g: Graph,
    mu: WeightedMeasure,
    schedule: str = "desk",
    start: PartialColoring | None = None,
    trace: Callable[[str], None] | None = None,
    keep_chains: bool = False,
) -> tuple[PartialColoring, FullColoringReport]:
    """Total proper coloring with ``D + 1`` colors via increasing-weight improvement stages."""
    c = greedy_partial_coloring(g) if start is None else start.copy()
    if g.m == 0:
        return c, FullColoringReport(schedule, [], WeightedMeasure(np.zeros(0)), 1.0, 1.0, 0)
    lifted = lift_to_edge_measure(mu, g)
    lg = line_graph(g).to_graph()
    bm = bounded_equivalent_measure(lifted, lg)
    nu = bm.nu
    if schedule == "desk":
        sched = desk_schedule(g.max_degree)
    elif schedule == "faithful":
        sched = faithful_schedule(g.max_degree)
    else:
        raise ValueError(f"unknown schedule {schedule!r}")
    stages = []
    initial = len(c.uncolored())
    for L, log_L in sched:
        if not c.uncolored():
            break
        c, rep = improve_to_weight(c, nu, L, trace=trace, keep_chains=keep_chains)
        rep.log_L = log_L
        stages.append(rep)
    return c, FullColoringReport(schedule, stages, nu, bm.normalization, bm.worst_edge_ratio, initial)
