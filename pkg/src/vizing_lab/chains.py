"""Alternating paths, fans and 3-step Vizing chains.

A 3-step chain at an uncolored edge ``e`` is the concatenation
``F1 P1 F2 P2 F3 P3`` of (conditional) fans and alternating paths.  The
construction runs in three iterations:

* iteration I grows the fan at ``x in e`` and, if it is not augmenting,
  truncates it at the first critical index and follows an alternating path;
* iteration II cuts that path before a *suitable* edge ``f1``, grows the
  conditional fan at its far end and continues along a second path;
* iteration III does the same at a *2-suitable* edge ``f2`` of the second path.

Distances between edges are line-graph distances throughout.  Vertex
distance ``d`` between endpoints translates to edge distance ``d + 1``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import accumulate
from typing import Iterator, Sequence

from .coloring import Chain, PartialColoring, ShiftedView, chain_vertices, classify_chain
from .graph import Graph


class PreconditionError(ValueError):
    """An operation was called outside its domain; the message names the clause."""


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AltPath:
    chain: Chain
    anchor: int
    alpha: int
    beta: int
    last_vertex: int

    def __len__(self) -> int:
        return len(self.chain)

    def vertices(self) -> list[int]:
        """Vertices in walking order, starting at the anchor."""
        return list(self._walk)

    _walk: tuple[int, ...] = field(default=(), repr=False, compare=False)


def alternating_path(c, x: int, alpha: int, beta: int) -> AltPath:
    """The maximal alpha/beta path starting at ``x`` (first edge colored ``alpha``).

    ``c`` is a ``PartialColoring`` or a ``ShiftedView``.
    """
    if alpha == beta:
        raise PreconditionError("alternating path needs two distinct colors")
    if not c.is_missing(x, beta):
        raise PreconditionError(f"beta={beta} is not missing at the start vertex {x}")
    g = c.graph
    edges = g.edges
    chain: list[int] = []
    walk = [x]
    seen = {x}
    cur, want, other = x, alpha, beta
    while True:
        e = c.edge_with(cur, want)
        if e is None:
            break
        a, b = edges[e]
        cur = b if cur == a else a
        if cur in seen:
            raise PreconditionError(f"alpha/beta walk from {x} revisits vertex {cur}; coloring is not proper")
        seen.add(cur)
        chain.append(e)
        walk.append(cur)
        want, other = other, want
    return AltPath(tuple(chain), x, alpha, beta, cur, tuple(walk))


@dataclass(frozen=True)
class Fan:
    chain: Chain
    center: int
    leaves: tuple[int, ...]
    alpha: int | None = None
    beta: int | None = None
    hit: bool = False
    """Conditional fans only: growth stopped at a leaf missing alpha or beta."""

    def __len__(self) -> int:
        return len(self.chain)


def fan(c: PartialColoring, x: int, e: int) -> Fan:
    """Maximal fan around ``x`` starting at the uncolored edge ``e``.

    Each next edge is the one at ``x`` carrying the least color missing at
    the previous leaf; growth stops when that color is missing at ``x`` or
    its edge is already in the fan.
    """
    g = c.graph
    if c.colors[e]:
        raise PreconditionError(f"fan start {e} is colored")
    if x not in g.edges[e]:
        raise PreconditionError(f"center {x} is not an endpoint of {e}")
    chain = [e]
    leaves = [g.other(e, x)]
    used = {e}
    while True:
        nxt = c.edge_with(x, c.min_missing(leaves[-1]))
        if nxt is None or nxt in used:
            break
        used.add(nxt)
        chain.append(nxt)
        leaves.append(g.other(nxt, x))
    return Fan(tuple(chain), x, tuple(leaves))


def conditional_fan(c: PartialColoring, f: int, y: int, alpha: int, beta: int, path: AltPath | None = None) -> Fan:
    """Maximal alpha/beta-conditional fan around ``y`` starting at the path edge ``f``.

    Growth stops at the first leaf missing ``alpha`` or ``beta`` (``hit``);
    otherwise the fan is maximal under the least-missing-color rule.
    """
    g = c.graph
    if y not in g.edges[f]:
        raise PreconditionError(f"{y} is not an endpoint of {f}")
    col = c.colors[f]
    if col not in (alpha, beta):
        raise PreconditionError(f"edge {f} is not colored alpha or beta")
    u0 = g.other(f, y)
    twin = beta if col == alpha else alpha
    if path is not None:
        if f not in path.chain:
            raise PreconditionError(f"edge {f} is not on the given path")
        pos = path.chain.index(f)
        if pos == 0:
            raise PreconditionError("f is the first edge of the path")
        if pos == len(path.chain) - 1:
            raise PreconditionError("f is the last edge of the path")
        if path.vertices()[pos + 1] != y:
            raise PreconditionError("y is not the last vertex of the prefix ending at f")
    if c.is_missing(u0, twin):
        raise PreconditionError("f is the first edge of its alternating path")
    if c.is_missing(y, twin):
        raise PreconditionError("f is the last edge of its alternating path")

    chain = [f]
    leaves = [u0]
    used = {f}
    hit = False
    while True:
        u = leaves[-1]
        if c.is_missing(u, alpha) or c.is_missing(u, beta):
            hit = True
            break
        nxt = c.edge_with(y, c.min_missing(u))
        if nxt is None or nxt in used:
            break
        used.add(nxt)
        chain.append(nxt)
        leaves.append(g.other(nxt, y))
    return Fan(tuple(chain), y, tuple(leaves), alpha, beta, hit)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

BLOCK_NAMES = ("F1", "P1", "F2", "P2", "F3", "P3")


@dataclass(frozen=True)
class VizingChainRecord:
    """One candidate chain ``F1 P1 F2 P2 F3 P3`` with its construction data.

    ``types[i]`` is the kind of iteration ``i+1``: ``"fan-only"`` or
    ``"vizing"`` for iteration I, ``"a"``/``"b"``/``"c"`` afterwards.
    ``fans`` and ``paths`` hold the untruncated objects the blocks are
    prefixes of.
    """

    e: int
    x: int
    blocks: tuple[Chain, Chain, Chain, Chain, Chain, Chain]
    y: tuple[int | None, int | None, int | None]
    z: tuple[int | None, int | None, int | None]
    colors: tuple[tuple[int, int] | None, ...]
    critical: tuple[int | None, int | None, int | None]
    f1: int | None
    f2: int | None
    types: tuple[str, ...]
    fans: tuple[Fan | None, Fan | None, Fan | None]
    paths: tuple[AltPath | None, AltPath | None, AltPath | None]
    amazing: bool | None = None
    failure: str | None = None
    truncated: bool = False
    augmenting: bool = False

    @property
    def chain(self) -> Chain:
        return tuple(e for b in self.blocks for e in b)

    def __len__(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def stage(self) -> int:
        return len(self.types)

    @property
    def edge_type(self) -> str:
        """``fan-only`` when the chain is a single fan, else the kind of the last iteration."""
        if not any(self.blocks[1:]):
            return "fan-only"
        return self.types[-1]

    def truncate(self, t: int) -> VizingChainRecord:
        """The record of the first ``t`` chain edges; emptied blocks drop their data."""
        left = t
        blocks = []
        for b in self.blocks:
            take = b[: max(left, 0)]
            blocks.append(take)
            left -= len(take)
        # iteration k is alive iff its fan block is nonempty
        alive = [bool(blocks[0]), bool(blocks[2]), bool(blocks[4])]
        keep = sum(alive)

        def cut(seq):
            return tuple(v if i < keep else None for i, v in enumerate(seq))

        y = cut(self.y)
        z = tuple(self.z[i] if i < keep and blocks[2 * i + 1] else None for i in range(3))
        return replace(
            self,
            blocks=tuple(blocks),
            y=y,
            z=z,
            colors=tuple(self.colors[i] if z[i] is not None else None for i in range(3)),
            critical=cut(self.critical),
            f1=self.f1 if keep >= 2 else None,
            f2=self.f2 if keep >= 3 else None,
            types=self.types[:keep],
            fans=cut(self.fans),
            paths=tuple(self.paths[i] if z[i] is not None else None for i in range(3)),
            truncated=t < len(self),
        )


def _empty_record(e: int, x: int) -> VizingChainRecord:
    return VizingChainRecord(
        e=e,
        x=x,
        blocks=((), (), (), (), (), ()),
        y=(x, None, None),
        z=(None, None, None),
        colors=(None, None, None),
        critical=(None, None, None),
        f1=None,
        f2=None,
        types=(),
        fans=(None, None, None),
        paths=(None, None, None),
    )


def _edge_near(g: Graph, vertices: set[int], radius: int) -> set[int]:
    """Vertices within ``radius`` hops of ``vertices``."""
    ball = set(vertices)
    frontier = set(vertices)
    for _ in range(radius):
        nxt = set()
        for v in frontier:
            for e in g.incidence[v]:
                w = g.other(e, v)
                if w not in ball:
                    nxt.add(w)
        ball |= nxt
        frontier = nxt
    return ball


def edge_distance_at_least(g: Graph, f: int, chain: Sequence[int], d: int) -> bool:
    """Line-graph distance from ``f`` to every edge of ``chain`` is at least ``d`` (d >= 1)."""
    if not chain:
        return True
    ball = _edge_near(g, chain_vertices(g, chain), d - 2) if d >= 2 else set()
    if d == 1:
        return f not in chain
    return not (set(g.edges[f]) & ball)


# ---------------------------------------------------------------------------
# iteration I
# ---------------------------------------------------------------------------


def first_iteration(c: PartialColoring, e: int, x: int) -> VizingChainRecord:
    """Vizing chain at ``e`` around ``x``: the fan if augmenting, else fan prefix plus path."""
    F = fan(c, x, e)
    rec = replace(_empty_record(e, x), fans=(F, None, None))
    if classify_chain(c, F.chain).augmenting:
        return replace(rec, blocks=(F.chain, (), (), (), (), ()), types=("fan-only",), augmenting=True)

    alpha = c.min_missing(x)
    beta = c.min_missing(F.leaves[-1])
    j = F.chain.index(c.edge_with(x, beta)) - 1
    k = len(F.chain) - 1
    for i in (j, k):
        P = alternating_path(c, F.leaves[i], alpha, beta)
        if P.chain and x in chain_vertices(c.graph, P.chain):
            continue
        blocks = (F.chain[: i + 1], P.chain, (), (), (), ())
        if not P.chain:
            rec = replace(rec, blocks=blocks, critical=(i, None, None), types=("fan-only",))
        else:
            rec = replace(
                rec,
                blocks=blocks,
                z=(F.leaves[i], None, None),
                colors=((alpha, beta), None, None),
                critical=(i, None, None),
                types=("vizing",),
                paths=(P, None, None),
            )
        return replace(rec, augmenting=classify_chain(c, rec.chain).augmenting)
    raise AssertionError(f"both alpha/beta paths at the fan around {x} reach {x}")


# ---------------------------------------------------------------------------
# suitability tests
# ---------------------------------------------------------------------------


def _far_vertex(path: AltPath, pos: int) -> int:
    return path.vertices()[pos + 1]


def suitability_failure(c: PartialColoring, rec: VizingChainRecord, f1: int) -> str | None:
    """Why ``f1`` is not suitable for iteration II, or ``None``."""
    path = rec.paths[0]
    if path is None or not rec.blocks[1]:
        return "iteration I produced no alternating path"
    if f1 not in path.chain:
        return "f1 is not on the first alternating path"
    pos = path.chain.index(f1)
    if pos == len(path.chain) - 1:
        return "f1 is the last edge of the path"
    if c.colors[f1] != path.alpha:
        return "c(f1) differs from alpha_1"
    if not edge_distance_at_least(c.graph, f1, rec.blocks[0], 3):
        return "f1 is within distance 2 of F1"
    return None


def _paths_avoid(c: PartialColoring, center: int, ball: set[int]) -> bool:
    """No nonempty alternating path anchored at a neighbor of ``center`` enters ``ball``."""
    g = c.graph
    for e in g.incidence[center]:
        w = g.other(e, center)
        for kappa in sorted(c.missing(w)):
            for iota in range(1, c.palette + 1):
                if iota == kappa or c.is_missing(w, iota):
                    continue
                cur, want, other = w, iota, kappa
                if cur in ball:
                    return False
                while True:
                    h = c.edge_with(cur, want)
                    if h is None:
                        break
                    cur = g.other(h, cur)
                    if cur in ball:
                        return False
                    want, other = other, want
    return True


def superb_surrogate(c: PartialColoring, rec: VizingChainRecord, f1: int) -> bool:
    """Stand-in for superb: paths anchored next to ``y2`` keep line-graph distance > 3 from ``F1``."""
    path = rec.paths[0]
    y2 = _far_vertex(path, path.chain.index(f1))
    ball = _edge_near(c.graph, chain_vertices(c.graph, rec.blocks[0]), 2)
    return _paths_avoid(c, y2, ball)


def two_suitability_failure(c: PartialColoring, rec: VizingChainRecord, f2: int) -> str | None:
    path = rec.paths[1]
    if path is None or not rec.blocks[3]:
        return "iteration II produced no alternating path"
    if f2 not in path.chain:
        return "f2 is not on the second alternating path"
    pos = path.chain.index(f2)
    if pos == len(path.chain) - 1:
        return "f2 is the last edge of the path"
    if c.colors[f2] != path.alpha:
        return "c(f2) differs from alpha_2"
    if not edge_distance_at_least(c.graph, f2, rec.blocks[0] + rec.blocks[1] + rec.blocks[2], 3):
        return "f2 is within distance 2 of F1 P1 F2"
    return None


def amazing_sufficient(c: PartialColoring, rec: VizingChainRecord, f2: int) -> bool:
    """Clause (2) of the amazing-edge criterion for a 2-suitable ``f2``.

    True iff no alternating path anchored at a neighbor of ``y3`` comes
    within line-graph distance 3 of ``F1 P1 F2``.  Sufficient, not necessary.
    """
    path = rec.paths[1]
    y3 = _far_vertex(path, path.chain.index(f2))
    ref = rec.blocks[0] + rec.blocks[1] + rec.blocks[2]
    ball = _edge_near(c.graph, chain_vertices(c.graph, ref), 2)
    return _paths_avoid(c, y3, ball)


# ---------------------------------------------------------------------------
# iterations II and III
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Completion:
    kind: str
    fan_block: Chain
    z: int | None
    colors: tuple[int, int] | None
    critical: int | None
    path: AltPath | None
    amazing: bool
    failure: str | None = None


def _complete(c: PartialColoring, prefix: Chain, cf: Fan, check_paths: bool) -> _Completion:
    """Type (a)/(b)/(c) completion of a conditional fan grown after ``prefix``.

    With ``check_paths`` the path equalities that make the edge amazing are
    tested; iteration II relies on the superb stand-in instead.
    """
    g = c.graph
    alpha, beta, y = cf.alpha, cf.beta, cf.center
    q = prefix + cf.chain
    if classify_chain(c, q).augmenting:
        return _Completion("a", cf.chain, None, None, len(cf.chain) - 1, None, True)

    wn = cf.leaves[-1]
    n = len(cf.chain) - 1
    if cf.hit:
        if not c.is_missing(wn, beta):
            return _Completion("b", cf.chain, wn, (alpha, beta), n, None, False, "beta not missing at w_n")
        P = alternating_path(c, wn, alpha, beta)
        amazing = True
        failure = None
        if check_paths:
            view = ShiftedView(c, q)
            if not view.is_missing(wn, beta) or alternating_path(view, wn, alpha, beta).chain != P.chain:
                amazing, failure = False, "P_{c_Q}(z3) differs from P_c(z3)"
        return _Completion("b", cf.chain, wn, (alpha, beta), n, P, amazing, failure)

    gamma = c.min_missing(y)
    delta = c.min_missing(wn)
    h = c.edge_with(y, delta)
    if h is None or h not in cf.chain:
        return _Completion("c", cf.chain, None, None, None, None, False, "no earlier leaf shares delta")
    j = cf.chain.index(h) - 1
    if {gamma, delta} & {alpha, beta}:
        raise AssertionError("type (c) colors meet the previous alternating colors")
    paths = {i: alternating_path(c, cf.leaves[i], gamma, delta) for i in (j, n)}
    if check_paths:
        view = ShiftedView(c, prefix)
        for i in (j, n):
            w = cf.leaves[i]
            if not view.is_missing(w, delta) or alternating_path(view, w, gamma, delta).chain != paths[i].chain:
                tag = "w_j" if i == j else "w_n"
                return _Completion("c", cf.chain, None, (gamma, delta), None, None, False, f"P_{{c_R}}({tag}) differs from P_c({tag})")
    for ell in (j, n):
        if y not in chain_vertices(g, paths[ell].chain):
            return _Completion("c", cf.chain[: ell + 1], cf.leaves[ell], (gamma, delta), ell, paths[ell], True)
    return _Completion("c", cf.chain, None, (gamma, delta), None, None, False, "both gamma/delta paths reach y")


def second_iteration(c: PartialColoring, rec: VizingChainRecord, f1: int, check_superb: bool = True) -> VizingChainRecord:
    why = suitability_failure(c, rec, f1)
    if why:
        raise PreconditionError(f"f1 not suitable: {why}")
    if check_superb and not superb_surrogate(c, rec, f1):
        raise PreconditionError("f1 fails the superb stand-in test")
    path = rec.paths[0]
    pos = path.chain.index(f1)
    y2 = _far_vertex(path, pos)
    p1 = path.chain[:pos]
    prefix = rec.blocks[0] + p1
    cf = conditional_fan(c, f1, y2, path.alpha, path.beta)
    comp = _complete(c, prefix, cf, check_paths=False)
    if comp.colors is not None:
        pair, old = set(comp.colors), {path.alpha, path.beta}
        if pair != old and pair & old:
            raise AssertionError("iteration II colors neither equal nor disjoint from alpha_1/beta_1")
    p2 = comp.path.chain if comp.path is not None else ()
    out = replace(
        rec,
        blocks=(rec.blocks[0], p1, comp.fan_block, p2, (), ()),
        y=(rec.y[0], y2, None),
        z=(rec.z[0], comp.z if p2 else None, None),
        colors=(rec.colors[0], comp.colors if p2 else None, None),
        critical=(rec.critical[0], comp.critical, None),
        f1=f1,
        types=rec.types[:1] + (comp.kind,),
        fans=(rec.fans[0], cf, None),
        paths=(path, comp.path if p2 else None, None),
        failure=comp.failure,
    )
    ok = comp.failure is None
    return replace(out, augmenting=ok and classify_chain(c, out.chain).augmenting)


def third_iteration(c: PartialColoring, rec: VizingChainRecord, f2: int) -> VizingChainRecord:
    """Complete a 2-step record at a 2-suitable ``f2``.

    The result carries ``amazing`` and, when not amazing, the failed path
    equality in ``failure``.
    """
    why = two_suitability_failure(c, rec, f2)
    if why:
        raise PreconditionError(f"f2 not 2-suitable: {why}")
    path = rec.paths[1]
    pos = path.chain.index(f2)
    y3 = _far_vertex(path, pos)
    p2 = path.chain[:pos]
    prefix = rec.blocks[0] + rec.blocks[1] + rec.blocks[2] + p2
    cf = conditional_fan(c, f2, y3, path.alpha, path.beta)
    comp = _complete(c, prefix, cf, check_paths=True)
    p3 = comp.path.chain if comp.path is not None and comp.amazing else ()
    out = replace(
        rec,
        blocks=rec.blocks[:3] + (p2, comp.fan_block, p3),
        y=(rec.y[0], rec.y[1], y3),
        z=(rec.z[0], rec.z[1], comp.z if p3 else None),
        colors=(rec.colors[0], rec.colors[1], comp.colors if p3 else None),
        critical=(rec.critical[0], rec.critical[1], comp.critical),
        f2=f2,
        types=rec.types[:2] + (comp.kind,),
        fans=(rec.fans[0], rec.fans[1], cf),
        paths=(rec.paths[0], path, comp.path if p3 else None),
        amazing=comp.amazing,
        failure=comp.failure,
    )
    return replace(out, augmenting=comp.amazing and classify_chain(c, out.chain).augmenting)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass
class EnumerationStats:
    skeletons: int = 0
    emitted: int = 0
    unverified: int = 0
    """Records the construction vouches for that failed ``classify_chain``."""
    touched: set = field(default_factory=set)


def _prefix_common_missing(c: PartialColoring, chain: Chain, pos: dict[int, int], t: int) -> bool:
    """Do the ends of ``chain[t-1]`` share a missing color after shifting ``chain[:t]``?"""
    g = c.graph
    colors = c.colors
    present: set[int] = set()
    for v in g.edges[chain[t - 1]]:
        for h in g.incidence[v]:
            s = pos.get(h)
            if s is None or s >= t:
                col = colors[h]
            elif s == t - 1:
                continue
            else:
                col = colors[chain[s + 1]]
            if col:
                present.add(col)
    return len(present) < c.palette


def _cost_ok(costs: Sequence[float] | None, cap: float | None, chain: Chain) -> bool:
    if cap is None:
        return True
    if costs is None:
        return len(chain) <= cap
    return math.fsum(costs[h] for h in chain) <= cap


def iter_three_step_chains(
    c: PartialColoring,
    e: int,
    edge_cost: Sequence[float] | None = None,
    max_cost: float | None = None,
    stats: EnumerationStats | None = None,
) -> Iterator[VizingChainRecord]:
    """Yield augmenting 3-step chains at ``e`` in canonical order.

    Order: endpoints ``x`` ascending; for each, the iteration-I chain, then
    per suitable ``f1`` (in path order) the iteration-II chain followed by
    its iteration-III chains per 2-suitable ``f2``.  Every prefix of a
    constructed chain that is itself augmenting is yielded once, shortest
    first.  With ``max_cost`` only chains whose summed ``edge_cost``
    (default 1 per edge) stays within the cap are produced; the cost is
    monotone in the prefix, which prunes the search.
    """
    if c.colors[e]:
        raise PreconditionError(f"edge {e} is colored")
    stats = stats if stats is not None else EnumerationStats()
    g = c.graph
    seen: set[Chain] = set()

    def cost_of(h: int) -> float:
        return 1.0 if edge_cost is None else edge_cost[h]

    def emit(rec: VizingChainRecord, stem: int) -> Iterator[VizingChainRecord]:
        stats.skeletons += 1
        chain = rec.chain
        stats.touched.update(chain_vertices(g, chain))
        pos = {h: s for s, h in enumerate(chain)}
        total = math.fsum(cost_of(h) for h in chain[:stem])
        for t in range(stem + 1, len(chain) + 1):
            total += cost_of(chain[t - 1])
            if max_cost is not None and total > max_cost * (1 + 1e-12):
                return
            if t < len(chain) and not _prefix_common_missing(c, chain, pos, t):
                continue
            sub = chain[:t]
            if sub in seen:
                continue
            if t == len(chain):
                if not rec.augmenting:
                    if rec.failure is None:
                        stats.unverified += 1
                    continue
                out = rec
            else:
                if not classify_chain(c, sub).augmenting:
                    continue
                out = replace(rec.truncate(t), augmenting=True)
            seen.add(sub)
            stats.emitted += 1
            yield out

    for x in sorted(g.edges[e]):
        r1 = first_iteration(c, e, x)
        yield from emit(r1, 0)
        path1 = r1.paths[0]
        if path1 is None:
            continue
        f1_stem = r1.blocks[0]
        for pos1, f1 in enumerate(path1.chain):
            head = f1_stem + path1.chain[: pos1 + 1]
            if not _cost_ok(edge_cost, max_cost, head):
                break
            if suitability_failure(c, r1, f1) or not superb_surrogate(c, r1, f1):
                continue
            r2 = second_iteration(c, r1, f1, check_superb=False)
            stem2 = len(f1_stem) + pos1
            yield from emit(r2, stem2)
            path2 = r2.paths[1]
            if path2 is None:
                continue
            base2 = r2.blocks[0] + r2.blocks[1] + r2.blocks[2]
            for pos2, f2 in enumerate(path2.chain):
                if not _cost_ok(edge_cost, max_cost, base2 + path2.chain[: pos2 + 1]):
                    break
                if two_suitability_failure(c, r2, f2):
                    continue
                r3 = third_iteration(c, r2, f2)
                if r3.amazing:
                    yield from emit(r3, len(base2) + pos2)


def enumerate_three_step_chains(c: PartialColoring, e: int, budget: int | None = None) -> list[VizingChainRecord]:
    out = []
    for rec in iter_three_step_chains(c, e):
        out.append(rec)
        if budget is not None and len(out) >= budget:
            break
    return out


def is_k_bad(c: PartialColoring, e: int, K: int) -> bool:
    """Every enumerated 3-step chain at ``e`` has length at least ``2K + 2*Delta``."""
    bound = 2 * K + 2 * c.graph.max_degree
    for _ in iter_three_step_chains(c, e, max_cost=bound - 1):
        return False
    return True


def min_chain_length(c: PartialColoring, e: int) -> int | None:
    best = None
    for rec in iter_three_step_chains(c, e, max_cost=None):
        if best is None or len(rec) < best:
            best = len(rec)
    return best


# ---------------------------------------------------------------------------
# structural validation
# ---------------------------------------------------------------------------


def validate_record(c: PartialColoring, rec: VizingChainRecord) -> list[str]:
    """Check the block decomposition against its defining clauses; returns violations."""
    g = c.graph
    bad = []
    F1, P1, F2, P2, F3, P3 = rec.blocks
    seq = rec.blocks
    for i, b in enumerate(seq):
        if not b and any(seq[i + 1 :]):
            bad.append(f"{BLOCK_NAMES[i]} empty but a later block is not")
            break
    chain = rec.chain
    for a, b in zip(chain, chain[1:]):
        if not set(g.edges[a]) & set(g.edges[b]):
            bad.append(f"consecutive edges {a},{b} do not meet")
            break
    if F1:
        full = fan(c, rec.y[0], rec.e).chain
        if full[: len(F1)] != F1:
            bad.append("F1 is not a prefix of the fan at e")
    for k, (Fb, Pb) in enumerate(((F1, P1), (F2, P2), (F3, P3))):
        if k > 0 and Fb:
            prev = rec.paths[k - 1]
            if prev is None or rec.y[k] is None:
                bad.append(f"F{k + 1} present without iteration {k} data")
            else:
                cf = conditional_fan(c, Fb[0], rec.y[k], prev.alpha, prev.beta)
                if cf.chain[: len(Fb)] != Fb:
                    bad.append(f"F{k + 1} is not a prefix of its conditional fan")
        if Pb:
            if rec.z[k] is None or rec.colors[k] is None:
                bad.append(f"P{k + 1} present without anchor/colors")
                continue
            a, b = rec.colors[k]
            try:
                full = alternating_path(c, rec.z[k], a, b).chain
            except PreconditionError as exc:
                bad.append(f"P{k + 1}: {exc}")
                continue
            if full[: len(Pb)] != Pb:
                bad.append(f"P{k + 1} is not a prefix of P_c(z{k + 1}, {a}/{b})")
    named = [v for v in rec.y + rec.z if v is not None]
    if len(named) != len(set(named)):
        bad.append("anchors y_i, z_i are not pairwise different")
    if not classify_chain(c, chain).augmenting:
        bad.append("chain is not c-augmenting")
    return bad


# ---------------------------------------------------------------------------
# pair families
# ---------------------------------------------------------------------------


@dataclass
class PairFamily:
    e: int
    x: int
    K: int
    gamma_delta: tuple[int, int] | None
    pairs: set[tuple[int, int]]
    rejected: set[int]
    candidates: set[int]
    superb_count: int
    lower_bound: float
    bound_holds: bool
    superb_estimate: float
    """Claimed count of superb f1 edges (imported constant, informational)."""
    candidate_estimate: float
    rejected_estimate: float
    records: dict[tuple[int, int], VizingChainRecord] = field(default_factory=dict)

    def projection(self) -> set[int]:
        return {f2 for _, f2 in self.pairs}


def main_estimate(K: float, delta: int) -> float:
    return K * K / (8 * delta) ** 4 - (16 * delta) ** 5 * K


def pair_family(c: PartialColoring, e: int, K: int, x: int | None = None) -> PairFamily:
    """Pairs ``(f1, f2)`` with superb ``f1`` and amazing ``f2``, both at index at most ``K/2``.

    The shared color pair is the iteration-II pair carried by the most
    superb ``f1`` (least pair on ties).  ``candidates`` and ``rejected``
    are the edge sets bounded from below and above in the counting argument.
    """
    if not is_k_bad(c, e, K):
        raise PreconditionError(f"edge {e} is not {K}-bad")
    g = c.graph
    delta = g.max_degree
    x = min(g.edges[e]) if x is None else x
    r1 = first_iteration(c, e, x)
    half = K / 2
    seconds: dict[int, VizingChainRecord] = {}
    if r1.paths[0] is not None:
        for pos, f1 in enumerate(r1.paths[0].chain):
            if pos + 1 > half:
                break
            if suitability_failure(c, r1, f1) or not superb_surrogate(c, r1, f1):
                continue
            r2 = second_iteration(c, r1, f1, check_superb=False)
            if r2.paths[1] is not None:
                seconds[f1] = r2
    tally = Counter(r.colors[1] for r in seconds.values())
    gd = min(tally, key=lambda p: (-tally[p], p)) if tally else None

    pairs: set[tuple[int, int]] = set()
    records: dict[tuple[int, int], VizingChainRecord] = {}
    rejected: set[int] = set()
    candidates: set[int] = set()
    for f1, r2 in seconds.items():
        if r2.colors[1] != gd:
            continue
        path2 = r2.paths[1]
        for pos, f2 in enumerate(path2.chain):
            if pos + 1 > half:
                break
            if c.colors[f2] != gd[0]:
                continue
            candidates.add(f2)
            suitable = two_suitability_failure(c, r2, f2) is None
            if not suitable or not amazing_sufficient(c, r2, f2):
                rejected.add(f2)
            if suitable:
                r3 = third_iteration(c, r2, f2)
                if r3.amazing:
                    pairs.add((f1, f2))
                    records[(f1, f2)] = r3
    if not (candidates - rejected) <= {f2 for _, f2 in pairs}:
        raise AssertionError("a candidate passing the sufficient test is not amazing")
    lb = main_estimate(K, delta)
    gp3 = (K / 4 - delta**5 - 1) / (3 * (delta + 1) ** 2) - 2 * delta**3
    rej_est = 4 * (delta + 1) ** 4 * sum((2 * delta) ** r for r in range(5)) * (half + delta)
    return PairFamily(
        e=e,
        x=x,
        K=K,
        gamma_delta=gd,
        pairs=pairs,
        rejected=rejected,
        candidates=candidates,
        superb_count=tally[gd] if gd else 0,
        lower_bound=lb,
        bound_holds=len(pairs) >= lb,
        superb_estimate=gp3,
        candidate_estimate=K / (4 * delta**2) * gp3 if delta else 0.0,
        rejected_estimate=rej_est,
        records=records,
    )


# ---------------------------------------------------------------------------
# chain trace format
# ---------------------------------------------------------------------------


def _ids(seq) -> str:
    return ",".join("-" if v is None else str(v) for v in seq)


def format_record(rec: VizingChainRecord) -> str:
    """One line: ``key=value`` fields separated by single spaces."""
    fields = [f"edge={rec.e}", f"x={rec.x}", f"type={rec.edge_type}", f"len={len(rec)}"]
    fields += [f"{name}={_ids(b)}" for name, b in zip(BLOCK_NAMES, rec.blocks)]
    fields.append(f"y={_ids(rec.y)}")
    fields.append(f"z={_ids(rec.z)}")
    fields.append("colors=" + ",".join("-" if p is None else f"{p[0]}/{p[1]}" for p in rec.colors))
    fields.append(f"critical={_ids(rec.critical)}")
    fields.append(f"f1={'-' if rec.f1 is None else rec.f1}")
    fields.append(f"f2={'-' if rec.f2 is None else rec.f2}")
    fields.append(f"truncated={int(rec.truncated)}")
    return " ".join(fields)


def parse_record_line(line: str) -> dict:
    """Inverse of ``format_record`` into plain values (blocks as tuples)."""
    out: dict = {}
    for tok in line.split():
        key, _, val = tok.partition("=")
        if key in BLOCK_NAMES:
            out[key] = tuple(int(v) for v in val.split(",") if v)
        elif key in ("y", "z", "critical"):
            out[key] = tuple(None if v == "-" else int(v) for v in val.split(","))
        elif key == "colors":
            out[key] = tuple(None if v == "-" else tuple(int(p) for p in v.split("/")) for v in val.split(","))
        elif key in ("f1", "f2"):
            out[key] = None if val == "-" else int(val)
        elif key == "type":
            out[key] = val
        else:
            out[key] = int(val)
    return out
