"""Partial edge colorings, chains, shifts and augmentation.

Colors are ``1..Delta+1``; ``0`` marks an uncolored edge.  A chain is a plain
tuple of edge ids in which consecutive edges share a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import Graph

Chain = tuple[int, ...]


class ChainError(ValueError):
    """A chain does not meet the precondition of an operation."""


class PartialColoring:
    """Mutable partial edge coloring with per-vertex color lookup.

    ``colors[e]`` is the color of edge ``e`` (0 if uncolored) and ``at[v]``
    maps each color present at ``v`` to the edge carrying it.  Improper
    assignments are representable (``at`` then keeps the lowest edge id) so
    that audits have something to report on.
    """

    __slots__ = ("graph", "palette", "colors", "at")

    def __init__(self, graph: Graph, colors: Sequence[int] | None = None, palette: int | None = None) -> None:
        self.graph = graph
        self.palette = graph.max_degree + 1 if palette is None else palette
        self.colors = [0] * graph.m if colors is None else list(colors)
        if len(self.colors) != graph.m:
            raise ValueError("color list length differs from edge count")
        self.at: list[dict[int, int]] = [{} for _ in range(graph.n)]
        for e in range(graph.m - 1, -1, -1):
            col = self.colors[e]
            if col:
                if not 1 <= col <= self.palette:
                    raise ValueError(f"edge {e}: color {col} outside 1..{self.palette}")
                u, v = graph.edges[e]
                self.at[u][col] = e
                self.at[v][col] = e

    @classmethod
    def from_mapping(cls, graph: Graph, mapping: Mapping[int, int], palette: int | None = None) -> PartialColoring:
        colors = [0] * graph.m
        for e, col in mapping.items():
            colors[e] = col
        return cls(graph, colors, palette)

    def copy(self) -> PartialColoring:
        new = PartialColoring.__new__(PartialColoring)
        new.graph = self.graph
        new.palette = self.palette
        new.colors = list(self.colors)
        new.at = [dict(d) for d in self.at]
        return new

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialColoring):
            return NotImplemented
        return self.graph is other.graph and self.palette == other.palette and self.colors == other.colors

    def __repr__(self) -> str:
        return f"PartialColoring(colored={len(self.colors) - self.colors.count(0)}/{len(self.colors)})"

    # view protocol shared with ShiftedView -----------------------------------

    def color_of(self, e: int) -> int:
        return self.colors[e]

    def edge_with(self, v: int, col: int) -> int | None:
        return self.at[v].get(col)

    def is_missing(self, v: int, col: int) -> bool:
        return col not in self.at[v]

    def missing(self, v: int) -> set[int]:
        present = self.at[v]
        return {col for col in range(1, self.palette + 1) if col not in present}

    def min_missing(self, v: int) -> int:
        present = self.at[v]
        for col in range(1, self.palette + 1):
            if col not in present:
                return col
        raise ValueError(f"vertex {v} has no missing color")

    # mutation ----------------------------------------------------------------

    def set_color(self, e: int, col: int) -> None:
        old = self.colors[e]
        u, v = self.graph.edges[e]
        if old:
            for w in (u, v):
                if self.at[w].get(old) == e:
                    del self.at[w][old]
        self.colors[e] = col
        if col:
            self.at[u][col] = e
            self.at[v][col] = e

    def dom(self) -> set[int]:
        return {e for e, col in enumerate(self.colors) if col}

    def uncolored(self) -> set[int]:
        return {e for e, col in enumerate(self.colors) if not col}

    def num_colors_used(self) -> int:
        return len({col for col in self.colors if col})


class ShiftedView:
    """Read-only view of ``c_P`` for a shiftable chain ``P`` over a proper ``c``.

    Lookups cost O(1) plus the number of chain edges at the queried vertex,
    so alternating paths under a shifted coloring never copy the base.
    """

    __slots__ = ("base", "graph", "palette", "new", "local")

    def __init__(self, base: PartialColoring, chain: Sequence[int]) -> None:
        self.base = base
        self.graph = base.graph
        self.palette = base.palette
        new: dict[int, int] = {}
        n = len(chain)
        for i, e in enumerate(chain):
            new[e] = base.colors[chain[i + 1]] if i + 1 < n else 0
        self.new = new
        local: dict[int, list[int]] = {}
        edges = self.graph.edges
        for e in new:
            u, v = edges[e]
            local.setdefault(u, []).append(e)
            local.setdefault(v, []).append(e)
        self.local = local

    def color_of(self, e: int) -> int:
        col = self.new.get(e)
        return self.base.colors[e] if col is None else col

    def edge_with(self, v: int, col: int) -> int | None:
        for e in self.local.get(v, ()):
            if self.new[e] == col:
                return e
        e = self.base.at[v].get(col)
        if e is not None and e in self.new:
            return None
        return e

    def is_missing(self, v: int, col: int) -> bool:
        return self.edge_with(v, col) is None

    def missing(self, v: int) -> set[int]:
        return {col for col in range(1, self.palette + 1) if self.edge_with(v, col) is None}


def missing_colors(c: PartialColoring, x: int) -> set[int]:
    return c.missing(x)


def uncolored_set(c: PartialColoring) -> set[int]:
    return c.uncolored()


@dataclass(frozen=True)
class Clash:
    vertex: int
    edges: tuple[int, int]
    color: int


def properness_audit(c: PartialColoring) -> list[Clash]:
    """Every vertex where two colored edges share a color, with the clashing pair."""
    g = c.graph
    out = []
    for v in g.vertices():
        seen: dict[int, int] = {}
        for e in g.incidence[v]:
            col = c.colors[e]
            if not col:
                continue
            if col in seen:
                out.append(Clash(v, (seen[col], e), col))
                break
            seen[col] = e
    return out


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


def is_chain(g: Graph, chain: Sequence[int]) -> bool:
    for a, b in zip(chain, chain[1:]):
        if not set(g.edges[a]) & set(g.edges[b]):
            return False
    return True


def chain_vertices(g: Graph, chain: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for e in chain:
        out.update(g.edges[e])
    return out


@dataclass(frozen=True)
class ChainClassification:
    edge_injective: bool
    shiftable: bool
    proper_shiftable: bool
    augmenting: bool
    witness: tuple | None = None
    """First violated clause, e.g. ``("repeat", i, j)`` or ``("clash", v, e, f)``."""


def _shift_colors(c: PartialColoring, chain: Sequence[int]) -> dict[int, int]:
    n = len(chain)
    return {e: (c.colors[chain[i + 1]] if i + 1 < n else 0) for i, e in enumerate(chain)}


def classify_chain(c: PartialColoring, chain: Sequence[int]) -> ChainClassification:
    chain = tuple(chain)
    first: dict[int, int] = {}
    for j, e in enumerate(chain):
        if e in first:
            return ChainClassification(False, False, False, False, ("repeat", first[e], j))
        first[e] = j
    if not chain:
        return ChainClassification(True, False, False, False, ("empty",))
    if c.colors[chain[0]]:
        return ChainClassification(True, False, False, False, ("first_colored", chain[0]))
    for j in range(1, len(chain)):
        if not c.colors[chain[j]]:
            return ChainClassification(True, False, False, False, ("uncolored_inside", j, chain[j]))

    g = c.graph
    new = _shift_colors(c, chain)
    for v in sorted(chain_vertices(g, chain)):
        seen: dict[int, int] = {}
        for e in g.incidence[v]:
            col = new.get(e)
            if col is None:
                col = c.colors[e]
            if not col:
                continue
            if col in seen:
                return ChainClassification(True, True, False, False, ("clash", v, seen[col], e))
            seen[col] = e

    x, y = g.edges[chain[-1]]
    present: set[int] = set()
    for v in (x, y):
        for e in g.incidence[v]:
            col = new.get(e, c.colors[e])
            if col:
                present.add(col)
    if len(present) >= c.palette:
        return ChainClassification(True, True, True, False, ("no_common_missing", x, y))
    return ChainClassification(True, True, True, True, None)


def shift_along(c: PartialColoring, chain: Sequence[int]) -> PartialColoring:
    """The shift ``c_P``: ``c_P(e_i) = c(e_{i+1})``, last edge uncolored.

    The result need not be proper; ``classify_chain`` decides that.
    """
    cls = classify_chain(c, chain)
    if not cls.shiftable:
        raise ChainError(f"chain is not shiftable: {cls.witness}")
    new = _shift_colors(c, chain)
    colors = list(c.colors)
    for e, col in new.items():
        colors[e] = col
    return PartialColoring(c.graph, colors, c.palette)


def _common_missing_after_shift(c: PartialColoring, new: Mapping[int, int], last: int) -> int | None:
    g = c.graph
    present: set[int] = set()
    for v in g.edges[last]:
        for e in g.incidence[v]:
            col = new.get(e, c.colors[e])
            if col:
                present.add(col)
    for col in range(1, c.palette + 1):
        if col not in present:
            return col
    return None


def augment_inplace(c: PartialColoring, chain: Sequence[int]) -> int:
    """Apply an augmenting chain to ``c`` in place; returns the new color of the last edge.

    No checks are made: callers hold a chain already classified as augmenting.
    """
    new = _shift_colors(c, chain)
    col = _common_missing_after_shift(c, new, chain[-1])
    if col is None:
        raise ChainError("last edge has no common missing color after the shift")
    new[chain[-1]] = col
    for e in chain:
        c.set_color(e, 0)
    for e in chain:
        c.set_color(e, new[e])
    return col


def augment_with_chain(c: PartialColoring, chain: Sequence[int]) -> PartialColoring:
    """Shift along an augmenting chain and give its last edge the least common missing color."""
    cls = classify_chain(c, chain)
    if not cls.augmenting:
        raise ChainError(f"chain is not augmenting: {cls.witness}")
    out = c.copy()
    augment_inplace(out, chain)
    return out


def greedy_partial_coloring(g: Graph) -> PartialColoring:
    """Color edges in id order with the least color missing at both ends, skipping edges with none."""
    c = PartialColoring(g)
    for e, (u, v) in enumerate(g.edges):
        au, av = c.at[u], c.at[v]
        for col in range(1, c.palette + 1):
            if col not in au and col not in av:
                c.set_color(e, col)
                break
    return c


# ---------------------------------------------------------------------------
# serialization: "edgeid color" per colored edge, ascending edge id
# ---------------------------------------------------------------------------


def format_coloring(c: PartialColoring) -> str:
    return "".join(f"{e} {col}\n" for e, col in enumerate(c.colors) if col)


def parse_coloring(text: str, graph: Graph, source: str = "<string>") -> PartialColoring:
    colors = [0] * graph.m
    palette = graph.max_degree + 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 2:
            raise ValueError(f"{source}:{lineno}: expected 'edgeid color', got {raw.strip()!r}")
        try:
            e, col = int(line[0]), int(line[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-integer field in {raw.strip()!r}") from None
        if not 0 <= e < graph.m:
            raise ValueError(f"{source}:{lineno}: edge id {e} out of range")
        if not 1 <= col <= palette:
            raise ValueError(f"{source}:{lineno}: color {col} outside 1..{palette}")
        if colors[e]:
            raise ValueError(f"{source}:{lineno}: edge {e} colored twice")
        colors[e] = col
    return PartialColoring(graph, colors, palette)
