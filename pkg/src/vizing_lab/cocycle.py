"""Measures, density-ratio cocycles and the bounded-cocycle reweighting.

On a finite graph a strictly positive weight vector ``w`` plays the role of a
quasi-invariant measure and its cocycle is ``rho(x, y) = w(y) / w(x)`` for
``x, y`` in the same component.  ``bounded_equivalent_measure`` multiplies
``w`` by a density ``Omega >= 1`` that averages the ratios over distance
layers, which squeezes every edge ratio into ``[1/(4D), 4D]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .graph import Graph, bfs_distances, component_labels, greedy_proper_edge_coloring
from .kernels import layered_mass


class CocycleError(ValueError):
    pass


@dataclass
class WeightedMeasure:
    """Strictly positive weights indexed by vertex (or edge) id.

    ``scale`` records the factor the weights were divided by when normalized.
    """

    weights: np.ndarray
    scale: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.size and not np.all(self.weights > 0):
            raise CocycleError("weights must be strictly positive")
        if not np.all(np.isfinite(self.weights)):
            raise CocycleError("weights must be finite")

    @classmethod
    def uniform(cls, size: int) -> WeightedMeasure:
        return cls(np.full(size, 1.0 / size) if size else np.zeros(0))

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    def normalized(self) -> WeightedMeasure:
        t = self.total
        return WeightedMeasure(self.weights / t, self.scale * t, dict(self.meta))

    def __getitem__(self, i: int) -> float:
        return float(self.weights[i])

    def __len__(self) -> int:
        return len(self.weights)

    def mass(self, ids) -> float:
        return math.fsum(self.weights[i] for i in ids)


class Cocycle:
    """``rho(x, y) = w(y) / w(x)`` on same-component pairs."""

    def __init__(self, weights: np.ndarray, components: list[int] | np.ndarray) -> None:
        self.weights = np.asarray(weights, dtype=np.float64)
        self.components = np.asarray(components)

    def __call__(self, x: int, y: int) -> float:
        if self.components[x] != self.components[y]:
            raise CocycleError(f"{x} and {y} lie in different components")
        return float(self.weights[y] / self.weights[x])


def vertex_cocycle(mu: WeightedMeasure, g: Graph) -> Cocycle:
    return Cocycle(mu.weights, component_labels(g))


def edge_cocycle(nu: WeightedMeasure, g: Graph) -> Cocycle:
    """Cocycle of an edge measure, with components of the line graph."""
    comp = component_labels(g)
    return Cocycle(nu.weights, [comp[u] for u, _ in g.edges])


def lift_to_edge_measure(mu: WeightedMeasure, g: Graph) -> WeightedMeasure:
    """Edge weight proportional to the sum of its endpoint weights, normalized."""
    if g.m == 0:
        raise CocycleError("graph has no edges")
    ends = np.array(g.edges, dtype=np.int64)
    raw = (mu.weights[ends[:, 0]] + mu.weights[ends[:, 1]]) / 2
    return WeightedMeasure(raw).normalized()


# ---------------------------------------------------------------------------
# power decomposition and the density Omega
# ---------------------------------------------------------------------------


@dataclass
class PowerDecomposition:
    """Matchings of the exact-distance-k graphs, split into two directed halves.

    ``partners[k][(i, j)]`` maps ``x`` to its partner under the ``j``-half of
    class ``i`` (``j = 0`` sends the lower endpoint to the higher one).
    ``nominal[k] = 2 * D**k`` is the class count the density normalizes by;
    classes with no members are kept implicitly.
    """

    delta: int
    partners: dict[int, dict[tuple[int, int], dict[int, int]]]
    nominal: dict[int, int]

    def triples(self, x: int) -> list[tuple[int, int, int, int]]:
        """All ``(k, i, j, y)`` with ``f^k_{i,j}(x) = y``, including ``(0, 0, 0, x)``."""
        out = [(0, 0, 0, x)]
        for k, classes in self.partners.items():
            for (i, j), f in classes.items():
                if x in f:
                    out.append((k, i, j, f[x]))
        return out


def power_decomposition(g: Graph) -> PowerDecomposition:
    delta = g.max_degree
    partners: dict[int, dict[tuple[int, int], dict[int, int]]] = {}
    nominal: dict[int, int] = {}
    layers: dict[int, list[tuple[int, int]]] = {}
    for x in g.vertices():
        for y, d in bfs_distances(g, x).items():
            if x < y:
                layers.setdefault(d, []).append((x, y))
    for k in sorted(layers):
        pairs = layers[k]
        nominal[k] = 2 * delta**k
        sub = _pairs_graph(g.n, pairs)
        palette = max(2 * sub.max_degree - 1, 1)
        colors = greedy_proper_edge_coloring(sub, palette)
        if max(colors) > nominal[k]:
            raise AssertionError(f"distance-{k} graph needs more than 2*D^{k} classes")
        classes: dict[tuple[int, int], dict[int, int]] = {}
        for (x, y), col in zip(sub.edges, colors):
            classes.setdefault((col, 0), {})[x] = y
            classes.setdefault((col, 1), {})[y] = x
        partners[k] = classes
    return PowerDecomposition(delta, partners, nominal)


def _pairs_graph(n: int, pairs: list[tuple[int, int]]) -> Graph:
    from .graph import build_graph

    return build_graph(pairs, vertices=range(n))


def omega(mu: WeightedMeasure, dec: PowerDecomposition) -> np.ndarray:
    """The density evaluated term by term over the decomposition."""
    n = len(mu)
    w = mu.weights
    out = np.ones(n)
    for k in sorted(dec.partners):
        coef = 1.0 / (2**k * dec.nominal[k])
        terms = [[] for _ in range(n)]
        for key in sorted(dec.partners[k]):
            for x, y in dec.partners[k][key].items():
                terms[x].append(w[y] / w[x])
        for x in range(n):
            if terms[x]:
                out[x] += coef * math.fsum(terms[x])
    return out


def layer_coefficients(delta: int, length: int) -> np.ndarray:
    """``coef[k] = 1 / (2**k * 2 * delta**k)`` for ``k >= 1``; ``coef[0] = 0``."""
    coef = np.zeros(length)
    d = max(delta, 1)
    for k in range(1, length):
        v = 0.5 * (0.5 / d) ** k
        if v == 0.0:
            break
        coef[k] = v
    return coef


def omega_layered(mu: WeightedMeasure, g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Same density through the distance-layer kernel; also returns eccentricities.

    Every same-component pair at distance ``k`` is covered by exactly one
    matching class, so the class structure drops out of the sum.
    """
    indptr, indices = g.csr()
    coef = layer_coefficients(g.max_degree, g.n + 1)
    acc, ecc = layered_mass(indptr, indices, mu.weights, coef)
    return 1.0 + acc / mu.weights, ecc


@dataclass
class BoundedMeasure:
    nu: WeightedMeasure
    rho: Cocycle
    omega: np.ndarray
    eccentricity: np.ndarray | None
    normalization: float
    """Total mass of ``Omega * mu`` before normalization."""
    worst_edge_ratio: float


def bounded_equivalent_measure(mu: WeightedMeasure, g: Graph, route: str = "layered") -> BoundedMeasure:
    """Reweight ``mu`` by ``Omega`` and normalize; asserts the edge ratio bound ``4 D``.

    The ``(4 D)**k`` bound at distance ``k`` follows by multiplying edge
    ratios along a geodesic.  ``route`` is ``"layered"`` (kernel) or
    ``"decomposition"`` (term by term).
    """
    if route == "layered":
        om, ecc = omega_layered(mu, g)
    elif route == "decomposition":
        om, ecc = omega(mu, power_decomposition(g)), None
    else:
        raise ValueError(f"unknown route {route!r}")
    if not np.all(om >= 1.0):
        raise AssertionError("density below 1")
    raw = om * mu.weights
    total = math.fsum(raw)
    nu = WeightedMeasure(raw / total, total, {"normalization": total})
    rho = vertex_cocycle(nu, g)
    worst = edge_ratio_extreme(nu, g)
    bound = 4 * max(g.max_degree, 1)
    if g.m and worst > bound * (1 + 1e-9):
        raise AssertionError(f"edge ratio {worst} exceeds 4*D = {bound}")
    return BoundedMeasure(nu, rho, om, ecc, total, worst)


def edge_ratio_extreme(nu: WeightedMeasure, g: Graph) -> float:
    """Largest ``rho(x, y)`` over ordered edge endpoints (so also bounds ``1/rho`` below)."""
    if g.m == 0:
        return 1.0
    ends = np.array(g.edges, dtype=np.int64)
    r = nu.weights[ends[:, 1]] / nu.weights[ends[:, 0]]
    return float(max(r.max(), (1.0 / r).max()))


# ---------------------------------------------------------------------------
# mass transport
# ---------------------------------------------------------------------------


def mass_transport_check(
    mu: WeightedMeasure, rho: Cocycle | Callable[[int, int], float], F: Mapping[tuple[int, int], float]
) -> tuple[float, float]:
    """``(sum_y mu(y) sum_x F(x, y),  sum_x mu(x) sum_y F(x, y) rho(x, y))``."""
    lhs = math.fsum(mu[y] * v for (x, y), v in F.items())
    rhs = math.fsum(mu[x] * v * rho(x, y) for (x, y), v in F.items())
    return lhs, rhs


# ---------------------------------------------------------------------------
# weights file: "vertex weight" per line
# ---------------------------------------------------------------------------


def parse_weights(text: str, g: Graph, source: str = "<string>") -> WeightedMeasure:
    """Read one weight per vertex label; the result is normalized, the divisor kept in ``scale``."""
    index = {str(lab): v for v, lab in enumerate(g.labels)}
    w = np.full(g.n, np.nan)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if len(toks) != 2:
            raise CocycleError(f"{source}:{lineno}: expected 'vertex weight', got {raw.strip()!r}")
        lab, val = toks
        if lab not in index:
            raise CocycleError(f"{source}:{lineno}: unknown vertex {lab!r}")
        try:
            x = float(val)
        except ValueError:
            raise CocycleError(f"{source}:{lineno}: weight {val!r} is not a number") from None
        if not (math.isfinite(x) and x > 0):
            raise CocycleError(f"{source}:{lineno}: weight must be positive and finite")
        if not math.isnan(w[index[lab]]):
            raise CocycleError(f"{source}:{lineno}: vertex {lab!r} given twice")
        w[index[lab]] = x
    missing = [str(g.labels[v]) for v in np.flatnonzero(np.isnan(w))]
    if missing:
        raise CocycleError(f"{source}: no weight for vertices {', '.join(missing[:5])}")
    return WeightedMeasure(w).normalized()


def format_weights(mu: WeightedMeasure, g: Graph) -> str:
    return "".join(f"{g.labels[v]} {float(mu.weights[v])!r}\n" for v in g.vertices())


def log_uniform_weights(n: int, low: float, high: float, seed: int) -> WeightedMeasure:
    """Weights ``low * (high/low)**u`` with ``u`` uniform from SplitMix64, not normalized."""
    from .rng import SplitMix64

    rng = SplitMix64(seed)
    a, b = math.log(low), math.log(high)
    return WeightedMeasure(np.array([math.exp(a + (b - a) * rng.unit()) for _ in range(n)]))
