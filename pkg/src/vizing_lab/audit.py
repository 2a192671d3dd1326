"""Double-counting checks on the auxiliary multigraph and the mass bounds.

Every check produces a ``CheckResult`` with status ``pass``, ``fail``,
``info`` or ``skipped``.  Inequalities whose hypotheses are out of reach at
the tested scale are computed and reported as ``info`` instead of being
asserted.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .chains import PreconditionError, VizingChainRecord, is_k_bad, pair_family
from .cocycle import (
    Cocycle,
    WeightedMeasure,
    bounded_equivalent_measure,
    edge_cocycle,
    lift_to_edge_measure,
    mass_transport_check,
    vertex_cocycle,
)
from .coloring import PartialColoring, properness_audit
from .graph import Graph, bfs_distances, line_graph
from .improver import find_light_chain


def degree_bound(delta: int) -> int:
    """``32 (D!)^14``."""
    return 32 * math.factorial(delta) ** 14


@dataclass
class AuxMultigraph:
    """Arcs ``(e, f)`` from uncolored ``e`` to colored ``f`` with multiplicity ``F(e, f)``."""

    left: frozenset[int]
    right: frozenset[int]
    mult: dict[tuple[int, int], int]

    def degree(self, f: int) -> int:
        return sum(m for (_, h), m in self.mult.items() if h == f)

    def degrees(self) -> Counter:
        out: Counter = Counter()
        for (_, f), m in self.mult.items():
            out[f] += m
        return out

    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)


def build_aux_multigraph(c: PartialColoring, records: Iterable[VizingChainRecord], check_degree: bool = True) -> AuxMultigraph:
    """Count, for each record at ``e``, every colored ``f`` on its third path."""
    mult: dict[tuple[int, int], int] = defaultdict(int)
    for rec in records:
        for f in rec.blocks[5]:
            mult[(rec.e, f)] += 1
    H = AuxMultigraph(frozenset(c.uncolored()), frozenset(c.dom()), dict(mult))
    if check_degree:
        bound = degree_bound(c.graph.max_degree)
        worst = H.max_degree()
        if worst > bound:
            raise AssertionError(f"aux multigraph degree {worst} exceeds 32(D!)^14 = {bound}")
    return H


def double_count_check(H: AuxMultigraph, nu: WeightedMeasure, rho: Cocycle) -> tuple[float, float]:
    """``(sum_e nu(e) sum_f F(e,f) rho(e,f),  sum_f nu(f) sum_e F(e,f))``."""
    lhs = math.fsum(nu[e] * m * rho(e, f) for (e, f), m in H.mult.items())
    rhs = math.fsum(nu[f] * m for (e, f), m in H.mult.items())
    return lhs, rhs


def rel_err(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def log_base(L: float, delta: int) -> float:
    """``log_{8D} L`` as ``ln L / ln 8D``."""
    return math.log(L) / math.log(8 * max(delta, 1))


def hypothesis_met(log_L: float, delta: int) -> bool:
    """Is ``log_{8D} L >= (8D)^20``?"""
    return log_L >= float(8 * max(delta, 1)) ** 20


def mass_bound_value(L: float, delta: int, log_L: float) -> float:
    """``64 (4D)^7 (D!)^14 / (log_{8D}(L)^2 L)`` evaluated in log space."""
    if log_L <= 0:
        return math.inf
    d = max(delta, 1)
    ln_num = math.log(64) + 7 * math.log(4 * d) + 14 * math.lgamma(d + 1)
    ln_L = math.log(L) if math.isfinite(L) else log_L * math.log(8 * d)
    return math.exp(ln_num - 2 * math.log(log_L) - ln_L)


def uncolored_mass_bound(c: PartialColoring, nu: WeightedMeasure, L: float, delta: int, log_L: float | None = None) -> tuple[float, float, bool]:
    """``(nu(U_c), 64 (4D)^7 (D!)^14 / (log_{8D}(L)^2 L), hypothesis met)``.

    Asserts the inequality when the hypothesis holds.  ``log_L`` may be
    given when ``L`` itself is too large for a double.
    """
    observed = nu.mass(sorted(c.uncolored()))
    lg = log_base(L, delta) if log_L is None else log_L
    bound = mass_bound_value(L, delta, lg)
    met = hypothesis_met(lg, delta)
    if met and observed > bound:
        raise AssertionError(f"uncolored mass {observed} exceeds bound {bound}")
    return observed, bound, met


@dataclass
class KBadReport:
    K: int
    hypothesis_met: bool
    precondition_met: bool
    uncolored: int
    k_bad: int
    pairs: int
    p3_checked: int
    p3_below: int
    violations: list[str] = field(default_factory=list)


def k_bad_threshold_check(c: PartialColoring, nu: WeightedMeasure, L: float, log_L: float | None = None, K: int | None = None) -> KBadReport:
    """Check K-badness of every uncolored edge for ``K = floor(log_{8D}(L) / 4)``.

    For edges that are K-bad, every pair in the pair family must have a
    third path of weight at least ``L/2``.  Violations only count as
    failures when both the magnitude hypothesis and the no-improvement
    precondition hold.
    """
    g = c.graph
    delta = g.max_degree
    lg = log_base(L, delta) if log_L is None else log_L
    if K is None:
        K = max(int(math.floor(lg / 4)), 0) if math.isfinite(lg) else 0
    U = sorted(c.uncolored())
    pre = all(find_light_chain(c, e, nu.weights, L) is None for e in U) if math.isfinite(L) else not U
    rep = KBadReport(K, hypothesis_met(lg, delta), pre, len(U), 0, 0, 0, 0)
    for e in U:
        if not is_k_bad(c, e, K):
            rep.violations.append(f"edge {e} is not {K}-bad")
            continue
        rep.k_bad += 1
        fam = pair_family(c, e, K)
        rep.pairs += len(fam.pairs)
        for rec in fam.records.values():
            w = math.fsum(nu[f] / nu[e] for f in rec.blocks[5])
            rep.p3_checked += 1
            if w < L / 2:
                rep.p3_below += 1
                rep.violations.append(f"edge {e}: third path weight {w:.6g} < L/2")
    return rep


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str
    fields: dict

    def line(self) -> str:
        parts = [f"check={self.name}", f"status={self.status}"]
        for k, v in self.fields.items():
            if isinstance(v, bool):
                v = int(v)
            elif isinstance(v, float):
                v = f"{v:.12g}"
            parts.append(f"{k}={v}")
        return " ".join(parts)


@dataclass
class AuditReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(ch.status != "fail" for ch in self.checks)

    def format(self) -> str:
        return "".join(ch.line() + "\n" for ch in self.checks)

    def get(self, name: str) -> CheckResult:
        for ch in self.checks:
            if ch.name == name:
                return ch
        raise KeyError(name)


def parse_report(text: str) -> list[dict]:
    out = []
    for line in text.splitlines():
        if line.strip():
            out.append(dict(tok.split("=", 1) for tok in line.split()))
    return out


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def random_transport_function(g: Graph, rng: random.Random, size: int = 20) -> dict[tuple[int, int], float]:
    """Nonnegative values on a few random same-component ordered pairs."""
    F: dict[tuple[int, int], float] = {}
    if g.n == 0:
        return F
    for _ in range(size):
        x = rng.randrange(g.n)
        reach = list(bfs_distances(g, x))
        y = reach[rng.randrange(len(reach))]
        F[(x, y)] = F.get((x, y), 0.0) + rng.random()
    return F


def run_audit(
    g: Graph,
    c: PartialColoring,
    mu: WeightedMeasure,
    L: float,
    seed: int = 0,
    log_L: float | None = None,
    K: int | None = None,
    transport_trials: int = 100,
) -> AuditReport:
    """All checks for a coloring of ``g`` under vertex weights ``mu``."""
    delta = g.max_degree
    checks: list[CheckResult] = []
    clashes = properness_audit(c)
    checks.append(CheckResult("properness", _status(not clashes), {"clashes": len(clashes), "colors_used": c.num_colors_used(), "palette": c.palette}))

    rng = random.Random(seed)
    rho_mu = vertex_cocycle(mu, g)
    worst = 0.0
    for _ in range(transport_trials):
        lhs, rhs = mass_transport_check(mu, rho_mu, random_transport_function(g, rng))
        worst = max(worst, rel_err(lhs, rhs))
    checks.append(CheckResult("mass_transport", _status(worst <= 1e-9), {"trials": transport_trials, "max_rel_err": worst, "tol": 1e-9}))

    bm = bounded_equivalent_measure(mu, g)
    bound = 4 * max(delta, 1)
    checks.append(
        CheckResult(
            "cocycle_edge_bound",
            _status(bm.worst_edge_ratio <= bound * (1 + 1e-9)),
            {"observed_max": bm.worst_edge_ratio, "bound": float(bound), "normalization": bm.normalization},
        )
    )

    if g.m == 0:
        return AuditReport(checks)
    if clashes:
        # chain constructions presuppose a proper coloring
        checks.append(CheckResult("chains", "skipped", {"reason": "coloring_not_proper"}))
        return AuditReport(checks)

    nu_hat = lift_to_edge_measure(mu, g)
    lg_view = line_graph(g).to_graph()
    nu = bounded_equivalent_measure(nu_hat, lg_view).nu
    rho_nu = edge_cocycle(nu, g)
    lgL = log_base(L, delta) if log_L is None else log_L

    kb = k_bad_threshold_check(c, nu, L, lgL, K)
    gate = kb.hypothesis_met and kb.precondition_met
    checks.append(
        CheckResult(
            "k_bad",
            ("pass" if not kb.violations else "fail") if gate else "info",
            {
                "K": kb.K,
                "hypothesis_met": kb.hypothesis_met,
                "precondition_met": kb.precondition_met,
                "uncolored": kb.uncolored,
                "k_bad": kb.k_bad,
                "pairs": kb.pairs,
                "p3_checked": kb.p3_checked,
                "p3_below_half_L": kb.p3_below,
            },
        )
    )

    records = []
    for e in sorted(c.uncolored()):
        if is_k_bad(c, e, kb.K):
            try:
                records.extend(pair_family(c, e, kb.K).records.values())
            except PreconditionError:
                pass
    H = build_aux_multigraph(c, records, check_degree=False)
    dmax = H.max_degree()
    dbound = degree_bound(delta)
    checks.append(CheckResult("aux_degree", _status(dmax <= dbound), {"observed_max": dmax, "bound": dbound, "arcs": len(H.mult)}))
    lhs, rhs = double_count_check(H, nu, rho_nu)
    err = rel_err(lhs, rhs)
    checks.append(CheckResult("double_count", _status(err <= 1e-9), {"lhs": lhs, "rhs": rhs, "rel_err": err, "tol": 1e-9}))

    observed = nu.mass(sorted(c.uncolored()))
    mbound = mass_bound_value(L, delta, lgL)
    met = hypothesis_met(lgL, delta)
    checks.append(
        CheckResult(
            "uncolored_mass",
            _status(observed <= mbound) if met else "info",
            {"observed": observed, "bound": mbound, "hypothesis_met": met, "log_L": lgL},
        )
    )
    return AuditReport(checks)
