"""Command-line entry point: ``vizing-lab <command> [options]``.

Commands
  generate  write a RAND(n, D, seed) edge list and log-uniform weights
  color     full pipeline to a total proper (D+1)-coloring
  improve   one weight-L improvement run from a given or greedy start
  chains    enumerate 3-step chains at every uncolored edge
  cocycle   bounded-cocycle reweighting of the vertex weights
  audit     properness, mass transport, cocycle bound, double counting

Every command writing files takes ``--out DIR`` and records its
configuration and results in ``DIR/metadata.json``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .audit import log_base, run_audit
from .chains import format_record, iter_three_step_chains
from .cocycle import (
    CocycleError,
    WeightedMeasure,
    bounded_equivalent_measure,
    format_weights,
    log_uniform_weights,
    parse_weights,
)
from .coloring import PartialColoring, format_coloring, greedy_partial_coloring, parse_coloring, properness_audit
from .graph import Graph, GraphError, format_edge_list, random_graph, read_edge_list
from .improver import full_coloring, improve_to_weight
from .kernels import BACKEND


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    weights: str | None = None
    coloring: str | None = None
    seed: int = 0
    schedule: str = "desk"
    out: str | None = None
    L: float | None = None
    K: int | None = None
    budget: int | None = None
    n: int | None = None
    delta: int | None = None
    tolerance: float = 1e-9
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        needs_graph = self.command != "generate"
        if needs_graph and not self.graph:
            raise ConfigError("--graph is required")
        for name in ("graph", "weights", "coloring"):
            path = getattr(self, name)
            if path and not os.path.isfile(path):
                raise ConfigError(f"--{name}: no such file {path!r}")
        if self.schedule not in ("desk", "faithful"):
            raise ConfigError("--schedule must be 'desk' or 'faithful'")
        if self.L is not None and not self.L >= 1:
            raise ConfigError("--L must be at least 1")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("--budget must be positive")
        if self.command == "generate" and (not self.n or self.delta is None):
            raise ConfigError("generate needs --n and --delta")
        if self.command in ("improve",) and self.L is None:
            raise ConfigError("improve needs --L")


def _sha256(path: str | None) -> str | None:
    if not path:
        return None
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _write(out: str, name: str, text: str) -> None:
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _metadata(cfg: RunConfig, results: dict) -> str:
    doc = {
        "tool": "vizing-lab",
        "version": __version__,
        "config": asdict(cfg),
        "inputs": {"graph_sha256": _sha256(cfg.graph), "weights_sha256": _sha256(cfg.weights), "coloring_sha256": _sha256(cfg.coloring)},
        "results": {k: _finite(v) for k, v in results.items()},
    }
    doc["config"] = {k: _finite(v) for k, v in doc["config"].items()}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load(cfg: RunConfig) -> tuple[Graph, WeightedMeasure]:
    g = read_edge_list(cfg.graph)
    if cfg.weights:
        with open(cfg.weights, encoding="utf-8") as fh:
            mu = parse_weights(fh.read(), g, source=cfg.weights)
    else:
        mu = WeightedMeasure.uniform(g.n) if g.n else WeightedMeasure([])
    return g, mu


def _load_coloring(cfg: RunConfig, g: Graph) -> PartialColoring | None:
    if not cfg.coloring:
        return None
    with open(cfg.coloring, encoding="utf-8") as fh:
        return parse_coloring(fh.read(), g, source=cfg.coloring)


def _graph_stats(g: Graph) -> dict:
    return {"vertices": g.n, "edges": g.m, "max_degree": g.max_degree}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_generate(cfg: RunConfig) -> int:
    g = random_graph(cfg.n, cfg.delta, cfg.seed)
    mu = log_uniform_weights(g.n, 1e-6, 1.0, cfg.seed)
    if cfg.out:
        _write(cfg.out, "graph.txt", format_edge_list(g))
        _write(cfg.out, "weights.txt", format_weights(mu, g))
        _write(cfg.out, "metadata.json", _metadata(cfg, _graph_stats(g)))
    else:
        sys.stdout.write(format_edge_list(g))
    return 0


def cmd_color(cfg: RunConfig) -> int:
    g, mu = _load(cfg)
    start = _load_coloring(cfg, g)
    lines: list[str] = []
    c, rep = full_coloring(g, mu, schedule=cfg.schedule, start=start, trace=lines.append, keep_chains=True)
    clashes = properness_audit(c)
    total = not c.uncolored()
    ok = total and not clashes and c.num_colors_used() <= g.max_degree + 1
    results = {
        **_graph_stats(g),
        "weights_normalization": mu.scale,
        "edge_measure_normalization": rep.normalization,
        "worst_edge_ratio": rep.worst_edge_ratio,
        "initial_uncolored": rep.initial_uncolored,
        "rounds": rep.rounds,
        "stages": [{"L": _finite(s.L), "rounds": s.rounds, "recolored_mass": s.recolored_mass, "mass_budget": _finite(s.mass_budget)} for s in rep.stages],
        "colors_used": c.num_colors_used(),
        "uncolored": len(c.uncolored()),
        "clashes": len(clashes),
        "total_proper": ok,
        "kernel_backend": BACKEND,
    }
    if cfg.out:
        _write(cfg.out, "coloring.txt", format_coloring(c))
        _write(cfg.out, "rounds.txt", "".join(line + "\n" for line in lines))
        _write(cfg.out, "chains.txt", "".join(format_record(r) + "\n" for s in rep.stages for r in s.applied))
        _write(cfg.out, "metadata.json", _metadata(cfg, results))
    print(f"colors={c.num_colors_used()} uncolored={len(c.uncolored())} clashes={len(clashes)} rounds={rep.rounds}")
    return 0 if ok else 1


def _edge_nu(g: Graph, mu: WeightedMeasure):
    from .cocycle import lift_to_edge_measure
    from .graph import line_graph

    return bounded_equivalent_measure(lift_to_edge_measure(mu, g), line_graph(g).to_graph())


def cmd_improve(cfg: RunConfig) -> int:
    g, mu = _load(cfg)
    c = _load_coloring(cfg, g) or greedy_partial_coloring(g)
    if g.m == 0:
        print("graph has no edges")
        return 0
    bm = _edge_nu(g, mu)
    lines: list[str] = []
    c2, rep = improve_to_weight(c, bm.nu, cfg.L, trace=lines.append, keep_chains=True)
    grew = c.dom() <= c2.dom()
    within = rep.recolored_mass <= rep.mass_budget * (1 + cfg.tolerance)
    results = {
        **_graph_stats(g),
        "L": cfg.L,
        "rounds": rep.rounds,
        "initial_uncolored": rep.initial_uncolored,
        "final_uncolored": len(c2.uncolored()),
        "recolored_mass": rep.recolored_mass,
        "mass_budget": rep.mass_budget,
        "domain_monotone": grew,
        "within_budget": within,
    }
    if cfg.out:
        _write(cfg.out, "coloring.txt", format_coloring(c2))
        _write(cfg.out, "rounds.txt", "".join(line + "\n" for line in lines))
        _write(cfg.out, "chains.txt", "".join(format_record(r) + "\n" for r in rep.applied))
        _write(cfg.out, "metadata.json", _metadata(cfg, results))
    print(f"rounds={rep.rounds} uncolored={len(c2.uncolored())} recolored_mass={rep.recolored_mass:.6e} budget={rep.mass_budget:.6e}")
    return 0 if grew and within and not properness_audit(c2) else 1


def cmd_chains(cfg: RunConfig) -> int:
    g, _ = _load(cfg)
    c = _load_coloring(cfg, g) or greedy_partial_coloring(g)
    lines = []
    for e in sorted(c.uncolored()):
        for k, rec in enumerate(iter_three_step_chains(c, e)):
            if cfg.budget is not None and k >= cfg.budget:
                break
            lines.append(format_record(rec) + "\n")
    text = "".join(lines)
    if cfg.out:
        _write(cfg.out, "chains.txt", text)
        _write(cfg.out, "metadata.json", _metadata(cfg, {**_graph_stats(g), "records": len(lines), "uncolored": len(c.uncolored())}))
    else:
        sys.stdout.write(text)
    return 0


def cmd_cocycle(cfg: RunConfig) -> int:
    g, mu = _load(cfg)
    bm = bounded_equivalent_measure(mu, g)
    results = {
        **_graph_stats(g),
        "weights_normalization": mu.scale,
        "normalization": bm.normalization,
        "worst_edge_ratio": bm.worst_edge_ratio,
        "edge_ratio_bound": 4 * max(g.max_degree, 1),
        "kernel_backend": BACKEND,
    }
    if cfg.out:
        _write(cfg.out, "weights_bounded.txt", format_weights(bm.nu, g))
        _write(cfg.out, "omega.txt", "".join(f"{g.labels[v]} {float(bm.omega[v])!r}\n" for v in g.vertices()))
        _write(cfg.out, "metadata.json", _metadata(cfg, results))
    print(f"worst_edge_ratio={bm.worst_edge_ratio:.12g} bound={4 * max(g.max_degree, 1)}")
    return 0


def cmd_audit(cfg: RunConfig) -> int:
    g, mu = _load(cfg)
    c = _load_coloring(cfg, g)
    L = cfg.L if cfg.L is not None else 1000.0
    if c is None:
        c = greedy_partial_coloring(g)
        if g.m:
            c, _ = improve_to_weight(c, _edge_nu(g, mu).nu, L)
    log_L = None if g.m == 0 else log_base(L, g.max_degree)
    report = run_audit(g, c, mu, L, seed=cfg.seed, log_L=log_L, K=cfg.K)
    text = report.format()
    if cfg.out:
        _write(cfg.out, "audit.txt", text)
        _write(cfg.out, "metadata.json", _metadata(cfg, {**_graph_stats(g), "ok": report.ok, "checks": {ch.name: ch.status for ch in report.checks}}))
    sys.stdout.write(text)
    return 0 if report.ok else 1


COMMANDS = {
    "generate": cmd_generate,
    "color": cmd_color,
    "improve": cmd_improve,
    "chains": cmd_chains,
    "cocycle": cmd_cocycle,
    "audit": cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vizing-lab", description="3-step Vizing chains and bounded cocycles on finite graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--graph", help="edge-list file")
        sp.add_argument("--weights", help="vertex weights file ('vertex weight' per line)")
        sp.add_argument("--coloring", help="starting coloring file ('edgeid color' per line)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--schedule", default="desk", help="desk (L = 8, 16, 32, ...) or faithful")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--L", type=float, help="improvement weight")
        sp.add_argument("--K", type=int, help="override the badness parameter in audits")
        sp.add_argument("--budget", type=int, help="max chains listed per uncolored edge")
        sp.add_argument("--tolerance", type=float, default=1e-9)
        if name == "generate":
            sp.add_argument("--n", type=int)
            sp.add_argument("--delta", type=int)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        graph=args.graph,
        weights=args.weights,
        coloring=args.coloring,
        seed=args.seed,
        schedule=args.schedule,
        out=args.out,
        L=args.L,
        K=args.K,
        budget=args.budget,
        n=getattr(args, "n", None),
        delta=getattr(args, "delta", None),
        tolerance=args.tolerance,
    )
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, GraphError, CocycleError, ValueError, OSError) as exc:
        print(f"vizing-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
