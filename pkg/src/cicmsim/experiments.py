"""Monte-Carlo strategy comparisons, sensitivity sweeps and curve outputs.

The comparison design is paired: for every (graph, run index) the same
attack realization (same seeds, hence same goal and same attacker stream)
is replayed under each strategy, so per-graph differences isolate the
strategy effect.  Significance uses the Wilcoxon signed-rank test over
per-graph mean differences.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Sequence

from .defense import make_strategy
from .engine import SimulationConfig, SimulationTrace, run
from .graphs import DependencyGraph, ImpactAssessmentGraph
from .stats import WilcoxonResult, wilcoxon_signed_rank


def sig6(x: float) -> float:
    """Round to 6 significant digits (the serialization precision)."""
    return float(f"{x:.6g}")


def with_uniform_utility(iag: ImpactAssessmentGraph, level: float) -> ImpactAssessmentGraph:
    """Same graph with every service utility replaced by ``level``."""
    dg = iag.dg
    new_dg = DependencyGraph(
        nodes=dg.nodes,
        edges=dg.edges,
        dep_fn=dg.dep_fn,
        service_nodes=dg.service_nodes,
        utility={h: float(level) for h in dg.service_nodes},
    )
    return ImpactAssessmentGraph(ag=iag.ag, dg=new_dg, eta=iag.eta)


@dataclass(frozen=True)
class ExperimentConfig:
    graphs: tuple[tuple[str, ImpactAssessmentGraph], ...]
    strategies: tuple[str, ...]
    runs_per_graph: int = 50
    sim: SimulationConfig = field(default_factory=SimulationConfig)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.runs_per_graph < 1:
            raise ValueError("runs_per_graph must be at least 1")
        if len(self.strategies) < 2:
            raise ValueError("a comparison needs at least two strategies")
        if len(set(self.strategies)) != len(self.strategies):
            raise ValueError("duplicate strategy names")


@dataclass(frozen=True)
class PairComparison:
    """Paired statistics of strategy A against baseline B (diff = A - B)."""

    strategy_a: str
    strategy_b: str
    sp_diffs: tuple[float, ...]
    cost_diffs: tuple[float, ...]
    mean_sp_diff: float
    mean_cost_diff: float
    sp_pos: int
    sp_neg: int
    cost_pos: int
    cost_neg: int
    wilcoxon_sp: WilcoxonResult
    wilcoxon_cost: WilcoxonResult
    relative_cost_saving: float | None  # 1 - (grand mean cost A) / (grand mean cost B)
    mean_graph_saving: float | None     # mean over graphs of per-graph 1 - costA/costB

    def to_dict(self) -> dict:
        return {
            "strategy_a": self.strategy_a,
            "strategy_b": self.strategy_b,
            "mean_sp_diff": sig6(self.mean_sp_diff),
            "mean_cost_diff": sig6(self.mean_cost_diff),
            "sp_pos_neg": [self.sp_pos, self.sp_neg],
            "cost_pos_neg": [self.cost_pos, self.cost_neg],
            "wilcoxon_sp_p": sig6(self.wilcoxon_sp.p_value),
            "wilcoxon_cost_p": sig6(self.wilcoxon_cost.p_value),
            "relative_cost_saving": (
                None if self.relative_cost_saving is None else sig6(self.relative_cost_saving)
            ),
            "mean_graph_saving": (
                None if self.mean_graph_saving is None else sig6(self.mean_graph_saving)
            ),
        }


@dataclass
class ComparisonReport:
    graph_ids: tuple[str, ...]
    strategies: tuple[str, ...]
    runs_per_graph: int
    seed: int
    delay: int
    per_graph_mean_sp: dict[str, tuple[float, ...]]
    per_graph_mean_cost: dict[str, tuple[float, ...]]
    mean_sp: dict[str, float]
    mean_cost: dict[str, float]
    pairs: tuple[PairComparison, ...]
    curves: dict[str, tuple[float, ...]]

    def pair(self, strategy_a: str, strategy_b: str) -> PairComparison:
        for p in self.pairs:
            if (p.strategy_a, p.strategy_b) == (strategy_a, strategy_b):
                return p
        raise KeyError(f"no comparison for ({strategy_a}, {strategy_b})")

    def to_dict(self) -> dict:
        return {
            "graph_ids": list(self.graph_ids),
            "strategies": list(self.strategies),
            "runs_per_graph": self.runs_per_graph,
            "seed": self.seed,
            "delay": self.delay,
            "mean_sp": {s: sig6(v) for s, v in self.mean_sp.items()},
            "mean_cost": {s: sig6(v) for s, v in self.mean_cost.items()},
            "per_graph_mean_sp": {
                s: [sig6(v) for v in vs] for s, vs in self.per_graph_mean_sp.items()
            },
            "per_graph_mean_cost": {
                s: [sig6(v) for v in vs] for s, vs in self.per_graph_mean_cost.items()
            },
            "pairs": [p.to_dict() for p in self.pairs],
            "curves": {s: [sig6(v) for v in vs] for s, vs in self.curves.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_csv(self) -> str:
        lines = ["graph_id,strategy,mean_sp,mean_cost"]
        for s in self.strategies:
            for gid, sp, cost in zip(
                self.graph_ids, self.per_graph_mean_sp[s], self.per_graph_mean_cost[s]
            ):
                lines.append(f"{gid},{s},{sp:.6g},{cost:.6g}")
        return "\n".join(lines) + "\n"

    def curve_csv(self, strategy: str) -> str:
        lines = ["tick,mean_sp"]
        for tick, value in enumerate(self.curves[strategy]):
            lines.append(f"{tick},{value:.6g}")
        return "\n".join(lines) + "\n"


def _run_seed(master: int, graph_idx: int, run_idx: int) -> tuple[int, int, int]:
    return (master, graph_idx, run_idx)


def compare(config: ExperimentConfig) -> ComparisonReport:
    """Run the paired comparison described by ``config``."""
    graph_ids = tuple(gid for gid, _ in config.graphs)
    per_graph_sp: dict[str, list[float]] = {s: [] for s in config.strategies}
    per_graph_cost: dict[str, list[float]] = {s: [] for s in config.strategies}
    sp_sums: dict[str, list[float]] = {}
    tick_count = config.sim.t_horizon + 1
    total_runs = 0

    for s in config.strategies:
        sp_sums[s] = [0.0] * tick_count

    for graph_idx, (gid, iag) in enumerate(config.graphs):
        strategies = {s: make_strategy(s, iag, config.sim) for s in config.strategies}
        run_sp: dict[str, list[float]] = {s: [] for s in config.strategies}
        run_cost: dict[str, list[float]] = {s: [] for s in config.strategies}
        for run_idx in range(config.runs_per_graph):
            seed = _run_seed(config.seed, graph_idx, run_idx)
            for s in config.strategies:
                trace = run(iag, strategies[s], config.sim, seed)
                run_sp[s].append(trace.mean_sp)
                run_cost[s].append(trace.total_cost)
                for tick, value in enumerate(trace.sp_series):
                    sp_sums[s][tick] += value
        total_runs += config.runs_per_graph
        for s in config.strategies:
            per_graph_sp[s].append(sum(run_sp[s]) / len(run_sp[s]))
            per_graph_cost[s].append(sum(run_cost[s]) / len(run_cost[s]))

    mean_sp = {s: sum(vs) / len(vs) for s, vs in per_graph_sp.items()}
    mean_cost = {s: sum(vs) / len(vs) for s, vs in per_graph_cost.items()}
    curves = {
        s: tuple(total / (total_runs or 1) for total in sp_sums[s]) for s in config.strategies
    }

    pairs = []
    first = config.strategies[0]
    for other in config.strategies[1:]:
        sp_diffs = tuple(a - b for a, b in zip(per_graph_sp[first], per_graph_sp[other]))
        cost_diffs = tuple(a - b for a, b in zip(per_graph_cost[first], per_graph_cost[other]))
        saving = None
        if mean_cost[other] > 0:
            saving = 1.0 - mean_cost[first] / mean_cost[other]
        graph_savings = [
            1.0 - a / b
            for a, b in zip(per_graph_cost[first], per_graph_cost[other])
            if b > 0
        ]
        mean_graph_saving = (
            sum(graph_savings) / len(graph_savings) if graph_savings else None
        )
        pairs.append(
            PairComparison(
                strategy_a=first,
                strategy_b=other,
                sp_diffs=sp_diffs,
                cost_diffs=cost_diffs,
                mean_sp_diff=sum(sp_diffs) / len(sp_diffs),
                mean_cost_diff=sum(cost_diffs) / len(cost_diffs),
                sp_pos=sum(1 for d in sp_diffs if d > 0),
                sp_neg=sum(1 for d in sp_diffs if d < 0),
                cost_pos=sum(1 for d in cost_diffs if d > 0),
                cost_neg=sum(1 for d in cost_diffs if d < 0),
                wilcoxon_sp=wilcoxon_signed_rank(sp_diffs),
                wilcoxon_cost=wilcoxon_signed_rank(cost_diffs),
                relative_cost_saving=saving,
                mean_graph_saving=mean_graph_saving,
            )
        )

    return ComparisonReport(
        graph_ids=graph_ids,
        strategies=config.strategies,
        runs_per_graph=config.runs_per_graph,
        seed=config.seed,
        delay=config.sim.delay,
        per_graph_mean_sp={s: tuple(vs) for s, vs in per_graph_sp.items()},
        per_graph_mean_cost={s: tuple(vs) for s, vs in per_graph_cost.items()},
        mean_sp=mean_sp,
        mean_cost=mean_cost,
        pairs=tuple(pairs),
        curves=curves,
    )


SWEEP_AXES = ("delay", "utility", "cost_ratio")


@dataclass(frozen=True)
class SweepResult:
    axis: str
    values: tuple[float, ...]
    reports: tuple[ComparisonReport, ...]

    def to_csv(self) -> str:
        """Long-format table, one row per (axis value, strategy pair)."""
        lines = [
            "axis,value,strategy_a,strategy_b,mean_cost_a,mean_cost_b,"
            "mean_sp_diff,mean_cost_diff,relative_cost_saving,cost_neg_share,wilcoxon_cost_p"
        ]
        for value, report in zip(self.values, self.reports):
            for pair in report.pairs:
                n = len(pair.cost_diffs)
                saving = "" if pair.relative_cost_saving is None else f"{pair.relative_cost_saving:.6g}"
                lines.append(
                    f"{self.axis},{value:.6g},{pair.strategy_a},{pair.strategy_b},"
                    f"{report.mean_cost[pair.strategy_a]:.6g},"
                    f"{report.mean_cost[pair.strategy_b]:.6g},"
                    f"{pair.mean_sp_diff:.6g},{pair.mean_cost_diff:.6g},"
                    f"{saving},{pair.cost_neg / n:.6g},{pair.wilcoxon_cost.p_value:.6g}"
                )
        return "\n".join(lines) + "\n"


def sweep(config: ExperimentConfig, axis: str, values: Sequence[float]) -> SweepResult:
    """One comparison per axis value, everything else held at the config."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    if not values:
        raise ValueError("sweep needs at least one axis value")
    reports = []
    for value in values:
        if axis == "delay":
            cell = dataclasses.replace(config, sim=config.sim.with_overrides(delay=int(value)))
        elif axis == "utility":
            graphs = tuple(
                (gid, with_uniform_utility(iag, value)) for gid, iag in config.graphs
            )
            cell = dataclasses.replace(config, graphs=graphs)
        else:  # cost_ratio: scale recovery cost against the patch cost
            costs = dataclasses.replace(
                config.sim.costs, c_R=float(value) * config.sim.costs.c_P
            )
            cell = dataclasses.replace(config, sim=config.sim.with_overrides(costs=costs))
        reports.append(compare(cell))
    return SweepResult(axis=axis, values=tuple(float(v) for v in values), reports=tuple(reports))


def resilience_curve(traces: Sequence[SimulationTrace]) -> list[float]:
    """Arithmetic mean of the SP series across traces (same horizon required)."""
    if not traces:
        raise ValueError("resilience_curve needs at least one trace")
    lengths = {len(t.records) for t in traces}
    if len(lengths) != 1:
        raise ValueError("traces have mismatched horizons")
    n_ticks = lengths.pop()
    return [
        sum(t.records[tick].sp for t in traces) / len(traces) for tick in range(n_ticks)
    ]


_SVG_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd")


def curve_svg(curves: dict[str, Sequence[float]], title: str = "Service performance") -> str:
    """Self-contained SVG line chart of one or more SP-over-time curves."""
    if not curves:
        raise ValueError("no curves to plot")
    width, height = 640, 360
    left, right, top, bottom = 60, 20, 36, 40
    plot_w, plot_h = width - left - right, height - top - bottom
    n_ticks = max(len(series) for series in curves.values())

    def x(tick: int) -> float:
        return left + (plot_w * tick / max(1, n_ticks - 1))

    def y(value: float) -> float:
        return top + plot_h * (1.0 - value)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{title}</text>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yy = y(frac)
        parts.append(
            f'<line x1="{left}" y1="{yy:.1f}" x2="{left + plot_w}" y2="{yy:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{yy + 4:.1f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{frac:.2f}</text>'
        )
    parts.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">tick</text>'
    )
    for i, (name, series) in enumerate(sorted(curves.items())):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        points = " ".join(f"{x(t):.2f},{y(v):.2f}" for t, v in enumerate(series))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{points}"/>'
        )
        legend_y = top + 14 * i
        parts.append(
            f'<line x1="{left + plot_w - 110}" y1="{legend_y}" x2="{left + plot_w - 90}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{left + plot_w - 84}" y="{legend_y + 4}" font-family="sans-serif" '
            f'font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
