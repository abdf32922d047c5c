"""Command-line front end: generate graphs, run, compare, sweep, validate.

Exit codes: 0 success, 1 usage error, 2 data error (malformed files,
failed generation, invalid graphs).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .costs import ActionCostConfig
from .defense import STRATEGY_NAMES, make_strategy
from .engine import SimulationConfig, run as run_simulation
from .experiments import (
    ExperimentConfig,
    SWEEP_AXES,
    compare,
    curve_svg,
    sig6,
    sweep,
)
from .generator import GenerationError, GeneratorConfig, generate
from .graph_io import GraphFormatError, dump_iag, load_iag
from .graphs import validate as validate_iag

USAGE_ERROR = 1
DATA_ERROR = 2


class CliError(Exception):
    """Data-level failure; message is printed and the process exits 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1 on usage problems
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


_CONFIG_SECTIONS = {"simulation", "costs", "generator", "experiment"}
_SIMULATION_KEYS = {"p_step", "p_fast_step", "delay", "t_horizon", "lookahead"}
_COST_KEYS = {"c_P", "c_R", "c_D", "t_P", "t_R", "t_D", "t_v"}
_GENERATOR_KEYS = {
    "dg_size",
    "max_parents",
    "max_children_dg",
    "max_children_ag",
    "n_services",
    "utility_default",
    "max_entry_nodes",
    "seed",
}
_EXPERIMENT_KEYS = {"runs_per_graph", "count", "seed", "strategies"}


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CliError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})")
    if not isinstance(doc, dict):
        raise CliError(f"{path}: config must be a JSON object")
    unknown = set(doc) - _CONFIG_SECTIONS
    if unknown:
        raise CliError(f"{path}: unknown config sections {sorted(unknown)}")
    for section, allowed in (
        ("simulation", _SIMULATION_KEYS),
        ("costs", _COST_KEYS),
        ("generator", _GENERATOR_KEYS),
        ("experiment", _EXPERIMENT_KEYS),
    ):
        extra = set(doc.get(section, {})) - allowed
        if extra:
            raise CliError(f"{path}: unknown keys in {section!r}: {sorted(extra)}")
    return doc


def _sim_config(doc: dict, args: argparse.Namespace) -> SimulationConfig:
    costs = ActionCostConfig(**doc.get("costs", {}))
    sim = SimulationConfig(costs=costs, **doc.get("simulation", {}))
    if getattr(args, "delay", None) is not None:
        sim = sim.with_overrides(delay=args.delay)
    if getattr(args, "horizon", None) is not None:
        sim = sim.with_overrides(t_horizon=args.horizon)
    return sim


def _generator_config(doc: dict, args: argparse.Namespace, seed_offset: int = 0) -> GeneratorConfig:
    settings = dict(doc.get("generator", {}))
    if getattr(args, "dg_size", None) is not None:
        settings["dg_size"] = args.dg_size
    if getattr(args, "seed", None) is not None:
        settings["seed"] = args.seed
    settings["seed"] = settings.get("seed", 0) + seed_offset
    try:
        return GeneratorConfig(**settings)
    except ValueError as exc:
        raise CliError(f"invalid generator settings: {exc}")


def _load_graph(path: str):
    try:
        return load_iag(path)
    except FileNotFoundError:
        raise CliError(f"graph file not found: {path}")
    except GraphFormatError as exc:
        raise CliError(str(exc))


def _collect_graphs(args: argparse.Namespace, doc: dict) -> tuple[tuple[str, object], ...]:
    if getattr(args, "graph_dir", None):
        directory = Path(args.graph_dir)
        files = sorted(directory.glob("*.json"))
        if not files:
            raise CliError(f"no .json graph files in {directory}")
        return tuple((f.stem, _load_graph(str(f))) for f in files)
    count = args.generate or doc.get("experiment", {}).get("count")
    if not count:
        raise CliError("provide --graph-dir or --generate N")
    graphs = []
    for i in range(count):
        config = _generator_config(doc, args, seed_offset=i)
        try:
            graphs.append((f"gen{i:03d}", generate(config)))
        except GenerationError as exc:
            raise CliError(str(exc))
    return tuple(graphs)


def _cmd_gen(args: argparse.Namespace) -> int:
    doc = _load_config_file(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        config = _generator_config(doc, args, seed_offset=i)
        try:
            iag = generate(config)
        except GenerationError as exc:
            raise CliError(str(exc))
        path = out_dir / f"graph_{i:03d}.json"
        dump_iag(iag, path)
        print(path)
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    doc = _load_config_file(args.config)
    sim = _sim_config(doc, args)
    iag = _load_graph(args.graph)
    problems = validate_iag(iag)
    if problems:
        raise CliError("invalid graph:\n  " + "\n  ".join(problems))
    strategy = make_strategy(args.strategy, iag, sim)
    trace = run_simulation(iag, strategy, sim, args.seed if args.seed is not None else 0)
    summary = trace.summary()
    summary = {k: (sig6(v) if isinstance(v, float) else v) for k, v in summary.items()}
    print(json.dumps(summary, sort_keys=True))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "trace.jsonl").write_text(trace.to_jsonl())
        (out_dir / "attack_events.json").write_text(
            json.dumps(trace.attack_events(), indent=2) + "\n"
        )
        if trace.benefit_log:
            (out_dir / "benefit_log.json").write_text(
                json.dumps(trace.benefit_log, indent=2, sort_keys=True) + "\n"
            )
    return 0


def _parse_strategies(raw: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in raw.split(",") if s.strip())
    for name in names:
        if name not in STRATEGY_NAMES:
            raise CliError(f"unknown strategy {name!r}; expected one of {STRATEGY_NAMES}")
    return names


def _experiment_config(args: argparse.Namespace, doc: dict) -> ExperimentConfig:
    sim = _sim_config(doc, args)
    exp_doc = doc.get("experiment", {})
    strategies = _parse_strategies(args.strategies or ",".join(exp_doc.get("strategies", ())))
    runs = args.runs if args.runs is not None else exp_doc.get("runs_per_graph", 50)
    if args.full_scale:
        runs = 100
    seed = args.seed if args.seed is not None else exp_doc.get("seed", 0)
    graphs = _collect_graphs(args, doc)
    try:
        return ExperimentConfig(
            graphs=graphs,
            strategies=strategies,
            runs_per_graph=runs,
            sim=sim,
            seed=seed,
        )
    except ValueError as exc:
        raise CliError(str(exc))


def _write_report(report, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(report.to_json())
    (out_dir / "summary.csv").write_text(report.summary_csv())
    for strategy in report.strategies:
        (out_dir / f"curve_{strategy}.csv").write_text(report.curve_csv(strategy))
    (out_dir / "curve.svg").write_text(curve_svg(report.curves))


def _cmd_compare(args: argparse.Namespace) -> int:
    doc = _load_config_file(args.config)
    config = _experiment_config(args, doc)
    report = compare(config)
    if args.out_dir:
        _write_report(report, Path(args.out_dir))
    for pair in report.pairs:
        info = pair.to_dict()
        print(json.dumps(info, sort_keys=True))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    doc = _load_config_file(args.config)
    config = _experiment_config(args, doc)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise CliError(f"bad sweep values: {args.values!r}")
    if args.axis not in SWEEP_AXES:
        raise CliError(f"unknown axis {args.axis!r}; expected one of {SWEEP_AXES}")
    result = sweep(config, args.axis, values)
    csv_text = result.to_csv()
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.csv").write_text(csv_text)
    print(csv_text, end="")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    iag = _load_graph(args.graph)
    problems = validate_iag(iag)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return DATA_ERROR
    print(f"{args.graph}: ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cicmsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate random graphs as JSON files")
    p_gen.add_argument("--out-dir", required=True)
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--dg-size", type=int)
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--config")
    p_gen.set_defaults(func=_cmd_gen)

    p_run = sub.add_parser("run", help="run one simulation and print a summary")
    p_run.add_argument("--graph", required=True)
    p_run.add_argument("--strategy", default="cicm", choices=STRATEGY_NAMES)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--delay", type=int)
    p_run.add_argument("--horizon", type=int)
    p_run.add_argument("--config")
    p_run.add_argument("--out-dir")
    p_run.set_defaults(func=_cmd_run)

    common = dict(run=None)
    p_cmp = sub.add_parser("compare", help="paired Monte-Carlo strategy comparison")
    p_swp = sub.add_parser("sweep", help="sensitivity sweep over one parameter axis")
    for p in (p_cmp, p_swp):
        p.add_argument("--graph-dir")
        p.add_argument("--generate", type=int, help="generate this many graphs instead")
        p.add_argument("--dg-size", type=int)
        p.add_argument("--strategies", help="comma-separated, e.g. cicm,ple")
        p.add_argument("--runs", type=int)
        p.add_argument("--delay", type=int)
        p.add_argument("--horizon", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--config")
        p.add_argument("--out-dir")
        p.add_argument("--full-scale", action="store_true", help="100 runs per graph")
    p_cmp.set_defaults(func=_cmd_compare)
    p_swp.add_argument("--axis", required=True)
    p_swp.add_argument("--values", required=True)
    p_swp.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="check a graph file against all invariants")
    p_val.add_argument("graph")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"cicmsim: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"cicmsim: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
