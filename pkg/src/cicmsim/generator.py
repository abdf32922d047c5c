"""Random synthetic impact-graph generation for evaluation runs.

Both graph sides are DAGs over the same node count.  Dependency edges run
from lower to higher node index, so index order is a topological order by
construction; service nodes are drawn among components nobody depends on.
Attack edges are built the same way, an attacker start node is attached to
randomly drawn entry nodes, and every vulnerability is guaranteed
reachable from it.  Vulnerabilities map one-to-one onto components in a
random pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    AttackGraph,
    DependencyGraph,
    DepKind,
    ImpactAssessmentGraph,
    compute_statuses,
    validate,
)

# CVSS v2 access-complexity weights (high/medium/low difficulty)
ACCESS_COMPLEXITY_VALUES = (0.35, 0.61, 0.71)


class GenerationError(RuntimeError):
    """Raised when constraints cannot be met after bounded retries."""


@dataclass(frozen=True)
class GeneratorConfig:
    dg_size: int = 10
    max_parents: int = 3
    max_children_dg: int = 3
    max_children_ag: int = 3
    n_services: int = 2
    eta_choices: tuple[tuple[float, float], ...] = ((0.5, 1 / 3), (0.7, 1 / 3), (1.0, 1 / 3))
    utility_default: float = 5.0
    access_complexity_weights: tuple[tuple[float, float], ...] = tuple(
        (v, 1 / 3) for v in ACCESS_COMPLEXITY_VALUES
    )
    max_entry_nodes: int = 3
    ag_depth: int = 3  # attack children come from the next dg_size/ag_depth indexes
    seed: int = 0
    max_retries: int = 50

    def __post_init__(self) -> None:
        if self.dg_size < 3:
            raise ValueError("dg_size must be at least 3")
        if self.max_parents < 1 or self.n_services < 1:
            raise ValueError("max_parents and n_services must be at least 1")
        for name in ("eta_choices", "access_complexity_weights"):
            weights = [w for _, w in getattr(self, name)]
            if abs(sum(weights) - 1.0) > 1e-9:
                raise ValueError(f"{name} weights must sum to 1")


def _weighted_choice(rng: np.random.Generator, choices) -> float:
    values = [v for v, _ in choices]
    weights = [w for _, w in choices]
    return float(values[int(rng.choice(len(values), p=weights))])


def _build_dg(config: GeneratorConfig, rng: np.random.Generator) -> DependencyGraph:
    n = config.dg_size
    names = [f"h{i:03d}" for i in range(n)]
    parents = {name: 0 for name in names}
    edges: list[tuple[str, str]] = []
    for i in range(n - 1):
        pool = [j for j in range(i + 1, n) if parents[names[j]] < config.max_parents]
        if not pool:
            continue
        want = int(rng.integers(1, config.max_children_dg + 1))
        count = min(want, len(pool))
        chosen = rng.choice(len(pool), size=count, replace=False)
        for idx in sorted(int(c) for c in chosen):
            j = pool[idx]
            edges.append((names[i], names[j]))
            parents[names[j]] += 1
    parentless = [name for name in names if parents[name] == 0]
    if len(parentless) < config.n_services:
        raise GenerationError("not enough parentless components for the service nodes")
    picks = rng.choice(len(parentless), size=config.n_services, replace=False)
    services = sorted(parentless[int(p)] for p in picks)
    dep_fn = {}
    kinds = (DepKind.REDUNDANCY, DepKind.DEGRADED, DepKind.STRICT)
    has_suppliers = {a for a, _ in edges}
    for name in names:
        if name in has_suppliers:
            dep_fn[name] = kinds[int(rng.integers(3))]
    return DependencyGraph(
        nodes=frozenset(names),
        edges=tuple(edges),
        dep_fn=dep_fn,
        service_nodes=frozenset(services),
        utility={s: config.utility_default for s in services},
    )


def _build_ag(config: GeneratorConfig, rng: np.random.Generator) -> AttackGraph:
    n = config.dg_size
    names = [f"v{i:03d}" for i in range(n)]
    edges: list[tuple[str, str]] = []
    # children come from a local index window, so exploit chains have real
    # depth instead of every node being two hops from the entries
    window = max(config.max_children_ag + 1, n // config.ag_depth)
    for i in range(n - 1):
        pool = list(range(i + 1, min(i + 1 + window, n)))
        want = int(rng.integers(1, config.max_children_ag + 1))
        count = min(want, len(pool))
        chosen = rng.choice(len(pool), size=count, replace=False)
        for idx in sorted(int(c) for c in chosen):
            edges.append((names[i], names[pool[idx]]))

    attacker = "A"
    n_entries = int(rng.integers(1, config.max_entry_nodes + 1))
    # entries sit at the edge of the graph (low index): the rest of the
    # graph stays reachable through them and attack paths keep real depth
    pool_size = max(config.max_entry_nodes, n // 5)
    picks = rng.choice(pool_size, size=min(n_entries, pool_size), replace=False)
    entries = {names[int(p)] for p in picks}

    # splice in repair edges until every vulnerability is attacker-reachable
    succ: dict[str, list[str]] = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)

    def reachable() -> set[str]:
        seen = set(entries)
        stack = list(entries)
        while stack:
            node = stack.pop()
            for nxt in succ.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    seen = reachable()
    for i, name in enumerate(names):
        if name in seen:
            continue
        lower = [names[j] for j in range(i) if names[j] in seen]
        if lower:
            src = lower[int(rng.integers(len(lower)))]
            edges.append((src, name))
            succ.setdefault(src, []).append(name)
        else:
            entries.add(name)
        seen = reachable()

    full_edges = [(attacker, e) for e in sorted(entries)] + edges
    edge_prob = {
        edge: _weighted_choice(rng, config.access_complexity_weights) for edge in full_edges
    }
    return AttackGraph(
        nodes=frozenset(names),
        edges=tuple(full_edges),
        entry_nodes=frozenset(entries),
        attacker_node=attacker,
        edge_prob=edge_prob,
    )


def _exploit_dents_service(iag: ImpactAssessmentGraph, vuln: str, service: str) -> bool:
    sv = compute_statuses(iag, frozenset({vuln}))
    return sv[service] < 1.0


def generate(config: GeneratorConfig) -> ImpactAssessmentGraph:
    """Generate one impact graph; deterministic for a given seed."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    last_problem = "unknown"
    for _ in range(config.max_retries):
        try:
            dg = _build_dg(config, rng)
        except GenerationError as exc:
            last_problem = str(exc)
            continue
        ag = _build_ag(config, rng)
        v_names = sorted(ag.nodes)
        h_names = sorted(dg.nodes)
        perm = rng.permutation(len(h_names))
        eta = {
            (v_names[i], h_names[int(perm[i])]): _weighted_choice(rng, config.eta_choices)
            for i in range(len(v_names))
        }
        iag = ImpactAssessmentGraph(ag=ag, dg=dg, eta=eta)
        problems = validate(iag)
        if problems:
            last_problem = "; ".join(problems)
            continue
        if not all(
            any(_exploit_dents_service(iag, v, h) for v in v_names)
            for h in dg.service_nodes
        ):
            last_problem = "a service node cannot be affected by any single exploit"
            continue
        return iag
    raise GenerationError(f"could not generate a valid graph: {last_problem}")
