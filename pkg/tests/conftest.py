import numpy as np
import pytest

from cicmsim import (
    AttackGraph,
    DependencyGraph,
    DepKind,
    ImpactAssessmentGraph,
    sample_iag,
)


@pytest.fixture
def sample():
    return sample_iag()


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def tiny_iag(rng: np.random.Generator, n_dg: int = 5, n_ag: int = 4) -> ImpactAssessmentGraph:
    """Small random coupled graph for oracle comparisons.

    The DG is acyclic by index order; services are two random nodes no
    one depends on; every vulnerability couples to one random component.
    """
    h_names = [f"c{i}" for i in range(n_dg)]
    edges = []
    parents = {h: 0 for h in h_names}
    for i in range(n_dg - 1):
        for j in range(i + 1, n_dg):
            if rng.random() < 0.45 and parents[h_names[j]] < 3:
                edges.append((h_names[i], h_names[j]))
                parents[h_names[j]] += 1
    kinds = (DepKind.REDUNDANCY, DepKind.DEGRADED, DepKind.STRICT)
    with_suppliers = {a for a, _ in edges}
    dep_fn = {h: kinds[int(rng.integers(3))] for h in with_suppliers}
    parentless = [h for h in h_names if parents[h] == 0]
    n_services = min(2, len(parentless))
    picks = rng.choice(len(parentless), size=n_services, replace=False)
    services = {parentless[int(p)] for p in picks}
    dg = DependencyGraph(
        nodes=frozenset(h_names),
        edges=tuple(edges),
        dep_fn=dep_fn,
        service_nodes=frozenset(services),
        utility={s: 5.0 for s in services},
    )

    v_names = [f"x{i}" for i in range(n_ag)]
    ag_edges = []
    for i in range(n_ag - 1):
        targets = [j for j in range(i + 1, n_ag) if rng.random() < 0.6]
        if not targets and i + 1 < n_ag:
            targets = [i + 1]
        ag_edges.extend((v_names[i], v_names[j]) for j in targets)
    entries = {v_names[0]}
    full_edges = [("A", v_names[0])] + ag_edges
    edge_prob = {e: float(rng.choice([0.35, 0.61, 0.71])) for e in full_edges}
    ag = AttackGraph(
        nodes=frozenset(v_names),
        edges=tuple(full_edges),
        entry_nodes=frozenset(entries),
        attacker_node="A",
        edge_prob=edge_prob,
    )

    eta_values = [0.5, 0.7, 1.0]
    eta = {}
    for i, v in enumerate(v_names):
        h = h_names[int(rng.integers(n_dg))]
        eta[(v, h)] = float(eta_values[int(rng.integers(3))])
    return ImpactAssessmentGraph(ag=ag, dg=dg, eta=eta)
