"""Hand-built sample graph used in tests, demos and docs.

A small shop-like network: two client-facing services (``h_S`` online
shopping, ``h_T`` order tracking) fed by intermediate components.  The
pinned facts this fixture must satisfy:

* ``v_A`` and ``v_C`` are the attack entry points;
* exploiting ``v_C`` opens ``v_D`` and ``v_F``;
* ``h_T`` strictly depends on ``h_C``, so exploiting ``v_C`` takes the
  tracking service down with it;
* exploiting ``v_D`` only affects ``h_D`` (no service change while
  ``h_C`` is already down);
* exploiting ``v_F`` costs ``h_F`` 70% of its availability
  (``eta = 0.7``) and takes down ``h_S``;
* ``h_G`` matters to the services only while ``h_F`` is up.

Everything not pinned by those constraints (the remaining edges, the
other eta values, the edge weights) is a plausible reconstruction chosen
so that ``v_F`` is the unique highest-impact exploit.
"""

from __future__ import annotations

from .graphs import AttackGraph, DependencyGraph, DepKind, ImpactAssessmentGraph

SERVICE_UTILITY = 5.0


def sample_iag(utility: float = SERVICE_UTILITY) -> ImpactAssessmentGraph:
    edge_prob = {
        ("A", "v_A"): 0.61,
        ("A", "v_C"): 0.71,
        ("v_A", "v_B"): 0.61,
        ("v_A", "v_E"): 0.71,
        ("v_B", "v_F"): 0.61,
        ("v_C", "v_D"): 0.61,
        ("v_C", "v_F"): 0.71,
        ("v_D", "v_F"): 0.71,
        ("v_D", "v_G"): 0.61,
        ("v_E", "v_G"): 0.61,
        ("v_F", "v_G"): 0.61,
    }
    ag = AttackGraph(
        nodes=frozenset({"v_A", "v_B", "v_C", "v_D", "v_E", "v_F", "v_G"}),
        edges=tuple(sorted(edge_prob)),
        entry_nodes=frozenset({"v_A", "v_C"}),
        attacker_node="A",
        edge_prob=edge_prob,
    )
    dg = DependencyGraph(
        nodes=frozenset({"h_A", "h_B", "h_C", "h_D", "h_E", "h_F", "h_G", "h_S", "h_T"}),
        edges=(
            ("h_S", "h_A"),
            ("h_S", "h_F"),
            ("h_T", "h_C"),
            ("h_T", "h_D"),
            ("h_T", "h_F"),
            ("h_A", "h_B"),
            ("h_F", "h_E"),
            ("h_F", "h_G"),
        ),
        dep_fn={
            "h_S": DepKind.STRICT,
            "h_T": DepKind.STRICT,
            "h_A": DepKind.STRICT,
            "h_F": DepKind.REDUNDANCY,
        },
        service_nodes=frozenset({"h_S", "h_T"}),
        utility={"h_S": utility, "h_T": utility},
    )
    eta = {
        ("v_A", "h_A"): 1.0,
        ("v_B", "h_B"): 1.0,
        ("v_C", "h_C"): 1.0,
        ("v_D", "h_D"): 1.0,
        ("v_E", "h_E"): 1.0,
        ("v_F", "h_F"): 0.7,
        ("v_G", "h_G"): 1.0,
    }
    return ImpactAssessmentGraph(ag=ag, dg=dg, eta=eta)
