"""Attack graph, dependency graph and coupled impact-graph data model.

The core object is :class:`ImpactAssessmentGraph`: a directed graph of
vulnerability exploits (the attack side), a directed acyclic graph of
system components (the dependency side), and a sparse ``eta`` coupling
that states how much availability a component loses when a vulnerability
is exploited.  ``compute_statuses`` propagates exploit and outage effects
through the dependency structure and is the single source of truth for
component availability everywhere else in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class DependencyCycleError(ValueError):
    """Raised when the dependency graph is not acyclic."""


class DepKind(str, enum.Enum):
    """How a component's availability combines its suppliers' availability."""

    REDUNDANCY = "redundancy"  # logical OR: up iff at least one supplier fully up
    DEGRADED = "degraded"      # arithmetic mean of supplier availabilities
    STRICT = "strict"          # logical AND: up iff all suppliers fully up


def eval_dep_fn(kind: DepKind, inputs: Iterable[float]) -> float:
    """Evaluate a dependency function over supplier availabilities.

    Terminal components (no suppliers) evaluate to the constant 1.
    """
    values = list(inputs)
    if not values:
        return 1.0
    if kind is DepKind.REDUNDANCY:
        return 1.0 if any(a == 1.0 for a in values) else 0.0
    if kind is DepKind.DEGRADED:
        return sum(values) / len(values)
    if kind is DepKind.STRICT:
        return 1.0 if all(a == 1.0 for a in values) else 0.0
    raise ValueError(f"unknown dependency kind: {kind!r}")


@dataclass(frozen=True)
class AttackGraph:
    """Directed graph of vulnerability exploits.

    Edges are prepare-for relations: ``(v1, v2)`` means exploiting ``v1``
    makes ``v2`` exploitable.  ``attacker_node`` is a distinguished source
    vertex outside ``nodes`` whose out-edges point at exactly the entry
    nodes.  ``edge_prob`` weights every edge (including the attacker's)
    with an exploitability value in (0, 1].
    """

    nodes: frozenset[str]
    edges: tuple[tuple[str, str], ...]
    entry_nodes: frozenset[str]
    attacker_node: str
    edge_prob: Mapping[tuple[str, str], float]

    @cached_property
    def _succ(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for a, b in self.edges:
            out.setdefault(a, []).append(b)
        return {a: tuple(sorted(bs)) for a, bs in out.items()}

    @cached_property
    def _pred(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {}
        for a, b in self.edges:
            inc.setdefault(b, []).append(a)
        return {b: tuple(sorted(a_)) for b, a_ in inc.items()}

    def successors(self, node: str) -> tuple[str, ...]:
        return self._succ.get(node, ())

    def predecessors(self, node: str) -> tuple[str, ...]:
        return self._pred.get(node, ())


@dataclass(frozen=True)
class DependencyGraph:
    """Directed acyclic graph of components.

    An edge ``(h1, h2)`` means ``h1`` depends on ``h2`` (``h2`` is a
    supplier of ``h1``).  ``service_nodes`` are client-facing components;
    only they carry intrinsic per-tick utility.
    """

    nodes: frozenset[str]
    edges: tuple[tuple[str, str], ...]
    dep_fn: Mapping[str, DepKind]
    service_nodes: frozenset[str]
    utility: Mapping[str, float]

    @cached_property
    def _suppliers(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for a, b in self.edges:
            out.setdefault(a, []).append(b)
        return {a: tuple(sorted(bs)) for a, bs in out.items()}

    @cached_property
    def _dependents(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {}
        for a, b in self.edges:
            inc.setdefault(b, []).append(a)
        return {b: tuple(sorted(a_)) for b, a_ in inc.items()}

    def suppliers(self, node: str) -> tuple[str, ...]:
        return self._suppliers.get(node, ())

    def dependents(self, node: str) -> tuple[str, ...]:
        return self._dependents.get(node, ())

    @cached_property
    def evaluation_order(self) -> tuple[str, ...]:
        """Suppliers-first order; ties broken by node identifier.

        Raises :class:`DependencyCycleError` if the graph has a cycle.
        """
        import heapq

        remaining_out = {n: len(self.suppliers(n)) for n in self.nodes}
        ready = [n for n, deg in remaining_out.items() if deg == 0]
        heapq.heapify(ready)
        order: list[str] = []
        while ready:
            node = heapq.heappop(ready)
            order.append(node)
            for dep in self.dependents(node):
                remaining_out[dep] -= 1
                if remaining_out[dep] == 0:
                    heapq.heappush(ready, dep)
        if len(order) != len(self.nodes):
            stuck = sorted(n for n, deg in remaining_out.items() if deg > 0)
            raise DependencyCycleError(f"dependency cycle involving: {stuck}")
        return tuple(order)


@dataclass(frozen=True)
class ImpactAssessmentGraph:
    """Attack graph + dependency graph + eta coupling."""

    ag: AttackGraph
    dg: DependencyGraph
    eta: Mapping[tuple[str, str], float]

    @cached_property
    def _eta_by_component(self) -> dict[str, tuple[tuple[str, float], ...]]:
        by_comp: dict[str, list[tuple[str, float]]] = {}
        for (v, h), value in self.eta.items():
            by_comp.setdefault(h, []).append((v, value))
        return {h: tuple(sorted(pairs)) for h, pairs in by_comp.items()}

    @cached_property
    def _eta_by_vuln(self) -> dict[str, tuple[tuple[str, float], ...]]:
        by_vuln: dict[str, list[tuple[str, float]]] = {}
        for (v, h), value in self.eta.items():
            by_vuln.setdefault(v, []).append((h, value))
        return {v: tuple(sorted(pairs)) for v, pairs in by_vuln.items()}

    def components_of(self, vuln: str) -> tuple[str, ...]:
        """Components directly touched by a vulnerability (any eta entry)."""
        return tuple(h for h, _ in self._eta_by_vuln.get(vuln, ()))

    def impacted_components(self, vuln: str) -> tuple[str, ...]:
        """Components whose availability a vulnerability actually reduces."""
        return tuple(h for h, value in self._eta_by_vuln.get(vuln, ()) if value > 0.0)

    def vulns_hitting(self, component: str) -> tuple[str, ...]:
        return tuple(v for v, value in self._eta_by_component.get(component, ()) if value > 0.0)


@dataclass(frozen=True)
class StatusVector:
    """Per-component availability at one tick.

    Carries the exploited/offline sets it was computed from so that
    counterfactual recomputation (service-loss attribution) is possible
    from the vector alone.
    """

    status: Mapping[str, float]
    time: int = 0
    exploited: frozenset[str] = frozenset()
    offline: frozenset[str] = frozenset()

    def __getitem__(self, component: str) -> float:
        return self.status[component]


def compute_statuses(
    iag: ImpactAssessmentGraph,
    exploited: Iterable[str],
    offline: Iterable[str] = (),
    *,
    time: int = 0,
    pinned: Mapping[str, float] | None = None,
) -> StatusVector:
    """Propagate exploit and outage effects through the dependency graph.

    Each component's status is its dependency function over its suppliers'
    statuses, multiplied by ``(1 - eta)`` for every exploited vulnerability
    coupled to it.  Components in ``offline`` (down for an in-progress
    defender action) are forced to 0.  ``pinned`` overrides a component's
    status outright, which is how counterfactual what-if evaluations are
    expressed.
    """
    exploited_set = frozenset(exploited)
    offline_set = frozenset(offline)
    dg = iag.dg
    eta_by_comp = iag._eta_by_component
    status: dict[str, float] = {}
    for h in dg.evaluation_order:
        if pinned is not None and h in pinned:
            status[h] = pinned[h]
            continue
        if h in offline_set:
            status[h] = 0.0
            continue
        kind = dg.dep_fn.get(h, DepKind.STRICT)
        value = eval_dep_fn(kind, (status[s] for s in dg.suppliers(h)))
        if value != 0.0:
            for v, impact in eta_by_comp.get(h, ()):
                if v in exploited_set:
                    value *= 1.0 - impact
        status[h] = value
    return StatusVector(status=status, time=time, exploited=exploited_set, offline=offline_set)


def validate(iag: ImpactAssessmentGraph) -> list[str]:
    """Check all structural invariants; returns human-readable violations."""
    problems: list[str] = []
    ag, dg = iag.ag, iag.dg

    if ag.attacker_node in ag.nodes:
        problems.append(f"attacker node {ag.attacker_node!r} must not be a vulnerability node")
    for a, b in ag.edges:
        if a == b:
            problems.append(f"attack graph self-loop on {a!r}")
        for end in (a, b):
            if end != ag.attacker_node and end not in ag.nodes:
                problems.append(f"attack edge ({a!r}, {b!r}) references unknown node {end!r}")
        if b == ag.attacker_node:
            problems.append(f"attack edge ({a!r}, {b!r}) points at the attacker node")
    attacker_succ = set(ag.successors(ag.attacker_node))
    if attacker_succ != set(ag.entry_nodes):
        problems.append(
            f"attacker successors {sorted(attacker_succ)} do not match entry nodes {sorted(ag.entry_nodes)}"
        )
    for entry in ag.entry_nodes:
        if entry not in ag.nodes:
            problems.append(f"entry node {entry!r} is not a vulnerability node")
    edge_set = set(ag.edges)
    if len(edge_set) != len(ag.edges):
        problems.append("attack graph has duplicate edges")
    for edge in ag.edges:
        prob = ag.edge_prob.get(edge)
        if prob is None:
            problems.append(f"attack edge {edge!r} has no probability")
        elif not (0.0 < prob <= 1.0):
            problems.append(f"attack edge {edge!r} probability {prob} outside (0, 1]")

    for a, b in dg.edges:
        for end in (a, b):
            if end not in dg.nodes:
                problems.append(f"dependency edge ({a!r}, {b!r}) references unknown node {end!r}")
        if a == b:
            problems.append(f"dependency self-loop on {a!r}")
    try:
        dg.evaluation_order
    except DependencyCycleError as exc:
        problems.append(str(exc))
    for h in sorted(dg.nodes):
        if dg.suppliers(h) and h not in dg.dep_fn:
            problems.append(f"component {h!r} has suppliers but no dependency function")
    if not dg.service_nodes <= dg.nodes:
        problems.append(
            f"service nodes {sorted(dg.service_nodes - dg.nodes)} not in the dependency graph"
        )
    if set(dg.utility) != set(dg.service_nodes):
        problems.append(
            "utility must be defined exactly for the service nodes "
            f"(got {sorted(dg.utility)}, services {sorted(dg.service_nodes)})"
        )
    for h, u in dg.utility.items():
        if u < 0:
            problems.append(f"service {h!r} has negative utility {u}")

    for (v, h), value in iag.eta.items():
        if v not in ag.nodes:
            problems.append(f"eta entry ({v!r}, {h!r}) references unknown vulnerability {v!r}")
        if h not in dg.nodes:
            problems.append(f"eta entry ({v!r}, {h!r}) references unknown component {h!r}")
        if not (0.0 <= value <= 1.0):
            problems.append(f"eta entry ({v!r}, {h!r}) value {value} outside [0, 1]")

    return problems
