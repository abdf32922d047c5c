"""Goal-directed stochastic attacker over the attack graph.

One attack per simulation run: it picks the highest-impact vulnerability
as its goal, then advances one exploit per tick with probability
``p_step``, choosing the next edge among those still on a viable path to
the goal, weighted by edge exploitability.  Patched nodes bounce the
attacker onto another viable exploit; when no viable path to the goal
remains, the attack halts for good.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import AttackGraph, ImpactAssessmentGraph, compute_statuses
from .costs import service_value

ADVANCED = "advanced"
BLOCKED_REROUTED = "blocked_rerouted"
HALTED = "halted"
IDLE = "idle"


@dataclass
class AttackState:
    """A single attack in progress: its goal and exploit history."""

    goal: str
    exploited: list[str] = field(default_factory=list)
    head: str | None = None
    active: bool = True
    steps_taken: int = 0

    def record_exploit(self, vuln: str) -> None:
        self.exploited.append(vuln)
        self.head = vuln
        self.steps_taken += 1


@dataclass(frozen=True)
class StepOutcome:
    kind: str
    vuln: str | None = None


def single_exploit_impact(iag: ImpactAssessmentGraph, vuln: str) -> float:
    """Service value lost per tick if ``vuln`` alone were exploited on a clean system."""
    clean = compute_statuses(iag, frozenset())
    hit = compute_statuses(iag, frozenset({vuln}))
    return service_value(iag, clean) - service_value(iag, hit)


def select_goal(iag: ImpactAssessmentGraph, rng: np.random.Generator) -> str:
    """Pick the attack goal: the vulnerability with the highest solo service impact.

    Ties (within a hair of the maximum) are broken by a uniform draw.
    """
    nodes = sorted(iag.ag.nodes)
    impacts = [single_exploit_impact(iag, v) for v in nodes]
    best = max(impacts)
    tied = [v for v, imp in zip(nodes, impacts) if imp >= best - 1e-9]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def _reaches_goal(ag: AttackGraph, start: str, goal: str, blocked: frozenset[str]) -> bool:
    """True if ``goal`` is reachable from ``start`` without entering ``blocked``."""
    if start in blocked:
        return False
    if start == goal:
        return True
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in ag.successors(node):
            if nxt in blocked or nxt in seen:
                continue
            if nxt == goal:
                return True
            seen.add(nxt)
            stack.append(nxt)
    return False


def _candidates(
    ag: AttackGraph,
    exploited: frozenset[str],
    patched: frozenset[str],
    goal: str,
    respect_patches: bool,
) -> dict[tuple[str, str], float]:
    # Patched nodes are removed from the attack graph outright, so they
    # never source steps even while their component is still compromised.
    sources = sorted(exploited - patched) or [ag.attacker_node]
    barrier = patched if respect_patches else frozenset()
    candidates: dict[tuple[str, str], float] = {}
    for src in sources:
        for tgt in ag.successors(src):
            if tgt in exploited or tgt in barrier:
                continue
            if _reaches_goal(ag, tgt, goal, barrier):
                candidates[(src, tgt)] = ag.edge_prob[(src, tgt)]
    total = sum(candidates.values())
    if total > 0:
        candidates = {edge: w / total for edge, w in candidates.items()}
    return candidates


def path_candidates(
    ag: AttackGraph,
    exploited: frozenset[str] | set[str],
    patched: frozenset[str] | set[str],
    goal: str,
) -> dict[tuple[str, str], float]:
    """Edges the attack could take next, with normalized selection weights.

    Sources are the currently exploited, unpatched nodes; a fresh (or
    fully purged or fenced) attack starts from the attacker node instead.
    A target qualifies if it is not already exploited or patched and some
    patched-free path leads from it to the goal.  Weights are
    proportional to the edge exploitability values and normalized over
    the candidate set.
    """
    return _candidates(ag, frozenset(exploited), frozenset(patched), goal, respect_patches=True)


def _draw_edge(
    candidates: dict[tuple[str, str], float], rng: np.random.Generator
) -> tuple[str, str]:
    # single uniform draw against the cumulative weights, in sorted edge order
    edges = sorted(candidates)
    u = rng.random()
    acc = 0.0
    for edge in edges:
        acc += candidates[edge]
        if u < acc:
            return edge
    return edges[-1]


def attempt_step(
    iag: ImpactAssessmentGraph,
    state: AttackState,
    exploited: frozenset[str] | set[str],
    patched: frozenset[str] | set[str],
    p_step: float,
    rng: np.random.Generator,
) -> StepOutcome:
    """Advance the attack by at most one exploit.

    ``exploited`` is the system's live compromise set (recovery removes
    entries from it), which is what the attack can pivot from; the
    state's own history is never pruned.  The intended edge is drawn from
    the attacker's topology-only view, so a patch can bounce the draw
    onto another viable candidate.
    """
    if not state.active:
        raise ValueError("attempt_step requires an active attack")
    exploited = frozenset(exploited)
    patched = frozenset(patched)
    if state.goal in exploited:
        return StepOutcome(IDLE)
    if rng.random() >= p_step:
        return StepOutcome(IDLE)
    viable = _candidates(iag.ag, exploited, patched, state.goal, respect_patches=True)
    if not viable:
        state.active = False
        return StepOutcome(HALTED)
    intended = _candidates(iag.ag, exploited, patched, state.goal, respect_patches=False)
    edge = _draw_edge(intended, rng)
    if edge in viable:
        state.record_exploit(edge[1])
        return StepOutcome(ADVANCED, edge[1])
    edge = _draw_edge(viable, rng)
    state.record_exploit(edge[1])
    return StepOutcome(BLOCKED_REROUTED, edge[1])
