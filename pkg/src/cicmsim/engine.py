"""Discrete-time simulation of one attack against one defended system.

Tick structure: finish due defender actions, let the attacker move (the
order of those two flips with probability ``p_fast_step`` when they
collide), let the defender decide once the attack has been detected, then
evaluate statuses and record the tick.  Everything is deterministic given
the seed; the attacker and the collision coin draw from separate streams
so a different defender cannot perturb the attack except by blocking it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from .attack import ADVANCED, BLOCKED_REROUTED, HALTED, AttackState, attempt_step, select_goal
from .costs import ActionCostConfig, CostLedger, service_performance, unavailability_loss
from .defense import Countermeasure, DefenderView, RecoveryAction, recovery_decisions
from .graphs import ImpactAssessmentGraph, compute_statuses


@dataclass(frozen=True)
class SimulationConfig:
    """All scalar knobs of one simulation run."""

    p_step: float = 0.3
    p_fast_step: float = 0.3
    delay: int = 0
    t_horizon: int = 50
    lookahead: int = 2
    costs: ActionCostConfig = field(default_factory=ActionCostConfig)

    def with_overrides(self, **kwargs) -> "SimulationConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class PendingAction:
    action: Countermeasure | RecoveryAction
    started_at: int
    completes_at: int
    affected: tuple[str, ...]


@dataclass
class SystemState:
    """Mutable world state owned by one run."""

    exploited: set[str] = field(default_factory=set)
    patched: set[str] = field(default_factory=set)
    pending: list[PendingAction] = field(default_factory=list)
    offline: set[str] = field(default_factory=set)
    detected: bool = False
    detected_at: int | None = None
    tick: int = 0
    exploit_log: list[tuple[int, str]] = field(default_factory=list)

    def pending_targets(self, kind: str) -> frozenset[str]:
        return frozenset(p.action.target for p in self.pending if p.action.kind == kind)

    def _recompute_offline(self) -> None:
        self.offline = {h for p in self.pending for h in p.affected}

    def view(self, exploit_this_tick: bool = False, just_detected: bool = False) -> DefenderView:
        return DefenderView(
            exploited=frozenset(self.exploited),
            patched=frozenset(self.patched),
            pending_patches=self.pending_targets("patch"),
            pending_recoveries=self.pending_targets("recovery"),
            offline=frozenset(self.offline),
            exploit_order=tuple(v for _, v in self.exploit_log),
            exploit_this_tick=exploit_this_tick,
            just_detected=just_detected,
        )


def enqueue(
    state: SystemState,
    iag: ImpactAssessmentGraph,
    action: Countermeasure | RecoveryAction,
    now: int,
) -> PendingAction:
    """Schedule an action; its components go offline until it completes."""
    if action.target in state.pending_targets(action.kind):
        raise ValueError(f"{action.kind} already pending on {action.target!r}")
    if action.kind == "patch":
        affected = iag.components_of(action.target)
    else:
        affected = (action.target,)
    entry = PendingAction(
        action=action,
        started_at=now,
        completes_at=now + int(action.duration),
        affected=affected,
    )
    state.pending.append(entry)
    state._recompute_offline()
    return entry


@dataclass(frozen=True)
class TickRecord:
    tick: int
    sp: float
    service_loss: float
    direct_cost: float
    cum_cost: float
    exploited: tuple[str, ...]
    events: tuple[tuple[str, str], ...]


@dataclass
class SimulationTrace:
    """Per-tick record of one run; the unit every experiment aggregates."""

    strategy: str
    seed: int
    goal: str
    records: list[TickRecord] = field(default_factory=list)
    benefit_log: list[dict] = field(default_factory=list)

    @property
    def sp_series(self) -> list[float]:
        return [r.sp for r in self.records]

    @property
    def mean_sp(self) -> float:
        return sum(r.sp for r in self.records) / len(self.records)

    @property
    def total_cost(self) -> float:
        return self.records[-1].cum_cost if self.records else 0.0

    def attack_events(self) -> list[dict]:
        out = []
        for record in self.records:
            for kind, subject in record.events:
                if kind in ("exploit", "attack_halted"):
                    out.append({"tick": record.tick, "event": kind, "vuln": subject})
        return out

    def to_jsonl(self) -> str:
        lines = []
        for r in self.records:
            lines.append(
                json.dumps(
                    {
                        "tick": r.tick,
                        "sp": round(r.sp, 9),
                        "service_loss": round(r.service_loss, 9),
                        "direct_cost": round(r.direct_cost, 9),
                        "cum_cost": round(r.cum_cost, 9),
                        "exploited": list(r.exploited),
                        "events": [{"event": k, "subject": s} for k, s in r.events],
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        exploits = sum(1 for r in self.records for k, _ in r.events if k == "exploit")
        patches = sum(1 for r in self.records for k, _ in r.events if k == "patch_start")
        recoveries = sum(1 for r in self.records for k, _ in r.events if k == "recover_start")
        return {
            "strategy": self.strategy,
            "seed": self.seed,
            "goal": self.goal,
            "mean_sp": self.mean_sp,
            "final_sp": self.records[-1].sp if self.records else 1.0,
            "total_cost": self.total_cost,
            "exploits": exploits,
            "patches": patches,
            "recoveries": recoveries,
        }


def _rng_streams(seed) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent attacker and event-timing streams for one run."""
    base = seed if isinstance(seed, (tuple, list)) else (int(seed),)
    attacker = np.random.Generator(np.random.PCG64(np.random.SeedSequence(tuple(base) + (0,))))
    timing = np.random.Generator(np.random.PCG64(np.random.SeedSequence(tuple(base) + (1,))))
    return attacker, timing


def run(
    iag: ImpactAssessmentGraph,
    strategy,
    config: SimulationConfig,
    seed,
) -> SimulationTrace:
    """Simulate one attack under one defender strategy.

    The attack halting does not end the run: the defender keeps recovering
    (and paying for unavailability) until the horizon.
    """
    attacker_rng, timing_rng = _rng_streams(seed)
    strategy.reset()
    attack = AttackState(goal=select_goal(iag, attacker_rng))
    state = SystemState()
    ledger = CostLedger()
    goal_held_ticks = 0
    trace = SimulationTrace(
        strategy=strategy.name,
        seed=seed if isinstance(seed, int) else tuple(seed),
        goal=attack.goal,
    )

    for t in range(config.t_horizon + 1):
        state.tick = t
        events: list[tuple[str, str]] = []
        direct_cost = 0.0

        due = sorted(
            (p for p in state.pending if p.completes_at <= t),
            key=lambda p: (p.action.kind, p.action.target),
        )

        def complete_due() -> None:
            for entry in due:
                state.pending.remove(entry)
                if entry.action.kind == "patch":
                    state.patched.add(entry.action.target)
                    events.append(("patch_done", entry.action.target))
                else:
                    for v in iag.vulns_hitting(entry.action.target):
                        state.exploited.discard(v)
                    events.append(("recover_done", entry.action.target))
            state._recompute_offline()

        def attack_phase() -> None:
            if not attack.active:
                return
            outcome = attempt_step(
                iag, attack, state.exploited, state.patched, config.p_step, attacker_rng
            )
            if outcome.kind in (ADVANCED, BLOCKED_REROUTED):
                state.exploited.add(outcome.vuln)
                state.exploit_log.append((t, outcome.vuln))
                events.append(("exploit", outcome.vuln))
            elif outcome.kind == HALTED:
                events.append(("attack_halted", attack.goal))

        if due and attack.active and timing_rng.random() < config.p_fast_step:
            attack_phase()
            complete_due()
        else:
            complete_due()
            attack_phase()

        exploit_this_tick = any(kind == "exploit" for kind, _ in events)
        if attack.goal in state.exploited and not exploit_this_tick:
            # a finished attack sits on its goal; those quiet ticks still
            # burn detection time, otherwise a short attack is never seen
            goal_held_ticks += 1
        if not state.detected and attack.steps_taken + goal_held_ticks >= config.delay + 1:
            state.detected = True
            state.detected_at = t

        if state.detected:
            view = state.view(exploit_this_tick, just_detected=state.detected_at == t)
            cm = strategy.select(view, t)
            if (
                cm is not None
                and cm.target in iag.ag.nodes
                and cm.target not in state.patched
                and cm.target not in state.pending_targets("patch")
            ):
                if cm.duration <= 0:
                    state.patched.add(cm.target)
                    events.append(("patch_start", cm.target))
                    events.append(("patch_done", cm.target))
                else:
                    enqueue(state, iag, cm, t)
                    events.append(("patch_start", cm.target))
                direct_cost += cm.direct_cost
            recoveries = recovery_decisions(
                iag, state.view(exploit_this_tick), config.costs, t, config.t_horizon
            )
            for action in recoveries:
                enqueue(state, iag, action, t)
                events.append(("recover_start", action.target))
                direct_cost += action.direct_cost

        statuses = compute_statuses(iag, state.exploited, state.offline, time=t)
        sp = service_performance(iag, statuses)
        loss = unavailability_loss(iag, statuses)
        ledger.record(t, sp, loss, direct_cost)
        trace.records.append(
            TickRecord(
                tick=t,
                sp=sp,
                service_loss=loss,
                direct_cost=direct_cost,
                cum_cost=ledger.cumulative_cost()[-1],
                exploited=tuple(sorted(state.exploited)),
                events=tuple(events),
            )
        )

    benefit_log = getattr(strategy, "benefit_log", None)
    if benefit_log:
        trace.benefit_log = [dict(entry) for entry in benefit_log]
    return trace
