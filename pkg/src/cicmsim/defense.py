"""Defender logic: recovery policy, benefit-scored patch selection, baselines.

Three selectors are provided:

* ``cicm`` scores every applicable patch by its expected effect on service
  losses and recovery costs, now and against future re-entry, and applies
  the best one only when its net benefit is positive.
* ``aia`` is a containment baseline: it patches the reachable-next
  vulnerability whose exploit would cost the most service value.
* ``ple`` is a treatment baseline: it always patches the latest exploited
  vulnerability.

Node recovery is a separate, strategy-independent policy: a compromised
component is rebuilt whenever the projected loss reduction over the
remaining horizon exceeds the rebuild cost.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from .costs import ActionCostConfig, service_value
from .graphs import AttackGraph, ImpactAssessmentGraph, compute_statuses


@dataclass(frozen=True)
class Countermeasure:
    """A patch on one vulnerability; effective after ``duration`` ticks."""

    target: str
    duration: int
    direct_cost: float
    kind: str = "patch"


@dataclass(frozen=True)
class RecoveryAction:
    """Rebuild of one compromised component."""

    target: str
    duration: int
    direct_cost: float
    kind: str = "recovery"


@dataclass(frozen=True)
class TrajectoryEstimate:
    """Probability-weighted per-tick losses over a short forecast window."""

    per_tick_losses: tuple[float, ...]
    recovery_costs: tuple[float, ...]

    @property
    def total(self) -> float:
        return sum(self.per_tick_losses) + sum(self.recovery_costs)

    def mix(self, other: "TrajectoryEstimate", weight: float) -> "TrajectoryEstimate":
        """Convex combination: ``weight`` of self, ``1 - weight`` of other."""
        w = weight
        return TrajectoryEstimate(
            per_tick_losses=tuple(
                w * a + (1 - w) * b for a, b in zip(self.per_tick_losses, other.per_tick_losses)
            ),
            recovery_costs=tuple(
                w * a + (1 - w) * b for a, b in zip(self.recovery_costs, other.recovery_costs)
            ),
        )


@dataclass(frozen=True)
class BenefitReport:
    """Score breakdown for one candidate countermeasure."""

    cm: Countermeasure
    benefit: float
    eaf: float
    traj_d_curr: float
    traj_d_lr: float
    horizon_weight: int

    def export_row(self, chosen: bool) -> dict:
        return {
            "candidate": self.cm.target,
            "eaf": self.eaf,
            "trajD_curr": self.traj_d_curr,
            "trajD_LR": self.traj_d_lr,
            "benefit": self.benefit,
            "chosen": chosen,
        }


@dataclass(frozen=True)
class DefenderView:
    """What the defender can see when deciding at a tick."""

    exploited: frozenset[str] = frozenset()
    patched: frozenset[str] = frozenset()
    pending_patches: frozenset[str] = frozenset()
    pending_recoveries: frozenset[str] = frozenset()
    offline: frozenset[str] = frozenset()
    exploit_order: tuple[str, ...] = ()
    exploit_this_tick: bool = False
    just_detected: bool = False

    def attack_head(self) -> str | None:
        """Where the attack is judged to sit for forecasting purposes.

        The most recent exploit that is still a live foothold; when the
        compromise has been fully cleaned or fenced, the last exploit
        event regardless (a dead head, from which no spread is forecast).
        """
        for vuln in reversed(self.exploit_order):
            if vuln in self.exploited and vuln not in self.patched:
                return vuln
        return self.exploit_order[-1] if self.exploit_order else None


def eaf(ag: AttackGraph, patched: Iterable[str], v_i: str, p_step: float) -> float:
    """Chance a fresh attack re-reaches ``v_i``: p_step to the shortest viable path.

    The path runs from the attacker node through unpatched nodes only;
    returns 0 when no such path exists.
    """
    blocked = frozenset(patched)
    if v_i in blocked:
        return 0.0
    dist = {ag.attacker_node: 0}
    queue = deque([ag.attacker_node])
    while queue:
        node = queue.popleft()
        for nxt in ag.successors(node):
            if nxt in blocked or nxt in dist:
                continue
            dist[nxt] = dist[node] + 1
            if nxt == v_i:
                return p_step ** dist[nxt]
            queue.append(nxt)
    return 0.0


def rearrival_probability(
    ag: AttackGraph,
    exploited: Iterable[str],
    patched: Iterable[str],
    target: str,
    p_step: float,
) -> float:
    """Chance the attacker gets to exploit ``target`` (again).

    The fresh-attack estimate (p_step per edge along the shortest
    unpatched path from the attacker node) floored by the live-incident
    estimate: the same rule with distances measured from the current
    footholds.  A held node counts as one step away, since it is one
    recovery away from being re-takeable.  Without the live-incident
    floor, every fencing patch on an ongoing attack is priced like a
    distant future threat and fails the benefit gate.
    """
    blocked = frozenset(patched)
    fresh = eaf(ag, blocked, target, p_step)
    footholds = frozenset(exploited) - blocked
    if not footholds or target in blocked:
        return fresh
    if target in footholds:
        return max(fresh, p_step)
    dist: dict[str, int] = {v: 0 for v in footholds}
    queue = deque(sorted(footholds))
    while queue:
        node = queue.popleft()
        for nxt in ag.successors(node):
            if nxt in blocked or nxt in dist:
                continue
            dist[nxt] = dist[node] + 1
            if nxt == target:
                return max(fresh, p_step ** dist[nxt])
            queue.append(nxt)
    return fresh


def _pinned_gain(iag: ImpactAssessmentGraph, exploited: frozenset[str], h: str) -> float:
    up = compute_statuses(iag, exploited, pinned={h: 1.0})
    down = compute_statuses(iag, exploited, pinned={h: 0.0})
    dg = iag.dg
    return sum(dg.utility[s] * (up[s] - down[s]) for s in dg.service_nodes)


def per_tick_recovery_gain(iag: ImpactAssessmentGraph, exploited: frozenset[str], h: str) -> float:
    """Per-tick service value separating ``h`` fully up from fully down.

    Judged under both the current compromise state and a fully restored
    one, taking the larger gain.  Either baseline alone deadlocks: under
    the frozen current state, two components jointly gating a service
    each show zero marginal gain (the other is still down); under the
    restored baseline, compromised redundant suppliers each show zero
    gain (the other is assumed back up).  Recovery proceeds whenever the
    component matters in either world.
    """
    current = _pinned_gain(iag, exploited, h)
    structural = _pinned_gain(iag, frozenset(), h) if exploited else current
    return max(current, structural)


def compromised_components(iag: ImpactAssessmentGraph, exploited: Iterable[str]) -> tuple[str, ...]:
    comps = {h for v in exploited for h in iag.impacted_components(v)}
    return tuple(sorted(comps))


RECOVERY_WAITS_FOR_PATCH = True


def recovery_decisions(
    iag: ImpactAssessmentGraph,
    state: DefenderView,
    costs: ActionCostConfig,
    t: int,
    t_horizon: int,
) -> list[RecoveryAction]:
    """Recover every compromised component whose loss reduction beats its cost.

    The projected benefit window starts once the full recover-patch-reenable
    cycle could be finished and runs to the horizon; with no window left,
    recovery cannot pay for itself.  A component whose vulnerability has a
    patch in flight waits for that patch, so the rebuilt component comes
    back fenced instead of being re-burned during the patch window.
    """
    exploited = frozenset(state.exploited)
    t_max = t + costs.t_R + costs.t_P + costs.t_D
    window = t_horizon - t_max
    actions = []
    for h in compromised_components(iag, exploited):
        if h in state.pending_recoveries:
            continue
        if window <= 0:
            continue
        if RECOVERY_WAITS_FOR_PATCH and any(
            v in state.pending_patches for v in iag.vulns_hitting(h)
        ):
            continue
        loss_reduction = per_tick_recovery_gain(iag, exploited, h) * window
        if loss_reduction > costs.c_R:
            actions.append(RecoveryAction(target=h, duration=costs.t_R, direct_cost=costs.c_R))
    return actions


class _TrajectoryEvaluator:
    """Enumerates short attack forecasts; caches per-state valuations.

    Values are independent of the decision tick (the embedded would-recover
    test uses the full-horizon window), so cached entries can be shared
    across ticks and runs on the same graph without changing results.
    """

    def __init__(
        self,
        iag: ImpactAssessmentGraph,
        costs: ActionCostConfig,
        k: int,
        p_step: float,
        t_horizon: int,
    ):
        if k < 1:
            raise ValueError("lookahead depth must be at least 1")
        self.iag = iag
        self.costs = costs
        self.k = k
        self.p_step = p_step
        self.recovery_window = max(0, t_horizon - (costs.t_R + costs.t_P + costs.t_D))
        self._loss_cache: dict[tuple[frozenset[str], frozenset[str]], float] = {}
        self._recover_cache: dict[tuple[frozenset[str], str], bool] = {}
        self._traj_cache: dict[tuple, TrajectoryEstimate] = {}

    def _service_loss(self, exploited: frozenset[str], offline: frozenset[str]) -> float:
        key = (exploited, offline)
        loss = self._loss_cache.get(key)
        if loss is None:
            sv = compute_statuses(self.iag, exploited, offline)
            dg = self.iag.dg
            loss = sum(dg.utility[h] * (1.0 - sv[h]) for h in dg.service_nodes)
            self._loss_cache[key] = loss
        return loss

    def _would_recover(self, exploited: frozenset[str], h: str) -> bool:
        key = (exploited, h)
        decision = self._recover_cache.get(key)
        if decision is None:
            gain = per_tick_recovery_gain(self.iag, exploited, h)
            decision = gain * self.recovery_window > self.costs.c_R
            self._recover_cache[key] = decision
        return decision

    def _root_recovery_cost(self, exploited: frozenset[str]) -> float:
        return sum(
            self.costs.c_R
            for h in compromised_components(self.iag, exploited)
            if self._would_recover(exploited, h)
        )

    def _new_recovery_cost(self, parent: frozenset[str], vuln: str, child: frozenset[str]) -> float:
        already = {h for v in parent for h in self.iag.impacted_components(v)}
        total = 0.0
        for h in self.iag.impacted_components(vuln):
            if h not in already and self._would_recover(child, h):
                total += self.costs.c_R
        return total

    def run(
        self,
        exploited0: frozenset[str],
        head: str | None,
        blocked_at: Callable[[int], frozenset[str]],
        offline_at: Callable[[int], frozenset[str]],
        cache_key: tuple | None = None,
    ) -> TrajectoryEstimate:
        if cache_key is not None:
            cached = self._traj_cache.get(cache_key)
            if cached is not None:
                return cached
        ag = self.iag.ag
        per_tick = [0.0] * (self.k + 1)
        recovery = [0.0] * (self.k + 1)
        recovery[0] = self._root_recovery_cost(exploited0)
        current: dict[tuple[frozenset[str], str], float] = {(exploited0, head): 1.0}
        for level in range(self.k + 1):
            offline = offline_at(level)
            for (exploited, _), prob in current.items():
                per_tick[level] += prob * self._service_loss(exploited, offline)
            if level == self.k:
                break
            blocked = blocked_at(level + 1)
            nxt: dict[tuple[frozenset[str], str], float] = {}
            for (exploited, node), prob in current.items():
                # a dead head or a patched (removed) node sources nothing
                if node is None or node in blocked:
                    succs = []
                else:
                    succs = [
                        v
                        for v in ag.successors(node)
                        if v not in exploited and v not in blocked
                    ]
                if not succs:
                    nxt[(exploited, node)] = nxt.get((exploited, node), 0.0) + prob
                    continue
                stay = prob * (1.0 - self.p_step)
                nxt[(exploited, node)] = nxt.get((exploited, node), 0.0) + stay
                total_w = sum(ag.edge_prob[(node, v)] for v in succs)
                for v in succs:
                    q = prob * self.p_step * ag.edge_prob[(node, v)] / total_w
                    child = exploited | {v}
                    key = (child, v)
                    nxt[key] = nxt.get(key, 0.0) + q
                    recovery[level + 1] += q * self._new_recovery_cost(exploited, v, child)
            current = nxt
        estimate = TrajectoryEstimate(tuple(per_tick), tuple(recovery))
        if cache_key is not None:
            self._traj_cache[cache_key] = estimate
        return estimate


def _no_offline(_level: int) -> frozenset[str]:
    return frozenset()


def expected_trajectory(
    iag: ImpactAssessmentGraph,
    state: DefenderView,
    v_i: str | None,
    k: int,
    p_step: float,
    config,
    *,
    _evaluator: _TrajectoryEvaluator | None = None,
) -> TrajectoryEstimate:
    """Forecast losses over the next ``k`` ticks with no countermeasure.

    The attack is modelled as a chain extending from its head ``v_i``:
    each tick it stays put with probability ``1 - p_step`` or exploits one
    unpatched successor, weighted by edge exploitability.  Each visited
    state contributes its per-tick service loss plus, on first entry, the
    rebuild cost of the components it newly compromises (when the recovery
    policy would rebuild them).
    """
    if k < 1:
        raise ValueError("lookahead depth must be at least 1")
    ev = _evaluator or _TrajectoryEvaluator(iag, config.costs, k, p_step, config.t_horizon)
    patched = frozenset(state.patched)
    exploited = frozenset(state.exploited)
    return ev.run(
        exploited,
        v_i,
        blocked_at=lambda _level: patched,
        offline_at=_no_offline,
        cache_key=("exp", exploited, v_i, patched),
    )


def _long_run_state(
    iag: ImpactAssessmentGraph, state: DefenderView, target: str
) -> tuple[frozenset[str], str]:
    """Post-patch world: the target's components rebuilt, their exploits cleared."""
    restored = set(iag.components_of(target))
    cleared = {
        v
        for v in state.exploited
        if any(h in restored for h in iag.impacted_components(v))
    }
    exploited_lr = frozenset(state.exploited) - cleared
    head = None
    for vuln in reversed(state.exploit_order):
        if vuln in exploited_lr and vuln not in state.patched and vuln != target:
            head = vuln
            break
    return exploited_lr, head


def deviating_trajectories(
    iag: ImpactAssessmentGraph,
    state: DefenderView,
    cm: Countermeasure,
    v_i: str | None,
    k: int,
    p_step: float,
    p_fast_step: float,
    config,
    *,
    _evaluator: _TrajectoryEvaluator | None = None,
) -> tuple[TrajectoryEstimate, TrajectoryEstimate]:
    """Forecasts with the countermeasure applied: application window and long run.

    The current-window estimate keeps the patched components offline while
    the patch is being applied; with probability ``p_fast_step`` the
    attacker lands one more step before the patch takes hold.  The
    long-run estimate re-enumerates attack paths on the reduced graph with
    the target gone and its components rebuilt.
    """
    if cm.target in state.patched:
        raise ValueError(f"countermeasure target {cm.target!r} is already patched")
    ev = _evaluator or _TrajectoryEvaluator(iag, config.costs, k, p_step, config.t_horizon)
    patched = frozenset(state.patched)
    exploited = frozenset(state.exploited)
    target = cm.target
    blocked_with_target = patched | {target}
    offline_window = frozenset(iag.components_of(target))
    t_p = cm.duration

    def offline_during_patch(level: int) -> frozenset[str]:
        return offline_window if level < t_p else frozenset()

    slow = ev.run(
        exploited,
        v_i,
        blocked_at=lambda _level: blocked_with_target,
        offline_at=offline_during_patch,
        cache_key=("dev_slow", exploited, v_i, patched, target),
    )
    if p_fast_step > 0.0:
        fast = ev.run(
            exploited,
            v_i,
            blocked_at=lambda level: patched if level == 1 else blocked_with_target,
            offline_at=offline_during_patch,
            cache_key=("dev_fast", exploited, v_i, patched, target),
        )
        curr = fast.mix(slow, p_fast_step)
    else:
        curr = slow

    exploited_lr, head_lr = _long_run_state(iag, state, target)
    lr = ev.run(
        exploited_lr,
        head_lr,
        blocked_at=lambda _level: blocked_with_target,
        offline_at=_no_offline,
        cache_key=("dev_lr", exploited_lr, head_lr, patched, target),
    )
    return curr, lr


def _cicm_candidates(iag: ImpactAssessmentGraph, state: DefenderView) -> list[str]:
    """Patch candidates: entries and the attack boundary, both sides of it.

    The boundary includes the active footholds themselves (patching one
    fences every path through it, a treatment move) and their unexploited
    successors (blocking a single next step, a containment move).
    Interior nodes far from the action are never considered.
    """
    unavailable = state.patched | state.pending_patches
    candidates = {v for v in iag.ag.entry_nodes if v not in unavailable}
    for src in state.exploited - state.patched:
        if src not in unavailable:
            candidates.add(src)
        for v in iag.ag.successors(src):
            if v not in unavailable and v not in state.exploited:
                candidates.add(v)
    return sorted(candidates)


def cicm_select(
    iag: ImpactAssessmentGraph,
    state: DefenderView,
    config,
    t: int,
    *,
    _evaluator: _TrajectoryEvaluator | None = None,
) -> tuple[Countermeasure | None, list[BenefitReport]]:
    """Score candidate patches and pick the best strictly-positive one.

    The benefit of a patch combines how much of the forecast loss it
    avoids while being applied (net of the outage it causes) with the
    per-tick long-run improvement, scaled by the chance the attacker gets
    to exploit the target again and by the remaining horizon.  That
    re-arrival chance is the larger of the fresh-attack estimate (from
    the attacker node) and the ongoing attack's foothold estimate.
    """
    k = config.lookahead
    ev = _evaluator or _TrajectoryEvaluator(iag, config.costs, k, config.p_step, config.t_horizon)
    head = state.attack_head()
    exp = expected_trajectory(iag, state, head, k, config.p_step, config, _evaluator=ev)
    effective_patched = state.patched | state.pending_patches
    horizon_weight = config.t_horizon - t
    reports = []
    for target in _cicm_candidates(iag, state):
        cm = Countermeasure(target=target, duration=config.costs.t_P, direct_cost=config.costs.c_P)
        curr, lr = deviating_trajectories(
            iag, state, cm, head, k, config.p_step, config.p_fast_step, config, _evaluator=ev
        )
        attack_freq = rearrival_probability(
            iag.ag, state.exploited, effective_patched, target, config.p_step
        )
        traj_d_curr = exp.total - curr.total
        traj_d_lr = (exp.total - lr.total) / (k + 1)
        benefit = attack_freq * horizon_weight * traj_d_lr + traj_d_curr - cm.direct_cost
        reports.append(
            BenefitReport(
                cm=cm,
                benefit=benefit,
                eaf=attack_freq,
                traj_d_curr=traj_d_curr,
                traj_d_lr=traj_d_lr,
                horizon_weight=horizon_weight,
            )
        )
    reports.sort(key=lambda r: (-r.benefit, r.cm.target))
    if reports and reports[0].benefit > 0:
        return reports[0].cm, reports
    return None, reports


def aia_select(
    iag: ImpactAssessmentGraph, state: DefenderView, t: int, costs: ActionCostConfig | None = None
) -> Countermeasure | None:
    """Patch whichever next-exploitable vulnerability would hurt the most.

    The marginal impact of a candidate is the service value that would be
    lost if it were exploited on top of the current compromise state.
    Ties break toward the lowest identifier; exploited vulnerabilities are
    never patched by this strategy.
    """
    costs = costs or ActionCostConfig()
    unavailable = state.exploited | state.patched | state.pending_patches
    frontier = sorted(
        {
            v
            for src in state.exploited
            for v in iag.ag.successors(src)
            if v not in unavailable
        }
    )
    if not frontier:
        return None
    baseline = service_value(
        iag, compute_statuses(iag, state.exploited, state.offline)
    )
    best_target = None
    best_impact = -1.0
    for v in frontier:
        hit = service_value(
            iag, compute_statuses(iag, state.exploited | {v}, state.offline)
        )
        impact = baseline - hit
        if impact > best_impact + 1e-12:
            best_impact = impact
            best_target = v
    return Countermeasure(target=best_target, duration=costs.t_P, direct_cost=costs.c_P)


def ple_select(
    iag: ImpactAssessmentGraph, state: DefenderView, t: int, costs: ActionCostConfig | None = None
) -> Countermeasure | None:
    """Patch the most recently exploited vulnerability that is still unpatched."""
    costs = costs or ActionCostConfig()
    unavailable = state.patched | state.pending_patches
    for vuln in reversed(state.exploit_order):
        if vuln not in unavailable:
            return Countermeasure(target=vuln, duration=costs.t_P, direct_cost=costs.c_P)
    return None


class CicmStrategy:
    """Benefit-maximizing selector with a per-graph forecast cache."""

    name = "cicm"

    def __init__(self, iag: ImpactAssessmentGraph, config):
        self.iag = iag
        self.config = config
        self._evaluator = _TrajectoryEvaluator(
            iag, config.costs, config.lookahead, config.p_step, config.t_horizon
        )
        self.benefit_log: list[dict] = []

    def reset(self) -> None:
        self.benefit_log = []

    def select(self, state: DefenderView, t: int) -> Countermeasure | None:
        chosen, reports = cicm_select(
            self.iag, state, self.config, t, _evaluator=self._evaluator
        )
        if reports:
            self.benefit_log.append(
                {
                    "tick": t,
                    "reports": [
                        r.export_row(chosen is not None and r.cm.target == chosen.target)
                        for r in reports
                    ],
                }
            )
        return chosen


class AiaStrategy:
    """Containment baseline; decides whenever a new exploit is observed."""

    name = "aia"

    def __init__(self, iag: ImpactAssessmentGraph, config):
        self.iag = iag
        self.config = config

    def reset(self) -> None:
        pass

    def select(self, state: DefenderView, t: int) -> Countermeasure | None:
        if not (state.exploit_this_tick or state.just_detected):
            return None
        return aia_select(self.iag, state, t, self.config.costs)


class PleStrategy:
    """Treatment baseline: always patch the latest exploit."""

    name = "ple"

    def __init__(self, iag: ImpactAssessmentGraph, config):
        self.iag = iag
        self.config = config

    def reset(self) -> None:
        pass

    def select(self, state: DefenderView, t: int) -> Countermeasure | None:
        return ple_select(self.iag, state, t, self.config.costs)


class NoStrategy:
    """Recovery-only play; never issues a countermeasure."""

    name = "none"

    def __init__(self, iag: ImpactAssessmentGraph, config):
        pass

    def reset(self) -> None:
        pass

    def select(self, state: DefenderView, t: int) -> Countermeasure | None:
        return None


STRATEGY_NAMES = ("cicm", "aia", "ple", "none")


def make_strategy(name: str, iag: ImpactAssessmentGraph, config):
    table = {
        "cicm": CicmStrategy,
        "aia": AiaStrategy,
        "ple": PleStrategy,
        "none": NoStrategy,
    }
    if name not in table:
        raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGY_NAMES}")
    return table[name](iag, config)
