"""Service-performance metric, service-loss attribution and action costs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graphs import ImpactAssessmentGraph, StatusVector, compute_statuses


@dataclass(frozen=True)
class ActionCostConfig:
    """Direct costs and durations of defender actions.

    Disabling (``c_D``/``t_D``) is carried only because the recovery
    window formula includes it; it is held at zero.  ``t_v`` is the fixed
    one-tick compromise time, so at most one exploit lands per tick.
    """

    c_P: float = 2.0
    c_R: float = 3.0
    c_D: float = 0.0
    t_P: int = 2
    t_R: int = 1
    t_D: int = 0
    t_v: int = 1

    def __post_init__(self) -> None:
        for name in ("c_P", "c_R", "c_D"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("t_P", "t_R", "t_D"):
            value = getattr(self, name)
            if value < 0 or int(value) != value:
                raise ValueError(f"{name} must be a nonnegative integer")
        if self.t_v != 1:
            raise ValueError("t_v is fixed at 1 tick per exploit")


def service_performance(iag: ImpactAssessmentGraph, statuses: StatusVector) -> float:
    """Utility-weighted mean availability of the client-facing services."""
    dg = iag.dg
    if not dg.service_nodes:
        raise ValueError("no service nodes configured; service performance is undefined")
    total_utility = sum(dg.utility[h] for h in dg.service_nodes)
    if total_utility <= 0:
        raise ValueError("total service utility must be positive")
    return sum(dg.utility[h] * statuses[h] for h in dg.service_nodes) / total_utility


def service_value(iag: ImpactAssessmentGraph, statuses: StatusVector) -> float:
    """Utility actually delivered this tick: sum of u(h) * s(h) over services."""
    return sum(iag.dg.utility[h] * statuses[h] for h in iag.dg.service_nodes)


def unavailability_loss(iag: ImpactAssessmentGraph, statuses: StatusVector) -> float:
    """Utility lost this tick relative to a fully available system."""
    return sum(iag.dg.utility[h] * (1.0 - statuses[h]) for h in iag.dg.service_nodes)


def service_loss(
    iag: ImpactAssessmentGraph,
    h: str,
    statuses_now: StatusVector,
    statuses_prev: StatusVector,
) -> float:
    """Service value lost because component ``h`` moved off its previous status.

    Recomputes the service statuses in a counterfactual where ``h`` is held
    at its previous value (everything else as of ``statuses_now``) and
    differences against the actual service value.  Zero when ``h`` did not
    move; negative when ``h`` recovered (a gain).
    """
    if h not in iag.dg.nodes:
        raise KeyError(f"unknown component {h!r}")
    previous = statuses_prev[h]
    if statuses_now[h] == previous:
        return 0.0
    counterfactual = compute_statuses(
        iag,
        statuses_now.exploited,
        statuses_now.offline,
        time=statuses_now.time,
        pinned={h: previous},
    )
    return service_value(iag, counterfactual) - service_value(iag, statuses_now)


def observed_action_cost(iag, action, window: Sequence[StatusVector]) -> float:
    """After-the-fact cost of a defender action from a recorded trace window.

    ``window[0]`` is the pre-action baseline (tick t-1) and the following
    entries cover ticks ``t .. t + duration``.  The cost is the action's
    direct cost plus, for every component the action touches, the service
    loss relative to the baseline at each tick of the window.
    """
    duration = int(action.duration)
    if len(window) < duration + 2:
        raise ValueError(
            f"trace window has {len(window)} entries; needs baseline plus {duration + 1} action ticks"
        )
    target = action.target
    if target in iag.ag.nodes:
        affected = iag.components_of(target)
    elif target in iag.dg.nodes:
        affected = (target,)
    else:
        raise KeyError(f"action target {target!r} is neither a vulnerability nor a component")
    baseline = window[0]
    total = float(action.direct_cost)
    for statuses in window[1 : duration + 2]:
        for h in affected:
            total += service_loss(iag, h, statuses, baseline)
    return total


@dataclass
class CostLedger:
    """Per-tick account of service losses and direct action costs."""

    ticks: list[int] = field(default_factory=list)
    sp: list[float] = field(default_factory=list)
    service_loss: list[float] = field(default_factory=list)
    direct_cost: list[float] = field(default_factory=list)

    def record(self, tick: int, sp: float, service_loss: float, direct_cost: float) -> None:
        if service_loss < 0 or direct_cost < 0:
            raise ValueError("ledger entries must be nonnegative")
        self.ticks.append(tick)
        self.sp.append(sp)
        self.service_loss.append(service_loss)
        self.direct_cost.append(direct_cost)

    @property
    def total_service_loss(self) -> float:
        return sum(self.service_loss)

    @property
    def total_direct_cost(self) -> float:
        return sum(self.direct_cost)

    @property
    def total_cost(self) -> float:
        return self.total_service_loss + self.total_direct_cost

    def cumulative_cost(self) -> list[float]:
        out = []
        running = 0.0
        for loss, direct in zip(self.service_loss, self.direct_cost):
            running += loss + direct
            out.append(running)
        return out

    def to_csv(self) -> str:
        lines = ["tick,sp,service_loss,direct_cost,cum_cost"]
        for tick, sp, loss, direct, cum in zip(
            self.ticks, self.sp, self.service_loss, self.direct_cost, self.cumulative_cost()
        ):
            lines.append(f"{tick},{sp:.6g},{loss:.6g},{direct:.6g},{cum:.6g}")
        return "\n".join(lines) + "\n"
