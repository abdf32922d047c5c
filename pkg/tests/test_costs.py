import dataclasses

import pytest

from cicmsim import (
    ActionCostConfig,
    CostLedger,
    Countermeasure,
    ImpactAssessmentGraph,
    RecoveryAction,
    compute_statuses,
    observed_action_cost,
    service_loss,
    service_performance,
    service_value,
)
from conftest import rng_for, tiny_iag


class TestServicePerformance:
    def test_equal_weights_average(self, sample):
        sv = compute_statuses(sample, {"v_C"})  # h_T down, h_S up
        assert service_performance(sample, sv) == pytest.approx(0.5)

    def test_weighted(self, sample):
        dg = dataclasses.replace(sample.dg, utility={"h_S": 3.0, "h_T": 1.0})
        iag = ImpactAssessmentGraph(ag=sample.ag, dg=dg, eta=sample.eta)
        sv = compute_statuses(iag, {"v_C"})  # h_S=1, h_T=0
        assert service_performance(iag, sv) == pytest.approx(0.75)

    def test_clean_system_is_one(self, sample):
        sv = compute_statuses(sample, set())
        assert service_performance(sample, sv) == 1.0

    def test_no_services_is_an_error(self, sample):
        dg = dataclasses.replace(sample.dg, service_nodes=frozenset(), utility={})
        iag = ImpactAssessmentGraph(ag=sample.ag, dg=dg, eta=sample.eta)
        sv = compute_statuses(iag, set())
        with pytest.raises(ValueError):
            service_performance(iag, sv)

    def test_invariant_under_utility_scaling(self):
        rng = rng_for(3)
        for _ in range(20):
            iag = tiny_iag(rng)
            scaled_dg = dataclasses.replace(
                iag.dg, utility={h: u * 37.5 for h, u in iag.dg.utility.items()}
            )
            scaled = ImpactAssessmentGraph(ag=iag.ag, dg=scaled_dg, eta=iag.eta)
            exploited = {sorted(iag.ag.nodes)[0]}
            a = service_performance(iag, compute_statuses(iag, exploited))
            b = service_performance(scaled, compute_statuses(scaled, exploited))
            assert a == pytest.approx(b, abs=1e-12)
            assert 0.0 <= a <= 1.0


class TestServiceLoss:
    def test_zero_when_unchanged(self, sample):
        prev = compute_statuses(sample, {"v_D"})
        now = compute_statuses(sample, {"v_D"})
        for h in sample.dg.nodes:
            assert service_loss(sample, h, now, prev) == 0.0

    def test_strict_dependency_attributed(self, sample):
        prev = compute_statuses(sample, set())
        now = compute_statuses(sample, {"v_C"})
        assert service_loss(sample, "h_C", now, prev) == pytest.approx(5.0)

    def test_masked_drop_costs_nothing(self, sample):
        # h_D drops while h_C is already down; h_T cannot get any worse
        prev = compute_statuses(sample, {"v_C"})
        now = compute_statuses(sample, {"v_C", "v_D"})
        assert service_loss(sample, "h_D", now, prev) == 0.0

    def test_unknown_component_is_an_error(self, sample):
        sv = compute_statuses(sample, set())
        with pytest.raises(KeyError):
            service_loss(sample, "nope", sv, sv)

    def test_single_cause_equals_total_drop(self):
        # when exactly one component changes state directly, the loss
        # attributed to it is the whole service-value drop
        rng = rng_for(11)
        checked = 0
        for _ in range(80):
            iag = tiny_iag(rng)
            vulns = sorted(iag.ag.nodes)
            v = vulns[int(rng.integers(len(vulns)))]
            touched = [h for (vv, h), e in iag.eta.items() if vv == v and e > 0]
            if len(touched) != 1:
                continue
            prev = compute_statuses(iag, set())
            now = compute_statuses(iag, {v})
            drop = service_value(iag, prev) - service_value(iag, now)
            assert service_loss(iag, touched[0], now, prev) == pytest.approx(drop, abs=1e-9)
            checked += 1
        assert checked > 20


class TestObservedActionCost:
    def test_component_already_down(self, sample):
        # patch v_C while h_C has been down since before the action
        baseline = compute_statuses(sample, {"v_C"}, time=-1)
        window = [baseline] + [
            compute_statuses(sample, {"v_C"}, time=t) for t in range(3)
        ]
        cm = Countermeasure(target="v_C", duration=2, direct_cost=2.0)
        assert observed_action_cost(sample, cm, window) == pytest.approx(2.0)

    def test_outage_charged_per_tick(self, sample):
        # patching v_A takes h_A down for the whole window: 5/tick for 3 ticks
        baseline = compute_statuses(sample, set(), time=-1)
        window = [baseline] + [
            compute_statuses(sample, set(), offline={"h_A"}, time=t) for t in range(3)
        ]
        cm = Countermeasure(target="v_A", duration=2, direct_cost=2.0)
        assert observed_action_cost(sample, cm, window) == pytest.approx(2.0 + 3 * 5.0)

    def test_recovery_of_isolated_component(self, sample):
        # nothing depends on h_D while h_C is down: only the direct cost
        baseline = compute_statuses(sample, {"v_C"}, time=-1)
        window = [baseline] + [
            compute_statuses(sample, {"v_C"}, offline={"h_D"}, time=t) for t in range(2)
        ]
        action = RecoveryAction(target="h_D", duration=1, direct_cost=3.0)
        assert observed_action_cost(sample, action, window) == pytest.approx(3.0)

    def test_short_window_rejected(self, sample):
        sv = compute_statuses(sample, set())
        cm = Countermeasure(target="v_C", duration=2, direct_cost=2.0)
        with pytest.raises(ValueError):
            observed_action_cost(sample, cm, [sv, sv])


class TestCostLedger:
    def test_totals_and_csv(self):
        ledger = CostLedger()
        ledger.record(0, 1.0, 0.0, 2.0)
        ledger.record(1, 0.5, 5.0, 0.0)
        ledger.record(2, 1.0, 0.0, 3.0)
        assert ledger.total_cost == pytest.approx(10.0)
        assert ledger.cumulative_cost() == pytest.approx([2.0, 7.0, 10.0])
        lines = ledger.to_csv().strip().splitlines()
        assert lines[0] == "tick,sp,service_loss,direct_cost,cum_cost"
        assert lines[2] == "1,0.5,5,0,7"

    def test_rejects_negative_entries(self):
        ledger = CostLedger()
        with pytest.raises(ValueError):
            ledger.record(0, 1.0, -1.0, 0.0)


class TestActionCostConfig:
    def test_defaults(self):
        costs = ActionCostConfig()
        assert (costs.c_P, costs.c_R, costs.t_P, costs.t_R) == (2.0, 3.0, 2, 1)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ActionCostConfig(c_P=-1.0)

    def test_compromise_time_is_fixed(self):
        with pytest.raises(ValueError):
            ActionCostConfig(t_v=2)
