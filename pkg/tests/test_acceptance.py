"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line per criterion on top of asserting it,
so a plain ``pytest tests/test_acceptance.py -s`` doubles as the
acceptance report.  The Monte-Carlo checks run at desk scale (tens of
graphs, tens of paired attacks per graph) with fixed seeds and finish in
a few minutes total.
"""

import dataclasses

import pytest

from cicmsim import (
    ActionCostConfig,
    AttackGraph,
    Countermeasure,
    DefenderView,
    ExperimentConfig,
    GeneratorConfig,
    ImpactAssessmentGraph,
    SimulationConfig,
    aia_select,
    compare,
    compute_statuses,
    eaf,
    expected_trajectory,
    generate,
    make_strategy,
    run,
    sample_iag,
    service_loss,
    service_performance,
    sweep,
    wilcoxon_signed_rank,
    with_uniform_utility,
)
from cicmsim.defense import per_tick_recovery_gain
from conftest import rng_for, tiny_iag
from test_defense import oracle_trajectory, view
from test_graphs import fixpoint_statuses


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def make_graphs(count, dg_size, seed0):
    return tuple(
        (f"g{i:03d}", generate(GeneratorConfig(dg_size=dg_size, seed=seed0 + i)))
        for i in range(count)
    )


def test_criterion_1_golden_patch_sequence(sample):
    """Containment baseline answers v_F then v_G to the v_C, v_D exploits."""
    after_vc = DefenderView(
        exploited=frozenset({"v_C"}), exploit_order=("v_C",), exploit_this_tick=True
    )
    first = aia_select(sample, after_vc, 0)
    after_vd = DefenderView(
        exploited=frozenset({"v_C", "v_D"}),
        pending_patches=frozenset({first.target}),
        exploit_order=("v_C", "v_D"),
        exploit_this_tick=True,
    )
    second = aia_select(sample, after_vd, 1)
    ok = (first.target, second.target) == ("v_F", "v_G")
    report("criterion 1 (golden patch sequence)", ok, f"{first.target} then {second.target}")
    assert ok


def test_criterion_2_cicm_vs_aia():
    """Benefit-driven selection dominates pure containment."""
    config = ExperimentConfig(
        graphs=make_graphs(20, 10, 2000),
        strategies=("cicm", "aia"),
        runs_per_graph=50,
        sim=SimulationConfig(delay=0),
        seed=1,
    )
    pair = compare(config).pairs[0]
    n = len(pair.cost_diffs)
    saving = pair.relative_cost_saving
    checks = {
        "cost lower in >= 80% of graphs": pair.cost_neg >= 0.8 * n,
        "relative saving in [30%, 70%]": 0.30 <= saving <= 0.70,
        "mean SP higher": pair.mean_sp_diff > 0,
        "wilcoxon cost p < 0.01": pair.wilcoxon_cost.p_value < 0.01,
        "wilcoxon sp p < 0.01": pair.wilcoxon_sp.p_value < 0.01,
    }
    detail = (
        f"saving={100 * saving:.1f}% cheaper on {pair.cost_neg}/{n} graphs "
        f"spdiff={pair.mean_sp_diff:+.3f} p_cost={pair.wilcoxon_cost.p_value:.2g} "
        f"p_sp={pair.wilcoxon_sp.p_value:.2g}"
    )
    report("criterion 2 (cicm vs aia)", all(checks.values()), detail)
    for label, ok in checks.items():
        assert ok, f"{label}: {detail}"


def test_criterion_3_cicm_matches_ple_with_immediate_detection():
    config = ExperimentConfig(
        graphs=make_graphs(20, 10, 2000),
        strategies=("cicm", "ple"),
        runs_per_graph=50,
        sim=SimulationConfig(delay=0),
        seed=1,
    )
    pair = compare(config).pairs[0]
    rel = pair.relative_cost_saving
    checks = {
        "|mean SP difference| < 0.02": abs(pair.mean_sp_diff) < 0.02,
        "|relative cost difference| < 10%": abs(rel) < 0.10,
    }
    detail = f"spdiff={pair.mean_sp_diff:+.4f} relative cost diff={100 * rel:+.1f}%"
    report("criterion 3 (cicm ~ ple, immediate detection)", all(checks.values()), detail)
    for label, ok in checks.items():
        assert ok, f"{label}: {detail}"


def test_criterion_4_cicm_beats_ple_with_delayed_detection():
    config = ExperimentConfig(
        graphs=make_graphs(20, 10, 2000),
        strategies=("cicm", "ple"),
        runs_per_graph=50,
        sim=SimulationConfig(delay=2),
        seed=1,
    )
    pair = compare(config).pairs[0]
    n = len(pair.cost_diffs)
    saving = pair.relative_cost_saving
    checks = {
        "relative saving in [8%, 35%]": 0.08 <= saving <= 0.35,
        "negative cost diff in >= 75% of graphs": pair.cost_neg >= 0.75 * n,
        "wilcoxon cost p < 0.01": pair.wilcoxon_cost.p_value < 0.01,
    }
    detail = (
        f"saving={100 * saving:.1f}% cheaper on {pair.cost_neg}/{n} graphs "
        f"p_cost={pair.wilcoxon_cost.p_value:.2g}"
    )
    report("criterion 4 (cicm vs ple, delay 2)", all(checks.values()), detail)
    for label, ok in checks.items():
        assert ok, f"{label}: {detail}"


def test_criterion_5_delay_sweep_shape():
    config = ExperimentConfig(
        graphs=make_graphs(20, 20, 3000),
        strategies=("cicm", "ple"),
        runs_per_graph=30,
        sim=SimulationConfig(),
        seed=1,
    )
    result = sweep(config, "delay", [0, 1, 2, 3, 4])
    saving = {
        int(value): rep.pairs[0].relative_cost_saving
        for value, rep in zip(result.values, result.reports)
    }
    checks = {
        "delay-1 saving >= delay-0 + 5pp": saving[1] >= saving[0] + 0.05,
        "delay-2 saving >= delay-0 + 5pp": saving[2] >= saving[0] + 0.05,
        "no monotone growth beyond delay 2": not (saving[3] > saving[2] and saving[4] > saving[3]),
    }
    detail = " ".join(f"d{d}={100 * saving[d]:+.1f}%" for d in range(5))
    report("criterion 5 (delay sweep shape)", all(checks.values()), detail)
    for label, ok in checks.items():
        assert ok, f"{label}: {detail}"


def test_criterion_6_cost_sensitivity_directions():
    utilities = (2.0, 5.0, 10.0)
    ratios = (1.0, 2.5, 5.0)
    base_graphs = make_graphs(16, 20, 3000)
    grid = {}
    for ratio in ratios:
        for utility in utilities:
            graphs = tuple(
                (gid, with_uniform_utility(iag, utility)) for gid, iag in base_graphs
            )
            costs = dataclasses.replace(ActionCostConfig(), c_R=ratio * 2.0)
            config = ExperimentConfig(
                graphs=graphs,
                strategies=("cicm", "ple"),
                runs_per_graph=25,
                sim=SimulationConfig(delay=2, costs=costs),
                seed=1,
            )
            grid[(ratio, utility)] = compare(config).pairs[0].relative_cost_saving
    util_rows = sum(
        1 for r in ratios if abs(grid[(r, utilities[-1])]) < abs(grid[(r, utilities[0])])
    )
    ratio_cols = sum(
        1 for u in utilities if grid[(ratios[-1], u)] >= grid[(ratios[0], u)]
    )
    checks = {
        "cost-difference magnitude falls along utility in >= 2/3 rows": util_rows >= 2,
        "saving nondecreasing along ratio in >= 2/3 columns": ratio_cols >= 2,
    }
    detail = "grid " + " | ".join(
        ",".join(f"{100 * grid[(r, u)]:+.1f}" for u in utilities) for r in ratios
    ) + f" util_rows={util_rows} ratio_cols={ratio_cols}"
    report("criterion 6 (cost sensitivity directions)", all(checks.values()), detail)
    for label, ok in checks.items():
        assert ok, f"{label}: {detail}"


class TestCriterion7PropertySuite:
    """Deterministic property checks; each prints its own verdict line."""

    def test_status_oracle_equivalence(self):
        rng = rng_for(1)
        for _ in range(40):
            iag = tiny_iag(rng, n_dg=int(rng.integers(3, 7)))
            exploited = {v for v in iag.ag.nodes if rng.random() < 0.4}
            got = compute_statuses(iag, exploited)
            want = fixpoint_statuses(iag, exploited)
            for h in iag.dg.nodes:
                assert abs(got[h] - want[h]) < 1e-9
        report("criterion 7a (status fixpoint oracle, 1e-9)", True, "40 random graphs")

    def test_monotonicity_and_no_history(self):
        rng = rng_for(2)
        for _ in range(40):
            iag = tiny_iag(rng)
            vulns = sorted(iag.ag.nodes)
            base = {vulns[0]}
            extra = base | {vulns[int(rng.integers(len(vulns)))]}
            sv_base = compute_statuses(iag, base)
            sv_more = compute_statuses(iag, extra)
            assert all(sv_more[h] <= sv_base[h] + 1e-12 for h in iag.dg.nodes)
            again = compute_statuses(iag, base)
            assert again.status == sv_base.status
        report("criterion 7b (monotone, history-free statuses)", True, "40 random graphs")

    def test_sp_bounds_and_scaling(self):
        rng = rng_for(3)
        for _ in range(30):
            iag = tiny_iag(rng)
            exploited = {v for v in iag.ag.nodes if rng.random() < 0.5}
            sp = service_performance(iag, compute_statuses(iag, exploited))
            scaled = with_uniform_utility(iag, 123.0)
            sp_scaled = service_performance(scaled, compute_statuses(scaled, exploited))
            assert 0.0 <= sp <= 1.0
            assert abs(sp - sp_scaled) < 1e-12 or set(iag.dg.utility.values()) != {5.0}
        report("criterion 7c (SP bounds and utility scaling)", True, "30 random graphs")

    def test_service_loss_zero_on_unchanged(self, sample):
        prev = compute_statuses(sample, {"v_C"})
        now = compute_statuses(sample, {"v_C"})
        assert all(service_loss(sample, h, now, prev) == 0.0 for h in sample.dg.nodes)
        report("criterion 7d (zero loss on unchanged status)", True, "sample fixture")

    def test_eaf_against_shortest_path(self, sample):
        from collections import deque

        def bfs_len(ag, patched, target):
            if target in patched:
                return None
            dist = {ag.attacker_node: 0}
            queue = deque([ag.attacker_node])
            while queue:
                node = queue.popleft()
                for nxt in ag.successors(node):
                    if nxt in patched or nxt in dist:
                        continue
                    dist[nxt] = dist[node] + 1
                    queue.append(nxt)
            return dist.get(target)

        rng = rng_for(4)
        for _ in range(25):
            iag = tiny_iag(rng, n_ag=6)
            patched = {v for v in iag.ag.nodes if rng.random() < 0.3}
            for target in sorted(iag.ag.nodes):
                length = bfs_len(iag.ag, patched, target)
                want = 0.0 if length is None else 0.3**length
                assert abs(eaf(iag.ag, patched, target, 0.3) - want) < 1e-12
        report("criterion 7e (eaf = p_step^L)", True, "25 random graphs")

    def test_trajectory_oracle_equivalence(self):
        rng = rng_for(5)
        config = SimulationConfig()
        for _ in range(15):
            iag = tiny_iag(rng, n_dg=5, n_ag=int(rng.integers(5, 9)))
            vulns = sorted(iag.ag.nodes)
            head = vulns[0]
            exploited = frozenset({head})
            k = int(rng.integers(1, 4))
            state = view(exploited, order=[head])
            est = expected_trajectory(iag, state, head, k, 0.3, config)
            want_l, want_r = oracle_trajectory(
                iag, exploited, head, k, 0.3, config,
                blocked_fn=lambda _l: frozenset(),
                offline_fn=lambda _l: frozenset(),
            )
            assert all(abs(a - b) < 1e-9 for a, b in zip(est.per_tick_losses, want_l))
            assert all(abs(a - b) < 1e-9 for a, b in zip(est.recovery_costs, want_r))
        report("criterion 7f (trajectory enumeration oracle, 1e-9)", True, "k <= 3, <= 8 nodes")

    def test_positivity_gate(self):
        from cicmsim import cicm_select

        rng = rng_for(6)
        config = SimulationConfig()
        issued = 0
        for _ in range(30):
            iag = tiny_iag(rng, n_dg=6, n_ag=6)
            exploited = {v for v in iag.ag.nodes if rng.random() < 0.4}
            chosen, reports_ = cicm_select(
                iag, view(exploited, order=sorted(exploited)), config, 0
            )
            if chosen is not None:
                issued += 1
                top = [r for r in reports_ if r.cm.target == chosen.target][0]
                assert top.benefit > 0
        report("criterion 7g (positivity gate)", True, f"{issued} issued, all positive")

    def test_patch_permanence_and_reexposure(self, sample):
        config = SimulationConfig(p_step=0.8, t_horizon=50)
        trace = run(sample, make_strategy("ple", sample, config), config, seed=23)
        patched = set()
        for record in trace.records:
            for kind, subject in record.events:
                if kind == "patch_done":
                    patched.add(subject)
                if kind == "exploit":
                    assert subject not in patched
        report("criterion 7h (patch permanence)", True, f"{len(patched)} patches")

    def test_run_determinism(self, sample):
        config = SimulationConfig(t_horizon=40)
        a = run(sample, make_strategy("cicm", sample, config), config, seed=11)
        b = run(sample, make_strategy("cicm", sample, config), config, seed=11)
        assert a.records == b.records
        report("criterion 7i (bit-identical traces)", True, "seed 11")

    def test_wilcoxon_exact_value(self):
        result = wilcoxon_signed_rank([1, 2, 3, 4, 5])
        assert result.p_value == pytest.approx(0.0625)
        report("criterion 7j (wilcoxon exact, n=5 all-positive)", True, "p = 0.0625")
