"""Dev scratch: criterion scorecard at reduced scale (not part of the package)."""
import dataclasses, sys, time
import cicmsim as cs
import cicmsim.defense as defense


def battery(depth: int, wait: bool, n_graphs=12, runs=25):
    defense.RECOVERY_WAITS_FOR_PATCH = wait
    t0 = time.time()
    g20 = [(f'g{i:02d}', cs.generate(cs.GeneratorConfig(dg_size=20, seed=200+i, ag_depth=depth))) for i in range(n_graphs)]
    g10 = [(f'h{i:02d}', cs.generate(cs.GeneratorConfig(dg_size=10, seed=100+i, ag_depth=depth))) for i in range(n_graphs)]
    out = [f'depth={depth} wait={wait}']
    p = cs.compare(cs.ExperimentConfig(graphs=tuple(g10), strategies=('cicm','aia'), runs_per_graph=runs, seed=7)).pairs[0]
    c2 = 0.30 <= p.relative_cost_saving <= 0.70 and p.cost_neg >= 0.8*n_graphs and p.mean_sp_diff > 0 and p.wilcoxon_cost.p_value < 0.01 and p.wilcoxon_sp.p_value < 0.01
    out.append(f'C2 {"PASS" if c2 else "FAIL"} saving={p.relative_cost_saving:+.2f} neg={p.cost_neg}/{n_graphs} p={p.wilcoxon_cost.p_value:.3f}/{p.wilcoxon_sp.p_value:.3f} spdiff={p.mean_sp_diff:+.3f}')
    p = cs.compare(cs.ExperimentConfig(graphs=tuple(g10), strategies=('cicm','ple'), runs_per_graph=runs, seed=7)).pairs[0]
    c3 = abs(p.mean_sp_diff) < 0.02 and abs(p.relative_cost_saving) < 0.10
    out.append(f'C3 {"PASS" if c3 else "FAIL"} sp={p.mean_sp_diff:+.3f} rel={p.relative_cost_saving:+.3f}')
    savings = {}
    for delay in (0,1,2,3,4):
        sim = cs.SimulationConfig(delay=delay)
        pp = cs.compare(cs.ExperimentConfig(graphs=tuple(g20), strategies=('cicm','ple'), runs_per_graph=runs, seed=7, sim=sim)).pairs[0]
        savings[delay] = (pp.relative_cost_saving, pp.cost_neg, pp.wilcoxon_cost.p_value)
    s = {d: v[0] for d, v in savings.items()}
    c4 = 0.08 <= s[2] <= 0.35 and savings[2][1] >= 0.75*n_graphs and savings[2][2] < 0.01
    c5 = (s[1] >= s[0] + 0.05) and (s[2] >= s[0] + 0.05) and not (s[3] > s[2] and s[4] > s[3])
    out.append(f'C4 {"PASS" if c4 else "FAIL"} C5 {"PASS" if c5 else "FAIL"} sweep=' + ' '.join(f'{100*s[d]:+.1f}' for d in range(5)) + f' neg2={savings[2][1]} p2={savings[2][2]:.3f}')
    grid = {}
    for r in (1.0, 2.5, 5.0):
        for u in (2.0, 5.0, 10.0):
            graphs = tuple((gid, cs.with_uniform_utility(g, u)) for gid, g in g20)
            costs = dataclasses.replace(cs.ActionCostConfig(), c_R=r*2.0)
            sim = cs.SimulationConfig(delay=2, costs=costs)
            pp = cs.compare(cs.ExperimentConfig(graphs=graphs, strategies=('cicm','ple'), runs_per_graph=runs, seed=7, sim=sim)).pairs[0]
            grid[(r,u)] = pp.relative_cost_saving
    util_rows = sum(1 for r in (1.0,2.5,5.0) if abs(grid[(r,10.0)]) < abs(grid[(r,2.0)]))
    ratio_cols = sum(1 for u in (2.0,5.0,10.0) if grid[(5.0,u)] >= grid[(1.0,u)])
    c6 = util_rows >= 2 and ratio_cols >= 2
    out.append(f'C6 {"PASS" if c6 else "FAIL"} util_rows={util_rows} ratio_cols={ratio_cols} grid=' +
               ' | '.join(','.join(f'{100*grid[(r,u)]:+.1f}' for u in (2.0,5.0,10.0)) for r in (1.0,2.5,5.0)))
    out.append(f'({time.time()-t0:.0f}s)')
    print('\n  '.join(out), flush=True)


if __name__ == '__main__':
    depth = int(sys.argv[1])
    wait = sys.argv[2] == '1'
    battery(depth, wait)
