"""One simulated attack against the sample system, defended by the
benefit-driven selector; prints the tick-by-tick story and the decision log.

Run:  python demos/02_single_run.py [seed]
"""

import sys

from cicmsim import SimulationConfig, make_strategy, run, sample_iag


def main(seed: int = 7):
    iag = sample_iag()
    config = SimulationConfig(p_step=0.5, t_horizon=30)
    strategy = make_strategy("cicm", iag, config)
    trace = run(iag, strategy, config, seed=seed)

    print(f"attack goal: {trace.goal}\n")
    print("tick  SP    events")
    for record in trace.records:
        if record.events or record.sp < 1.0:
            events = ", ".join(f"{kind}({subject})" for kind, subject in record.events)
            print(f"{record.tick:>4}  {record.sp:.2f}  {events}")

    print("\npatch decisions (top candidate per decision tick):")
    for entry in trace.benefit_log:
        top = entry["reports"][0]
        mark = "APPLIED" if top["chosen"] else "held back"
        print(
            f"  t={entry['tick']:>2} {top['candidate']}: benefit={top['benefit']:.2f} "
            f"(eaf={top['eaf']:.2f}, now={top['trajD_curr']:.2f}, "
            f"later={top['trajD_LR']:.2f}) -> {mark}"
        )

    summary = trace.summary()
    print(
        f"\nmean SP {summary['mean_sp']:.3f}, total cost {summary['total_cost']:.1f}, "
        f"{summary['patches']} patches, {summary['recoveries']} recoveries"
    )


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
