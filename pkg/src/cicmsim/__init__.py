"""Cyber-resilience simulation with cost-aware countermeasure selection.

Build or generate an impact graph (attack graph + dependency graph +
availability coupling), simulate goal-directed attacks against it under a
pluggable defense strategy, and compare strategies over paired
Monte-Carlo experiments.
"""

from .graphs import (
    AttackGraph,
    DependencyCycleError,
    DependencyGraph,
    DepKind,
    ImpactAssessmentGraph,
    StatusVector,
    compute_statuses,
    eval_dep_fn,
    validate,
)
from .graph_io import GraphFormatError, dump_iag, iag_from_dict, iag_to_dict, load_iag
from .costs import (
    ActionCostConfig,
    CostLedger,
    observed_action_cost,
    service_loss,
    service_performance,
    service_value,
    unavailability_loss,
)
from .attack import AttackState, StepOutcome, attempt_step, path_candidates, select_goal, single_exploit_impact
from .defense import (
    BenefitReport,
    Countermeasure,
    DefenderView,
    RecoveryAction,
    TrajectoryEstimate,
    aia_select,
    cicm_select,
    deviating_trajectories,
    eaf,
    expected_trajectory,
    make_strategy,
    ple_select,
    recovery_decisions,
)
from .engine import SimulationConfig, SimulationTrace, SystemState, enqueue, run
from .generator import GenerationError, GeneratorConfig, generate
from .experiments import (
    ComparisonReport,
    ExperimentConfig,
    compare,
    curve_svg,
    resilience_curve,
    sweep,
    with_uniform_utility,
)
from .stats import WilcoxonResult, wilcoxon_signed_rank
from .sample import sample_iag

__version__ = "0.1.0"

__all__ = [
    "ActionCostConfig",
    "AttackGraph",
    "AttackState",
    "BenefitReport",
    "ComparisonReport",
    "CostLedger",
    "Countermeasure",
    "DefenderView",
    "DependencyCycleError",
    "DependencyGraph",
    "DepKind",
    "ExperimentConfig",
    "GenerationError",
    "GeneratorConfig",
    "GraphFormatError",
    "ImpactAssessmentGraph",
    "RecoveryAction",
    "SimulationConfig",
    "SimulationTrace",
    "StatusVector",
    "StepOutcome",
    "SystemState",
    "TrajectoryEstimate",
    "WilcoxonResult",
    "aia_select",
    "attempt_step",
    "cicm_select",
    "compare",
    "compute_statuses",
    "curve_svg",
    "deviating_trajectories",
    "dump_iag",
    "eaf",
    "enqueue",
    "eval_dep_fn",
    "expected_trajectory",
    "generate",
    "iag_from_dict",
    "iag_to_dict",
    "load_iag",
    "make_strategy",
    "observed_action_cost",
    "path_candidates",
    "ple_select",
    "recovery_decisions",
    "resilience_curve",
    "run",
    "sample_iag",
    "select_goal",
    "service_loss",
    "service_performance",
    "service_value",
    "single_exploit_impact",
    "sweep",
    "unavailability_loss",
    "validate",
    "wilcoxon_signed_rank",
    "with_uniform_utility",
]
